#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "durp/gram.hpp"

namespace durp {

/// Settings shared by the two recovery-bound harnesses.
struct HarnessConfig {
  Index d = 400;
  Index rank = 3;                 // intrinsic rank of the low-rank data
  Index n = 300;
  std::size_t triplets = 500;     // N
  int classes = 3;
  std::vector<Index> m_sweep{5, 10, 20, 50, 100, 400};
  double epsilon = 1.0 / 6.0;     // reported alongside the m it would require
  double delta = 0.1;
  double eta = 1e-6;              // target suboptimality of the projected dual
  double gamma = 1.0;             // Lipschitz constant of l' (smoothed hinge width 1/gamma)
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  /// Data scale; 0 picks the harness default (see the .cpp for the choice).
  double scale = 0.0;
  double oracle_tolerance = 1e-8; // duality gap the oracle solve stops at

  void validate() const;
};

/// Recovery error of one DuRP run against the oracle metric.
struct RecoverySample {
  Index m = 0;
  std::uint64_t seed = 0;
  double error = 0.0;       // |Pi(M*) - Pi(M^)|_F / |M*|_F
  double oracle_gap = 0.0;
  double solve_gap = 0.0;
};

struct RecoveryRow {
  Index m = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double epsilon = 0.0;  // epsilon for which this m meets the sample-size condition
  double bound = 0.0;    // 3 eps/(1 - 3 eps), NaN when eps > 1/6
};

struct Theorem1Report {
  HarnessConfig config;
  double scale = 0.0;
  std::vector<RecoverySample> samples;
  std::vector<RecoveryRow> rows;
  double identity_median = 0.0;     // m = d with the identity projection
  double required_m = 0.0;          // sample-size condition at config.epsilon
};

/// Low-rank recovery harness: for each seed, solves the hinge-loss dual in the
/// original space (oracle) and in each randomly projected space, and records
/// the relative error between the PSD-projected metrics.
Theorem1Report verify_theorem1(const HarnessConfig& config);

void write_theorem1_csv(std::ostream& out, const Theorem1Report& report);

struct DualRecoverySample {
  Index m = 0;                // identity rows carry m = d
  bool identity = false;
  std::uint64_t seed = 0;
  double measured = 0.0;      // |alpha* - alpha^|_2
  double bound = 0.0;         // max(8 eps gamma kappa |alpha*|, sqrt(2 gamma eta))
  double epsilon = 0.0;
  double kappa = 0.0;
  double alpha_norm = 0.0;
  double suboptimality = 0.0; // certified N * gap of the projected solve
  int epochs = 0;
  bool satisfied = false;
};

struct Theorem2Report {
  HarnessConfig config;
  double scale = 0.0;
  std::vector<DualRecoverySample> samples;
  std::vector<KappaStats> kappas;  // one per seed
  double oracle_alpha_error = 0.0; // largest sqrt(2 gamma N gap) over oracle solves
};

/// Full-rank dual-recovery harness with the smoothed hinge loss.
Theorem2Report verify_theorem2(const HarnessConfig& config);

void write_theorem2_csv(std::ostream& out, const Theorem2Report& report);

/// Low-rank recovery setting: r=3, d=400, n=300, N=500, m in {5,...,400}, 10 seeds.
HarnessConfig theorem1_defaults();
/// Full-rank setting: d=500, n=400 in two classes, N=200, m in {10,...,500},
/// gamma=1, eta=1e-6, oracle solved to a 1e-12 duality gap, 10 seeds.
HarnessConfig theorem2_defaults();

/// Original-space triplet caches the harnesses build for one seed (scale 0
/// picks the default).
TripletCache theorem1_instance(const HarnessConfig& config, std::uint64_t seed);
TripletCache theorem2_instance(const HarnessConfig& config, std::uint64_t seed);

/// Default data scales used when HarnessConfig::scale is 0.
double default_theorem1_scale();
double default_theorem2_scale(Index d);

/// Sample-size conditions solved for epsilon.
double theorem1_epsilon(Index m, Index rank, double delta);
double theorem2_epsilon(Index m, std::size_t triplets, double delta);

}  // namespace durp
