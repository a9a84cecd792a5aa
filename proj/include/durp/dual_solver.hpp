#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "durp/gram.hpp"
#include "durp/rng.hpp"

namespace durp {

/// Triplet loss applied to z = <M, A_t>.
///
/// hinge:          l(z) = max(0, 1 - z),                 l*(a) = a
/// smoothed hinge: l(z) = 0 (z >= 1), (1-z)^2/(2 gamma) (1-gamma <= z < 1),
///                 1 - z - gamma/2 (z < 1-gamma),        l*(a) = a + gamma a^2 / 2
/// Both conjugates are finite only on [-1, 0]. The smoothed loss has a
/// 1/gamma-Lipschitz derivative.
struct LossModel {
  enum class Kind { kHinge, kSmoothedHinge };

  Kind kind = Kind::kHinge;
  double gamma = 1.0;

  static LossModel hinge() { return {Kind::kHinge, 1.0}; }
  static LossModel smoothed_hinge(double gamma);

  double value(double z) const;
  /// A subgradient in [-1, 0]; for the hinge, 0 at z = 1.
  double derivative(double z) const;
  /// l*(a); throws std::domain_error outside [-1, 0].
  double conjugate(double a) const;
  /// Second derivative of l* (0 for the hinge).
  double conjugate_curvature() const { return kind == Kind::kHinge ? 0.0 : gamma; }
};

std::string_view to_string(LossModel::Kind kind);

/// Dual iterate plus the p x p accumulator S = sum_t alpha_t (u_t u_t^T - v_t v_t^T).
/// Only the lower triangle of `accumulator` is maintained; use
/// symmetric_accumulator() for the full matrix.
struct SolverState {
  Eigen::VectorXd alpha;
  Eigen::MatrixXd accumulator;
  double lambda = 0.0;
  LossModel loss;
  int epoch = 0;
  Rng rng{0};
};

SolverState make_solver_state(const GramView& view, const LossModel& loss, double lambda,
                              std::uint64_t seed);

Eigen::MatrixXd symmetric_accumulator(const SolverState& state);

/// Subspace metric -S / (lambda N) implied by the current dual iterate.
Eigen::MatrixXd primal_metric(const SolverState& state);

/// Rebuilds S from alpha. Returns the drift |S_old - S_new|_F relative to
/// sum_t |alpha_t| (|u_t|^2 + |v_t|^2).
double refresh_accumulator(SolverState& state, const GramView& view);

/// D(alpha) = -sum_t l*(alpha_t) - alpha^T G alpha / (2 lambda N), with
/// alpha^T G alpha = |S|_F^2. Throws std::domain_error if alpha leaves [-1, 0]^N.
double dual_objective(const SolverState& state, const GramView& view);

/// P(M) - D(alpha)/N where P is the regularized mean loss at M = -S/(lambda N).
double duality_gap(const SolverState& state, const GramView& view);

/// Exact maximization of D over coordinate t, clipped to [-1, 0].
void sdca_update(SolverState& state, const GramView& view, Index t);

/// One pass of stochastic subgradient descent with step 1/(lambda s) on the
/// primal, visiting triplets in `order`. Each visited triplet records
/// alpha_t = l'(<M, A_t>); the iterate after s steps is -S_s / (lambda s).
/// Requires a fresh state (alpha = 0).
void sgd_epoch(SolverState& state, const GramView& view, std::span<const std::int64_t> order);

struct EpochRecord {
  int epoch = 0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double seconds = 0.0;
};

struct DualSolution {
  Eigen::VectorXd alpha;
  double objective = 0.0;
  double gap = 0.0;
  std::vector<EpochRecord> trace;
  Eigen::MatrixXd accumulator;  // full symmetric S
  double lambda = 0.0;
  LossModel loss;
  double max_refresh_drift = 0.0;
};

struct CsdcaOptions {
  int epochs = 3;
  /// When positive, SDCA epochs continue past `epochs` until the duality gap
  /// falls to this value or `max_epochs` is reached.
  double target_gap = 0.0;
  int max_epochs = 1000;
};

/// Epoch 1 is sgd_epoch, later epochs are sdca_update sweeps over a fresh
/// random permutation. Deterministic given the seed.
DualSolution csdca_solve(const TripletCache& cache, const LossModel& loss, double lambda,
                         const CsdcaOptions& options, std::uint64_t seed);

inline DualSolution csdca_solve(const TripletCache& cache, const LossModel& loss, double lambda,
                                int epochs, std::uint64_t seed) {
  return csdca_solve(cache, loss, lambda, CsdcaOptions{epochs, 0.0, 1000}, seed);
}

/// CSV `epoch,dual_objective,duality_gap,seconds`.
void write_trace_csv(std::ostream& out, const std::vector<EpochRecord>& trace);

}  // namespace durp
