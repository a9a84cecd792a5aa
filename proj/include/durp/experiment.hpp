#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "durp/dual_solver.hpp"
#include "durp/evaluation.hpp"
#include "durp/metric.hpp"
#include "durp/projection.hpp"

namespace durp {

/// Invalid configuration (unknown key, bad value, inconsistent settings).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { kDurp, kDuori, kSrp, kSpca, kEuclid };

std::string_view to_string(Method method);
Method parse_method(const std::string& name);

struct RunConfig {
  std::string train_file;
  std::string test_file;
  Method method = Method::kDurp;
  Index m = 10;                      // random projections / PCA components
  std::size_t triplets = 100000;     // N
  int epochs = 3;
  std::optional<double> lambda;      // unset means 1/N
  LossModel loss = LossModel::hinge();
  int k = 5;                         // neighbors for k-NN
  std::uint64_t seed = 1;            // trial t uses seed + t
  int trials = 5;
  ProjectionKind projection = ProjectionKind::kGaussian;  // durp and srp only
  std::string out;                   // JSON report path
  std::string metric_out;            // learned metric of the last trial (binary)
  std::string trace_out;             // solver trace of the last trial (CSV)

  double effective_lambda() const;
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Applies one `key=value` setting. Keys use the CLI flag names without dashes
/// (method, m, triplets, epochs, lambda, loss, gamma, k, seed, trials,
/// projection, train-file, test-file, out, metric-out, trace-out).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat `key = value` lines; `#` starts a comment. Later lines win.
void read_config(std::istream& in, RunConfig& config);
void load_config_file(const std::string& path, RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  EvalReport eval;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  std::vector<EpochRecord> trace;
  double train_seconds = 0.0;
  Eigen::VectorXd alpha;
  SymMatrix metric;  // PSD-projected metric in the original space
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single trial
};

struct RunReport {
  RunConfig config;
  std::vector<TrialResult> trials;
  Summary map;
  Summary knn_accuracy;
  std::string started_at;  // UTC, ISO 8601
};

nlohmann::json to_json(const RunReport& report);

/// Runs one trial of the configured method on in-memory data.
TrialResult run_trial(const RunConfig& config, const LabeledDataset& train,
                      const LabeledDataset& test, int trial);

/// All trials on in-memory data.
RunReport run_method(const RunConfig& config, const LabeledDataset& train,
                     const LabeledDataset& test);

/// Loads train/test files named in the config, then runs all trials.
RunReport run_method(const RunConfig& config);

Summary summarize(const std::vector<double>& values);

}  // namespace durp
