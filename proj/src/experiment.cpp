#include "durp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "durp/dataset.hpp"
#include "durp/rng.hpp"
#include "durp/triplets.hpp"

namespace durp {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kDurp: return "durp";
    case Method::kDuori: return "duori";
    case Method::kSrp: return "srp";
    case Method::kSpca: return "spca";
    case Method::kEuclid: return "euclid";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kDurp, Method::kDuori, Method::kSrp, Method::kSpca, Method::kEuclid}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "' (durp, duori, srp, spca, euclid)");
}

double RunConfig::effective_lambda() const {
  return lambda.value_or(triplets ? 1.0 / static_cast<double>(triplets) : 1.0);
}

void RunConfig::validate() const {
  if (m < 1) throw ConfigError("m must be >= 1");
  if (triplets < 1) throw ConfigError("triplets must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (lambda && !(*lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (projection == ProjectionKind::kPca) {
    throw ConfigError("projection must be gaussian or identity; use method=spca for PCA");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T result{};
  if (!(in >> result) || !(in >> std::ws).eof()) {
    throw ConfigError("invalid value '" + value + "' for '" + key + "'");
  }
  return result;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "method") {
    config.method = parse_method(value);
  } else if (key == "m") {
    config.m = parse_number<Index>(key, value);
  } else if (key == "triplets") {
    config.triplets = parse_number<std::size_t>(key, value);
  } else if (key == "epochs") {
    config.epochs = parse_number<int>(key, value);
  } else if (key == "lambda") {
    if (value == "auto") config.lambda.reset();
    else config.lambda = parse_number<double>(key, value);
  } else if (key == "loss") {
    if (value == "hinge") config.loss = LossModel::hinge();
    else if (value == "smoothed_hinge") config.loss.kind = LossModel::Kind::kSmoothedHinge;
    else throw ConfigError("unknown loss '" + value + "' (hinge, smoothed_hinge)");
  } else if (key == "gamma") {
    const double gamma = parse_number<double>(key, value);
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
    config.loss.gamma = gamma;
  } else if (key == "k") {
    config.k = parse_number<int>(key, value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "trials") {
    config.trials = parse_number<int>(key, value);
  } else if (key == "projection") {
    if (value == "gaussian") config.projection = ProjectionKind::kGaussian;
    else if (value == "identity") config.projection = ProjectionKind::kIdentity;
    else throw ConfigError("unknown projection '" + value + "' (gaussian, identity)");
  } else if (key == "train-file") {
    config.train_file = value;
  } else if (key == "test-file") {
    config.test_file = value;
  } else if (key == "out") {
    config.out = value;
  } else if (key == "metric-out") {
    config.metric_out = value;
  } else if (key == "trace-out") {
    config.trace_out = value;
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

void read_config(std::istream& in, RunConfig& config) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  read_config(in, config);
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json j = {{"train_file", config.train_file},
                      {"test_file", config.test_file},
                      {"method", to_string(config.method)},
                      {"m", config.m},
                      {"triplets", config.triplets},
                      {"epochs", config.epochs},
                      {"lambda", config.effective_lambda()},
                      {"loss", to_string(config.loss.kind)},
                      {"k", config.k},
                      {"seed", config.seed},
                      {"trials", config.trials},
                      {"projection", to_string(config.projection)}};
  if (config.loss.kind == LossModel::Kind::kSmoothedHinge) j["gamma"] = config.loss.gamma;
  return j;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

TrialResult run_trial(const RunConfig& config, const LabeledDataset& train,
                      const LabeledDataset& test, int trial) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  TrialResult result;
  result.trial = trial;
  result.seed = config.seed + static_cast<std::uint64_t>(trial);
  const double lambda = config.effective_lambda();

  if (config.method == Method::kEuclid) {
    result.metric = SymMatrix::identity(train.dim());
    result.eval = evaluate(result.metric, train, test, config.k);
    return result;
  }

  const TripletSet triplets =
      sample_active_triplets(train, config.triplets, derive_seed(result.seed, 0));
  const auto start = Clock::now();
  const TripletCache cache = build_cache(train, triplets);
  const std::uint64_t solver_seed = derive_seed(result.seed, 2);

  auto make_projection = [&]() -> ProjectionMatrix {
    if (config.method == Method::kSpca) return pca_projection(pca_fit(train, config.m));
    if (config.projection == ProjectionKind::kIdentity) return identity_projection(train.dim());
    return gaussian_matrix(train.dim(), config.m, derive_seed(result.seed, 1));
  };

  DualSolution solution;
  SymMatrix metric;
  switch (config.method) {
    case Method::kDuori: {
      solution = csdca_solve(cache, config.loss, lambda, config.epochs, solver_seed);
      metric = recover_metric(solution.alpha, cache, lambda);
      break;
    }
    case Method::kDurp: {
      const ProjectionMatrix projection = make_projection();
      const TripletCache projected = project_cache(cache, projection);
      solution = csdca_solve(projected, config.loss, lambda, config.epochs, solver_seed);
      metric = recover_metric(solution.alpha, cache, lambda);
      break;
    }
    case Method::kSrp:
    case Method::kSpca: {
      const ProjectionMatrix projection = make_projection();
      const TripletCache projected = project_cache(cache, projection);
      solution = csdca_solve(projected, config.loss, lambda, config.epochs, solver_seed);
      const double ln = lambda * static_cast<double>(projected.size());
      metric = assemble_subspace_metric(SymMatrix(-solution.accumulator / ln), projection);
      break;
    }
    case Method::kEuclid: break;
  }
  result.metric = psd_project(metric);
  result.train_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  result.dual_objective = solution.objective;
  result.duality_gap = solution.gap;
  result.trace = std::move(solution.trace);
  result.alpha = std::move(solution.alpha);
  result.eval = evaluate(result.metric, train, test, config.k);
  return result;
}

RunReport run_method(const RunConfig& config, const LabeledDataset& train,
                     const LabeledDataset& test) {
  config.validate();
  if (train.dim() != test.dim()) throw ConfigError("train and test dimensions differ");
  RunReport report;
  report.config = config;
  report.started_at = utc_now();
  std::vector<double> maps, accuracies;
  for (int trial = 0; trial < config.trials; ++trial) {
    try {
      report.trials.push_back(run_trial(config, train, test, trial));
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(trial) + ": " + e.what());
    }
    maps.push_back(report.trials.back().eval.map);
    accuracies.push_back(report.trials.back().eval.knn_accuracy);
  }
  report.map = summarize(maps);
  report.knn_accuracy = summarize(accuracies);
  return report;
}

RunReport run_method(const RunConfig& config) {
  if (config.train_file.empty() || config.test_file.empty()) {
    throw ConfigError("train-file and test-file are required");
  }
  config.validate();
  auto [train, test] = load_train_test(config.train_file, config.test_file);
  return run_method(config, train.data, test.data);
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : report.trials) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& r : t.trace) {
      trace.push_back({{"epoch", r.epoch},
                       {"dual_objective", r.dual_objective},
                       {"duality_gap", r.duality_gap},
                       {"seconds", r.seconds}});
    }
    trials.push_back({{"trial", t.trial},
                      {"seed", t.seed},
                      {"eval", to_json(t.eval)},
                      {"dual_objective", t.dual_objective},
                      {"duality_gap", t.duality_gap},
                      {"train_seconds", t.train_seconds},
                      {"trace", trace}});
  }
  return {{"config", to_json(report.config)},
          {"started_at", report.started_at},
          {"generator", Rng::kName},
          {"sgd_step_size", "1/(lambda*t)"},
          {"map", {{"mean", report.map.mean}, {"stddev", report.map.stddev}}},
          {"knn_accuracy",
           {{"mean", report.knn_accuracy.mean}, {"stddev", report.knn_accuracy.stddev}}},
          {"trials", trials}};
}

}  // namespace durp
