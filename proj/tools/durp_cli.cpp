// Command-line front end: training runs, evaluation of saved metrics, spectrum
// dumps, the two recovery harnesses and triplet sampling.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "durp/dataset.hpp"
#include "durp/evaluation.hpp"
#include "durp/experiment.hpp"
#include "durp/harness.hpp"
#include "durp/metric.hpp"
#include "durp/triplets.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

// Runs `write` against the file at `path`, or stdout when the path is empty.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// RunConfig flags, collected as raw strings and applied through apply_setting
// after any --config file so that flags override file values.
struct RunFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value configuration file");
    const std::vector<std::pair<std::string, std::string>> options = {
        {"method", "durp, duori, srp, spca or euclid (default durp)"},
        {"m", "number of random projections / PCA components (default 10)"},
        {"triplets", "number of active triplets N (default 100000)"},
        {"epochs", "solver epochs, first is SGD (default 3)"},
        {"lambda", "regularization, or 'auto' for 1/N (default)"},
        {"loss", "hinge or smoothed_hinge (default hinge)"},
        {"gamma", "smoothing width of smoothed_hinge (default 1)"},
        {"k", "neighbors for k-NN accuracy (default 5)"},
        {"seed", "base seed; trial t uses seed + t (default 1)"},
        {"trials", "number of trials (default 5)"},
        {"projection", "gaussian or identity, for durp and srp (default gaussian)"},
        {"train-file", "training set in LIBSVM format"},
        {"test-file", "test set in LIBSVM format"},
        {"out", "JSON report path (default stdout)"},
        {"metric-out", "binary metric of the last trial"},
        {"trace-out", "per-epoch solver trace CSV of the last trial"},
    };
    for (const auto& [key, help] : options) {
      keys.emplace_back(key, help);
      app->add_option("--" + key, values[key], help);
    }
  }

  durp::RunConfig resolve(const CLI::App* app) const {
    durp::RunConfig config;
    if (!config_file.empty()) durp::load_config_file(config_file, config);
    for (const auto& [key, help] : keys) {
      if (app->count("--" + key) > 0) durp::apply_setting(config, key, values.at(key));
    }
    config.validate();
    return config;
  }
};

struct HarnessFlags {
  durp::HarnessConfig config;
  bool low_rank = true;  // full-rank harnesses tie the rank to d
  std::size_t seed_count = 10;
  std::uint64_t first_seed = 0;
  std::string out;

  void attach(CLI::App* app, const durp::HarnessConfig& defaults, bool low_rank_data) {
    config = defaults;
    low_rank = low_rank_data;
    seed_count = defaults.seeds.size();
    app->add_option("--d", config.d, "ambient dimension")->capture_default_str();
    if (low_rank) app->add_option("--rank", config.rank, "intrinsic rank")->capture_default_str();
    app->add_option("--n", config.n, "number of points")->capture_default_str();
    app->add_option("--triplets", config.triplets, "number of triplets N")->capture_default_str();
    app->add_option("--classes", config.classes, "number of classes")->capture_default_str();
    app->add_option("--m-sweep", config.m_sweep, "projection sizes, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--seeds", seed_count, "number of seeds")->capture_default_str();
    app->add_option("--seed", first_seed, "first seed")->capture_default_str();
    app->add_option("--epsilon", config.epsilon, "epsilon for the sample-size report")
        ->capture_default_str();
    app->add_option("--delta", config.delta, "failure probability")->capture_default_str();
    if (!low_rank) {
      app->add_option("--eta", config.eta, "target suboptimality")->capture_default_str();
      app->add_option("--gamma", config.gamma, "Lipschitz constant of the loss derivative")
          ->capture_default_str();
    }
    app->add_option("--scale", config.scale, "data scale (0 = harness default)")
        ->capture_default_str();
    app->add_option("--oracle-tolerance", config.oracle_tolerance, "oracle duality gap")
        ->capture_default_str();
    app->add_option("--out", out, "CSV output path (default stdout)");
  }

  durp::HarnessConfig resolve() {
    if (!low_rank) config.rank = config.d;
    config.seeds.clear();
    for (std::size_t s = 0; s < seed_count; ++s) config.seeds.push_back(first_seed + s);
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      throw durp::ConfigError(e.what());
    }
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual random projection metric learning"};
  app.require_subcommand(1);

  RunFlags train_flags;
  auto* train = app.add_subcommand("train", "run a method over all trials and report mAP / k-NN");
  train_flags.attach(train);

  std::string eval_metric, eval_train, eval_test, eval_out;
  int eval_k = 5;
  auto* eval = app.add_subcommand("eval", "evaluate a saved metric (Euclidean when omitted)");
  eval->add_option("--metric", eval_metric, "binary metric written by train --metric-out");
  eval->add_option("--train-file", eval_train, "training set (k-NN reference)")->required();
  eval->add_option("--test-file", eval_test, "test set (queries)")->required();
  eval->add_option("--k", eval_k, "neighbors for k-NN")->capture_default_str();
  eval->add_option("--out", eval_out, "JSON report path (default stdout)");

  std::string spectrum_file, spectrum_out;
  auto* spectrum = app.add_subcommand("spectrum", "normalized eigenvalue spectrum as CSV");
  spectrum->add_option("--train-file,dataset", spectrum_file, "dataset in LIBSVM format")
      ->required();
  spectrum->add_option("--out", spectrum_out, "CSV path (default stdout)");

  HarnessFlags t1_flags;
  auto* verify_t1 = app.add_subcommand("verify-t1", "low-rank metric recovery sweep");
  t1_flags.attach(verify_t1, durp::theorem1_defaults(), true);

  HarnessFlags t2_flags;
  auto* verify_t2 = app.add_subcommand("verify-t2", "full-rank dual recovery bound check");
  t2_flags.attach(verify_t2, durp::theorem2_defaults(), false);

  std::string sample_file, sample_out;
  std::size_t sample_count = 100000;
  std::uint64_t sample_seed = 1;
  auto* sample = app.add_subcommand("sample-triplets", "draw active triplets as CSV");
  sample->add_option("--train-file", sample_file, "dataset in LIBSVM format")->required();
  sample->add_option("--triplets", sample_count, "number of triplets")->capture_default_str();
  sample->add_option("--seed", sample_seed, "seed")->capture_default_str();
  sample->add_option("--out", sample_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (train->parsed()) {
      const durp::RunConfig config = train_flags.resolve(train);
      const durp::RunReport report = durp::run_method(config);
      if (!report.trials.empty()) {
        const auto& last = report.trials.back();
        if (!config.metric_out.empty()) durp::save_metric(config.metric_out, last.metric);
        if (!config.trace_out.empty()) {
          with_output(config.trace_out,
                      [&](std::ostream& out) { durp::write_trace_csv(out, last.trace); });
        }
      }
      with_output(config.out,
                  [&](std::ostream& out) { out << durp::to_json(report).dump(2) << '\n'; });
      std::cerr << durp::to_string(config.method) << ": mAP " << report.map.mean << " +- "
                << report.map.stddev << ", " << config.k << "-NN accuracy "
                << report.knn_accuracy.mean << " +- " << report.knn_accuracy.stddev << '\n';
    } else if (eval->parsed()) {
      if (eval_k < 1) throw durp::ConfigError("k must be >= 1");
      auto [train_set, test_set] = durp::load_train_test(eval_train, eval_test);
      const durp::SymMatrix metric = eval_metric.empty()
                                         ? durp::SymMatrix::identity(train_set.data.dim())
                                         : durp::load_metric(eval_metric);
      if (metric.dim() != train_set.data.dim()) {
        throw durp::ConfigError("metric dimension " + std::to_string(metric.dim()) +
                                " does not match data dimension " +
                                std::to_string(train_set.data.dim()));
      }
      const durp::EvalReport report =
          durp::evaluate(metric, train_set.data, test_set.data, eval_k);
      with_output(eval_out,
                  [&](std::ostream& out) { out << durp::to_json(report).dump(2) << '\n'; });
    } else if (spectrum->parsed()) {
      const durp::LibsvmData data = durp::load_libsvm(spectrum_file);
      const durp::Spectrum values = durp::eigen_spectrum(data.data);
      if (values.degenerate) std::cerr << "warning: centered data is numerically zero\n";
      with_output(spectrum_out,
                  [&](std::ostream& out) { durp::write_spectrum_csv(out, values); });
    } else if (verify_t1->parsed()) {
      const durp::Theorem1Report report = durp::verify_theorem1(t1_flags.resolve());
      with_output(t1_flags.out,
                  [&](std::ostream& out) { durp::write_theorem1_csv(out, report); });
    } else if (verify_t2->parsed()) {
      const durp::Theorem2Report report = durp::verify_theorem2(t2_flags.resolve());
      with_output(t2_flags.out,
                  [&](std::ostream& out) { durp::write_theorem2_csv(out, report); });
    } else if (sample->parsed()) {
      if (sample_count < 1) throw durp::ConfigError("triplets must be >= 1");
      const durp::LibsvmData data = durp::load_libsvm(sample_file);
      const durp::TripletSet triplets =
          durp::sample_active_triplets(data.data, sample_count, sample_seed);
      with_output(sample_out,
                  [&](std::ostream& out) { durp::write_triplets_csv(out, triplets); });
    }
  } catch (const durp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
