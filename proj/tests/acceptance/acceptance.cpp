// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers
// and the wall time. Exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "durp/dual_solver.hpp"
#include "durp/evaluation.hpp"
#include "durp/experiment.hpp"
#include "durp/gram.hpp"
#include "durp/harness.hpp"
#include "durp/metric.hpp"
#include "durp/synthetic.hpp"
#include "oracles.hpp"

using namespace durp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double limit_seconds,
         const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < limit_seconds;
  const bool pass = outcome.pass && in_time;
  if (!pass) ++failures;
  std::ostringstream line;
  line.precision(3);
  line << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << " - " << name << " ("
       << outcome.detail << ") [" << seconds << " s, limit " << limit_seconds << " s"
       << (in_time ? "" : ", OVER LIMIT") << "]";
  std::cout << line.str() << std::endl;
}

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", value);
  return buffer;
}

TripletCache random_cache(Index p, Index n, std::mt19937_64& gen) {
  TripletCache cache;
  cache.u = oracle::random_matrix(p, n, gen);
  cache.v = oracle::random_matrix(p, n, gen);
  cache.uu = cache.u.colwise().squaredNorm().transpose();
  cache.vv = cache.v.colwise().squaredNorm().transpose();
  return cache;
}

// 1. gram_entry against the dense-trace and Kronecker oracles.
Outcome gram_oracles() {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<int> dim(1, 20), count(1, 30);
  double worst = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const TripletCache cache = random_cache(dim(gen), count(gen), gen);
    const GramView view(cache);
    const MatrixXd dense = oracle::gram(cache.u, cache.v);
    for (Index a = 0; a < cache.size(); ++a) {
      const VectorXd za = oracle::kronecker_vector(cache.u.col(a), cache.v.col(a));
      for (Index b = 0; b < cache.size(); ++b) {
        const double entry = gram_entry(view, a, b);
        const double kron = za.dot(oracle::kronecker_vector(cache.u.col(b), cache.v.col(b)));
        worst = std::max(worst, std::abs(entry - dense(a, b)) / std::abs(dense(a, b)));
        worst = std::max(worst, std::abs(entry - kron) / std::abs(kron));
      }
    }
  }
  return {worst <= 1e-9, "50 instances, max relative error " + fmt(worst) + " <= 1e-9"};
}

// 2. Three CSDCA epochs against a converged projected-gradient oracle on
// unit-scale class blobs.
Outcome solver_optimality() {
  int within = 0, gap_ok = 0, total = 0;
  double worst = 0.0;
  int epochs_needed_max = 0;
  for (int instance = 0; instance < 20; ++instance) {
    const Index p = 5 + (instance * 3) % 16;                 // 5..20
    const std::size_t n_triplets = 100 + 5 * instance;        // 100..195
    const LossModel loss = instance % 2 == 0 ? LossModel::hinge() : LossModel::smoothed_hinge(1.0);
    const double width = instance % 2 == 0 ? 0.0 : 1.0;
    const LabeledDataset data = make_gaussian_blobs(p, 80, 3, 1.0, 1.0, 700 + instance);
    const TripletCache cache =
        build_cache(data, sample_active_triplets(data, n_triplets, 800 + instance));
    const double lambda = 1.0 / static_cast<double>(n_triplets);
    const auto reference = oracle::solve_dual(cache.u, cache.v, width, lambda, 30000);
    if (reference.gap > 1e-6) {
      return {false, "oracle not converged on instance " + std::to_string(instance) +
                         ", certified gap " + fmt(reference.gap)};
    }
    const DualSolution solution = csdca_solve(cache, loss, lambda, 3, instance);
    const double error = std::abs(solution.objective - reference.objective);
    worst = std::max(worst, error);
    ++total;
    if (error <= 1e-3) ++within;
    bool monotone = solution.trace.front().duality_gap >= 0.0;
    for (std::size_t e = 1; e < solution.trace.size(); ++e) {
      monotone = monotone && solution.trace[e].duality_gap >= 0.0 &&
                 solution.trace[e].duality_gap <= solution.trace[e - 1].duality_gap;
    }
    if (monotone) ++gap_ok;

    // How many epochs this instance actually needs (diagnostic only).
    CsdcaOptions longer;
    longer.target_gap = 1e-3 / static_cast<double>(n_triplets);
    longer.max_epochs = 5000;
    const DualSolution converged = csdca_solve(cache, loss, lambda, longer, instance);
    epochs_needed_max = std::max(epochs_needed_max, static_cast<int>(converged.trace.size()));
  }
  return {within == total && gap_ok == total,
          std::to_string(within) + "/" + std::to_string(total) +
              " within 1e-3 after 3 epochs, worst |D - D*| " + fmt(worst) + "; gap >= 0 and " +
              "nonincreasing in " + std::to_string(gap_ok) + "/" + std::to_string(total) +
              "; up to " + std::to_string(epochs_needed_max) +
              " epochs needed for a certified 1e-3"};
}

// 3. DuRP with an identity projection against DuOri.
Outcome identity_equivalence() {
  auto [train, test] = split_alternating(make_gaussian_blobs(30, 200, 3, 1.0, 1.0, 5));
  RunConfig durp_config;
  durp_config.method = Method::kDurp;
  durp_config.projection = ProjectionKind::kIdentity;
  durp_config.m = 30;
  durp_config.triplets = 2000;
  durp_config.seed = 9;
  RunConfig duori_config = durp_config;
  duori_config.method = Method::kDuori;
  const TrialResult a = run_trial(durp_config, train, test, 0);
  const TrialResult b = run_trial(duori_config, train, test, 0);
  const bool same_alpha = a.alpha == b.alpha;
  const bool same_metric = a.metric.values() == b.metric.values();
  return {same_alpha && same_metric, std::string("alpha ") + (same_alpha ? "identical" : "differs") +
                                         ", metric " + (same_metric ? "identical" : "differs")};
}

// 4. Low-rank recovery trend.
Outcome theorem1_trend() {
  const Theorem1Report report = verify_theorem1(theorem1_defaults());
  int inversions = 0;
  std::string curve;
  double e50 = -1.0, e400 = -1.0;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    if (i > 0 && row.median > report.rows[i - 1].median) ++inversions;
    curve += (i ? " " : "") + std::string("e(") + std::to_string(row.m) + ")=" + fmt(row.median);
    if (row.m == 50) e50 = row.median;
    if (row.m == 400) e400 = row.median;
  }
  const bool pass = inversions <= 1 && e400 >= 0.0 && e400 <= 1e-2 && e50 >= 0.0 && e50 <= 0.5;
  return {pass, curve + "; inversions " + std::to_string(inversions) + " <= 1, e(400) <= 1e-2 " +
                    (e400 <= 1e-2 ? "holds" : "violated") + ", e(50) <= 0.5 " +
                    (e50 <= 0.5 ? "holds" : "violated") + "; identity projection e=" +
                    fmt(report.identity_median)};
}

// 5. Dual recovery bound and the kappa closed form.
Outcome theorem2_bound() {
  const HarnessConfig config = theorem2_defaults();
  const Theorem2Report report = verify_theorem2(config);
  int satisfied_seeds = 0;
  double worst_ratio = 0.0;
  for (const auto seed : config.seeds) {
    bool all = true;
    for (const auto& s : report.samples) {
      if (s.seed != seed) continue;
      all = all && s.satisfied;
      worst_ratio = std::max(worst_ratio, s.measured / s.bound);
    }
    if (all) ++satisfied_seeds;
  }
  double kappa_error = 0.0, kappa_mean = 0.0;
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    const TripletCache cache = theorem2_instance(config, config.seeds[i]);
    const VectorXd& p = cache.uu;
    const VectorXd& q = cache.vv;
    const MatrixXd blocks[4] = {p * p.transpose(), q * q.transpose(), p * q.transpose(),
                                q * p.transpose()};
    double largest = 0.0;
    for (int b = 0; b < 4; ++b) {
      const double norm = oracle::spectral_norm(blocks[b]);
      kappa_error = std::max(kappa_error, std::abs(report.kappas[i].norms[b] - norm) / norm);
      largest = std::max(largest, norm);
    }
    kappa_error = std::max(kappa_error, std::abs(report.kappas[i].kappa - largest) / largest);
    kappa_mean += report.kappas[i].kappa / static_cast<double>(config.seeds.size());
  }
  const double n_over_d = static_cast<double>(config.triplets) / static_cast<double>(config.d);
  const bool kappa_order = kappa_mean >= n_over_d / 4.0 && kappa_mean <= 4.0 * n_over_d;
  const bool pass = satisfied_seeds >= 9 && kappa_error <= 1e-8 && kappa_order;
  return {pass, std::to_string(satisfied_seeds) + "/10 seeds satisfy the bound at every m " +
                    "(largest measured/bound " + fmt(worst_ratio) + "); kappa relative error " +
                    fmt(kappa_error) + " <= 1e-8; mean kappa " + fmt(kappa_mean) + " vs N/d " +
                    fmt(n_over_d)};
}

// 6. Reference numbers on usps when available, otherwise the synthetic direction check.
Outcome reference_numbers() {
  const char* train_path = std::getenv("DURP_USPS_TRAIN");
  const char* test_path = std::getenv("DURP_USPS_TEST");
  RunConfig config;  // default setup: m=10, N=1e5, 3 epochs, lambda=1/N, hinge, k=5, 5 trials
  if (train_path != nullptr && test_path != nullptr) {
    config.train_file = train_path;
    config.test_file = test_path;
    config.method = Method::kDurp;
    const RunReport durp_report = run_method(config);
    config.method = Method::kSrp;
    const RunReport srp_report = run_method(config);
    config.method = Method::kDuori;
    const RunReport duori_report = run_method(config);
    const double map = durp_report.map.mean;
    const double lift = map - srp_report.map.mean;
    const double knn_diff = std::abs(durp_report.knn_accuracy.mean - duori_report.knn_accuracy.mean);
    const bool pass = std::abs(map - 0.671) <= 0.05 && lift >= 0.20 && knn_diff <= 0.05;
    return {pass, "usps: DuRP mAP " + fmt(map) + " (target 0.671 +- 0.05), SRP " +
                      fmt(srp_report.map.mean) + ", lift " + fmt(lift) + " >= 0.20, |kNN DuRP - DuOri| " +
                      fmt(knn_diff) + " <= 0.05"};
  }
  auto [train, test] = split_alternating(make_separated_blobs(100, 600, 3, 3.0, 1.0, 2024));
  config.method = Method::kDurp;
  const RunReport durp_report = run_method(config, train, test);
  config.method = Method::kSrp;
  const RunReport srp_report = run_method(config, train, test);
  int wins = 0;
  for (int t = 0; t < config.trials; ++t) {
    if (durp_report.trials[t].eval.map > srp_report.trials[t].eval.map) ++wins;
  }
  return {wins >= 4, "usps not provided (set DURP_USPS_TRAIN/DURP_USPS_TEST); synthetic d=100, "
                     "3 classes, mean gap 3 sigma: DuRP beats SRP in " +
                         std::to_string(wins) + "/5 trials, mAP " + fmt(durp_report.map.mean) +
                         " vs " + fmt(srp_report.map.mean)};
}

// 7. PSD projection properties.
Outcome psd_properties() {
  std::mt19937_64 gen(303);
  double idempotence = 0.0, expansion = 0.0, min_eigen = 0.0;
  int optimality_violations = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const MatrixXd a = oracle::random_symmetric(20, gen);
    const MatrixXd b = oracle::random_symmetric(20, gen);
    const MatrixXd pa = psd_project(SymMatrix(a)).values();
    const MatrixXd pb = psd_project(SymMatrix(b)).values();
    idempotence = std::max(idempotence, (psd_project(SymMatrix(pa)).values() - pa).norm() / pa.norm());
    expansion = std::max(expansion, (pa - pb).norm() - (a - b).norm());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(pa, Eigen::EigenvaluesOnly);
    min_eigen = std::min(min_eigen, eig.eigenvalues().minCoeff() / pa.norm());
    const double distance = (a - pa).norm();
    for (int s = 0; s < 20; ++s) {
      const MatrixXd f = oracle::random_matrix(20, 20, gen, 0.05 * (s + 1));
      const MatrixXd near = pa + f * f.transpose();   // PSD, near the projection
      const MatrixXd g = oracle::random_matrix(20, 20, gen);
      const MatrixXd far = g * g.transpose() / 20.0;  // PSD, unrelated
      if (distance > (a - near).norm() + 1e-12) ++optimality_violations;
      if (distance > (a - far).norm() + 1e-12) ++optimality_violations;
    }
  }
  const bool pass = idempotence <= 1e-10 && expansion <= 1e-12 && min_eigen >= -1e-12 &&
                    optimality_violations == 0;
  return {pass, "idempotence " + fmt(idempotence) + " <= 1e-10, max expansion " + fmt(expansion) +
                    " <= 1e-12, min eigenvalue/|P| " + fmt(min_eigen) +
                    ", optimality violations " + std::to_string(optimality_violations) + "/4000"};
}

// 8. mAP and k-NN against exhaustive implementations.
Outcome evaluation_oracles() {
  std::mt19937_64 gen(404);
  std::uniform_int_distribution<int> size(10, 100), dim(1, 8), classes(2, 5), kdist(1, 7);
  int map_mismatch = 0, knn_mismatch = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const int d = dim(gen), c = classes(gen), k = kdist(gen);
    const LabeledDataset train = make_gaussian_blobs(d, size(gen), c, 1.0, 1.0, 900 + instance);
    const LabeledDataset test = make_gaussian_blobs(d, size(gen), c, 1.0, 1.0, 950 + instance);
    const MatrixXd f = oracle::random_matrix(d, d, gen);
    const SymMatrix m(f * f.transpose());
    if (map_score(m, test) != oracle::mean_average_precision(m.values(), test.points, test.labels)) {
      ++map_mismatch;
    }
    if (knn_accuracy(m, train, test, k) !=
        oracle::knn_accuracy(m.values(), train.points, train.labels, test.points, test.labels, k)) {
      ++knn_mismatch;
    }
  }
  return {map_mismatch == 0 && knn_mismatch == 0,
          "50 instances of <= 200 points: mAP mismatches " + std::to_string(map_mismatch) +
              ", k-NN mismatches " + std::to_string(knn_mismatch)};
}

}  // namespace

int main() {
  run(1, "Gram oracle equivalence", 5, gram_oracles);
  run(2, "solver optimality after 3 epochs", 30, solver_optimality);
  run(3, "identity-projection equivalence", 5, identity_equivalence);
  run(4, "low-rank recovery trend", 300, theorem1_trend);
  run(5, "full-rank dual recovery bound", 300, theorem2_bound);
  run(6, "usps numbers / synthetic direction of effect", 1200, reference_numbers);
  run(7, "PSD projection properties", 10, psd_properties);
  run(8, "evaluation oracles", 30, evaluation_oracles);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
