#include "durp/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace durp {

nlohmann::json to_json(const EvalReport& report) {
  return {{"map", report.map},
          {"knn_accuracy", report.knn_accuracy},
          {"k", report.k},
          {"n_queries", report.n_queries},
          {"excluded_queries", report.excluded_queries}};
}

namespace {

// d_M between columns: (x_a - x_b)^T (M x_a - M x_b). The form is exactly
// symmetric in (a, b).
double pair_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& mx, Index a,
                     const Eigen::MatrixXd& y, const Eigen::MatrixXd& my, Index b) {
  return (x.col(a) - y.col(b)).dot(mx.col(a) - my.col(b));
}

void check_dims(const SymMatrix& m, const LabeledDataset& data, const char* who) {
  data.validate();
  if (m.dim() != data.dim()) {
    throw std::invalid_argument(std::string(who) + ": metric dimension " +
                                std::to_string(m.dim()) + " != data dimension " +
                                std::to_string(data.dim()));
  }
}

}  // namespace

MapResult evaluate_map(const SymMatrix& m, const LabeledDataset& test) {
  check_dims(m, test, "map_score");
  const Index n = test.size();
  if (n < 2) throw std::invalid_argument("map_score: need at least two test points");
  const Eigen::MatrixXd& x = test.points;
  const Eigen::MatrixXd mx = m.values() * x;

  Eigen::MatrixXd dist(n, n);
  for (Index b = 0; b < n; ++b) {
    dist(b, b) = 0.0;
    for (Index a = b + 1; a < n; ++a) {
      dist(a, b) = dist(b, a) = pair_distance(x, mx, a, x, mx, b);
    }
  }

  MapResult result;
  double total = 0.0;
  std::vector<Index> ranking;
  ranking.reserve(static_cast<std::size_t>(n));
  for (Index q = 0; q < n; ++q) {
    ranking.clear();
    for (Index other = 0; other < n; ++other) {
      if (other != q) ranking.push_back(other);
    }
    std::sort(ranking.begin(), ranking.end(), [&](Index a, Index b) {
      const double da = dist(a, q), db = dist(b, q);
      return da < db || (da == db && a < b);
    });
    double hits = 0.0;
    double precision_sum = 0.0;
    for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
      if (test.labels[ranking[pos]] == test.labels[q]) {
        hits += 1.0;
        precision_sum += hits / static_cast<double>(pos + 1);
      }
    }
    if (hits == 0.0) {
      ++result.excluded_queries;
      continue;
    }
    total += precision_sum / hits;
    ++result.n_queries;
  }
  result.map = result.n_queries ? total / static_cast<double>(result.n_queries) : 0.0;
  return result;
}

double map_score(const SymMatrix& m, const LabeledDataset& test) { return evaluate_map(m, test).map; }

double knn_accuracy(const SymMatrix& m, const LabeledDataset& train, const LabeledDataset& test,
                    int k) {
  check_dims(m, train, "knn_accuracy");
  check_dims(m, test, "knn_accuracy");
  if (k < 1 || k > train.size()) {
    throw std::invalid_argument("knn_accuracy: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(train.size()) + "]");
  }
  if (test.size() == 0) return 0.0;
  const Eigen::MatrixXd m_train = m.values() * train.points;
  const Eigen::MatrixXd m_test = m.values() * test.points;
  const int classes = std::max(train.num_classes(), 1);

  std::vector<Index> order(static_cast<std::size_t>(train.size()));
  std::vector<double> dist(static_cast<std::size_t>(train.size()));
  std::vector<int> votes(static_cast<std::size_t>(classes));
  std::size_t correct = 0;
  for (Index q = 0; q < test.size(); ++q) {
    for (Index t = 0; t < train.size(); ++t) {
      dist[t] = pair_distance(test.points, m_test, q, train.points, m_train, t);
    }
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index a, Index b) {
      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    });
    std::fill(votes.begin(), votes.end(), 0);
    for (int i = 0; i < k; ++i) ++votes[train.labels[order[i]]];
    // max_element returns the first maximum, i.e. the smallest tied class id.
    const auto predicted = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    if (predicted == test.labels[q]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

EvalReport evaluate(const SymMatrix& m, const LabeledDataset& train, const LabeledDataset& test,
                    int k) {
  const MapResult ranking = evaluate_map(m, test);
  EvalReport report;
  report.map = ranking.map;
  report.n_queries = ranking.n_queries;
  report.excluded_queries = ranking.excluded_queries;
  report.k = k;
  report.knn_accuracy = knn_accuracy(m, train, test, k);
  return report;
}

}  // namespace durp
