#pragma once
// Brute-force reference implementations used only by the tests. Each one is
// written from the defining formula, without the library's factorizations.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// A_t = u u^T - v v^T, assembled entry by entry.
inline MatrixXd constraint(const VectorXd& u, const VectorXd& v) {
  const auto p = u.size();
  MatrixXd a(p, p);
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) a(r, c) = u(r) * u(c) - v(r) * v(c);
  }
  return a;
}

// <A, B> = trace(A B) for symmetric A, B, as an explicit double loop.
inline double trace_product(const MatrixXd& a, const MatrixXd& b) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) sum += a(r, c) * b(c, r);
  }
  return sum;
}

// Kronecker vector z = u (x) u - v (x) v, so that <A_a, A_b> = <z_a, z_b>.
inline VectorXd kronecker_vector(const VectorXd& u, const VectorXd& v) {
  const auto p = u.size();
  VectorXd z(p * p);
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) z(r * p + c) = u(r) * u(c) - v(r) * v(c);
  }
  return z;
}

// Dense Gram matrix from explicitly assembled constraint matrices.
inline MatrixXd gram(const MatrixXd& u, const MatrixXd& v) {
  const auto n = u.cols();
  std::vector<MatrixXd> a;
  for (Eigen::Index t = 0; t < n; ++t) a.push_back(constraint(u.col(t), v.col(t)));
  MatrixXd g(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) g(x, y) = trace_product(a[x], a[y]);
  }
  return g;
}

// Loss, conjugate and derivative. width = 0 selects the hinge.
inline double loss(double z, double width) {
  if (width == 0.0) return std::max(0.0, 1.0 - z);
  if (z >= 1.0) return 0.0;
  if (z >= 1.0 - width) return (1.0 - z) * (1.0 - z) / (2.0 * width);
  return 1.0 - z - width / 2.0;
}

inline double conjugate(double a, double width) { return a + 0.5 * width * a * a; }

// D(alpha) = -sum l*(alpha_t) - alpha^T G alpha / (2 lambda N).
inline double dual_objective(const VectorXd& alpha, const MatrixXd& g, double width,
                             double lambda) {
  const double n = static_cast<double>(alpha.size());
  double conj = 0.0;
  for (Eigen::Index t = 0; t < alpha.size(); ++t) conj += conjugate(alpha(t), width);
  return -conj - alpha.dot(g * alpha) / (2.0 * lambda * n);
}

// Primal objective lambda/2 |M|_F^2 + mean loss at M = -(1/(lambda N)) sum alpha_t A_t,
// with every A_t assembled explicitly.
inline double primal_at_dual(const VectorXd& alpha, const MatrixXd& u, const MatrixXd& v,
                             double width, double lambda) {
  const auto n = alpha.size();
  const double ln = lambda * static_cast<double>(n);
  MatrixXd m = MatrixXd::Zero(u.rows(), u.rows());
  for (Eigen::Index t = 0; t < n; ++t) m -= alpha(t) / ln * constraint(u.col(t), v.col(t));
  double mean_loss = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    mean_loss += loss(trace_product(m, constraint(u.col(t), v.col(t))), width);
  }
  return 0.5 * lambda * trace_product(m, m) + mean_loss / static_cast<double>(n);
}

struct DualOptimum {
  VectorXd alpha;
  double objective = 0.0;
  double gap = 0.0;  // primal - dual / N, from the explicit primal
};

// Plain projected gradient ascent on [-1, 0]^N with step 1/L, L from a full
// eigendecomposition of G, accelerated with the constant k/(k+3) momentum
// schedule (no restarts). Runs a fixed number of iterations; the caller checks
// the certified gap.
inline DualOptimum solve_dual(const MatrixXd& u, const MatrixXd& v, double width, double lambda,
                              int iterations) {
  const MatrixXd g = gram(u, v);
  const auto n = g.rows();
  const double ln = lambda * static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const double lipschitz = eig.eigenvalues().maxCoeff() / ln + width + 1e-12;
  auto gradient = [&](const VectorXd& a) {
    VectorXd grad = -(g * a) / ln;
    for (Eigen::Index t = 0; t < n; ++t) grad(t) -= 1.0 + width * a(t);
    return grad;
  };
  auto project = [](VectorXd a) { return a.cwiseMax(-1.0).cwiseMin(0.0); };
  VectorXd x = VectorXd::Zero(n), y = x;
  for (int k = 0; k < iterations; ++k) {
    const VectorXd next = project(y + gradient(y) / lipschitz);
    y = next + (static_cast<double>(k) / (k + 3.0)) * (next - x);
    x = next;
  }
  DualOptimum result;
  result.alpha = x;
  result.objective = dual_objective(x, g, width, lambda);
  result.gap = primal_at_dual(x, u, v, width, lambda) - result.objective / static_cast<double>(n);
  return result;
}

// Largest eigenvalue magnitude of a symmetric matrix by power iteration.
inline double spectral_norm(const MatrixXd& m, int iterations = 1000) {
  VectorXd x = VectorXd::Ones(m.rows()) / std::sqrt(static_cast<double>(m.rows()));
  double value = 0.0;
  for (int i = 0; i < iterations; ++i) {
    const VectorXd y = m.transpose() * (m * x);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    value = std::sqrt(norm);
  }
  return value;
}

// (x - y)^T M (x - y) as an explicit double sum.
inline double distance(const MatrixXd& m, const VectorXd& x, const VectorXd& y) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    for (Eigen::Index c = 0; c < x.size(); ++c) sum += (x(r) - y(r)) * m(r, c) * (x(c) - y(c));
  }
  return sum;
}

// Mean average precision: every point queries all others, ascending distance,
// ties by index; queries with no relevant item are skipped.
inline double mean_average_precision(const MatrixXd& m, const MatrixXd& points,
                                     const std::vector<int>& labels) {
  const auto n = points.cols();
  double total = 0.0;
  int queries = 0;
  for (Eigen::Index q = 0; q < n; ++q) {
    std::vector<std::pair<double, Eigen::Index>> ranked;
    for (Eigen::Index o = 0; o < n; ++o) {
      if (o != q) ranked.emplace_back(distance(m, points.col(q), points.col(o)), o);
    }
    std::sort(ranked.begin(), ranked.end());
    int relevant = 0;
    double precision_sum = 0.0;
    for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
      if (labels[ranked[pos].second] == labels[q]) {
        ++relevant;
        precision_sum += static_cast<double>(relevant) / static_cast<double>(pos + 1);
      }
    }
    if (relevant == 0) continue;
    total += precision_sum / relevant;
    ++queries;
  }
  return queries == 0 ? 0.0 : total / queries;
}

// k-NN prediction: k smallest distances (ties by index), majority vote with
// ties to the smallest class id.
inline int knn_predict(const MatrixXd& m, const MatrixXd& train, const std::vector<int>& labels,
                       const VectorXd& query, int k) {
  std::vector<std::pair<double, Eigen::Index>> ranked;
  for (Eigen::Index o = 0; o < train.cols(); ++o) {
    ranked.emplace_back(distance(m, query, train.col(o)), o);
  }
  std::sort(ranked.begin(), ranked.end());
  std::map<int, int> votes;
  for (int i = 0; i < k; ++i) ++votes[labels[ranked[i].second]];
  int best = -1, best_votes = -1;
  for (const auto& [label, count] : votes) {  // ascending label order
    if (count > best_votes) {
      best = label;
      best_votes = count;
    }
  }
  return best;
}

inline double knn_accuracy(const MatrixXd& m, const MatrixXd& train,
                           const std::vector<int>& train_labels, const MatrixXd& test,
                           const std::vector<int>& test_labels, int k) {
  int correct = 0;
  for (Eigen::Index q = 0; q < test.cols(); ++q) {
    if (knn_predict(m, train, train_labels, test.col(q), k) == test_labels[q]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.cols());
}

// Random symmetric matrix with N(0,1) entries from a standard-library engine.
inline MatrixXd random_symmetric(Eigen::Index q, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  MatrixXd a(q, q);
  for (Eigen::Index r = 0; r < q; ++r) {
    for (Eigen::Index c = 0; c < q; ++c) a(r, c) = normal(gen);
  }
  return 0.5 * (a + a.transpose());
}

inline MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen,
                              double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  MatrixXd a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) a(r, c) = normal(gen);
  }
  return a;
}

}  // namespace oracle
