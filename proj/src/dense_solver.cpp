#include "durp/dense_solver.hpp"

#include <cmath>
#include <stdexcept>

namespace durp {

double dense_dual_objective(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& gram,
                            const LossModel& loss, double lambda) {
  const double ln = lambda * static_cast<double>(alpha.size());
  double conj = 0.0;
  for (Index t = 0; t < alpha.size(); ++t) conj += loss.conjugate(alpha(t));
  if (alpha.size() == 0) return 0.0;
  return -conj - alpha.dot(gram * alpha) / (2.0 * ln);
}

double dense_duality_gap(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& gram,
                         const LossModel& loss, double lambda) {
  const Index n = alpha.size();
  if (n == 0) return 0.0;
  const double ln = lambda * static_cast<double>(n);
  const Eigen::VectorXd g_alpha = gram * alpha;
  double total = 0.0;
  for (Index t = 0; t < n; ++t) total += loss.value(-g_alpha(t) / ln);
  const double quad = alpha.dot(g_alpha);
  const double primal = 0.5 * lambda * quad / (ln * ln) + total / static_cast<double>(n);
  return primal - dense_dual_objective(alpha, gram, loss, lambda) / static_cast<double>(n);
}

double power_iteration(const Eigen::MatrixXd& matrix, int iterations) {
  if (matrix.rows() == 0) return 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(matrix.rows()).normalized();
  // Perturb the start so it is not orthogonal to a sign-alternating top eigenvector.
  for (Index i = 0; i < x.size(); ++i) x(i) += 1e-3 * std::sin(static_cast<double>(i) + 1.0);
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd y = matrix * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    estimate = x.dot(y);
    x = y / norm;
  }
  return estimate;
}

DenseSolveResult solve_dense_dual(const Eigen::MatrixXd& gram, const LossModel& loss,
                                  double lambda, const DenseSolveOptions& options) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("solve_dense_dual: G not square");
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_dense_dual: lambda must be positive");
  const Index n = gram.rows();
  DenseSolveResult result;
  result.alpha = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    result.converged = true;
    return result;
  }
  const double ln = lambda * static_cast<double>(n);
  const double curvature = loss.conjugate_curvature();
  const double lipschitz = 1.05 * power_iteration(gram) / ln + curvature;
  const double step = 1.0 / std::max(lipschitz, 1e-300);

  auto project = [](Eigen::VectorXd& x) { x = x.cwiseMax(-1.0).cwiseMin(0.0); };
  auto gradient = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return (-1.0 - curvature * x.array()).matrix() - gram * x / ln;
  };

  Eigen::VectorXd x = result.alpha;
  Eigen::VectorXd y = x;
  double momentum = 1.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::VectorXd next = y + step * gradient(y);
    project(next);
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    if ((y - next).dot(next - x) > 0.0) {
      y = next;
      momentum = 1.0;
    } else {
      y = next + ((momentum - 1.0) / next_momentum) * (next - x);
      momentum = next_momentum;
    }
    x = std::move(next);
    result.iterations = it;
    if (it % options.check_every == 0 &&
        dense_duality_gap(x, gram, loss, lambda) <= options.gap_tolerance) {
      result.converged = true;
      break;
    }
  }
  result.alpha = x;
  result.objective = dense_dual_objective(x, gram, loss, lambda);
  result.gap = dense_duality_gap(x, gram, loss, lambda);
  result.converged = result.gap <= options.gap_tolerance;
  return result;
}

}  // namespace durp
