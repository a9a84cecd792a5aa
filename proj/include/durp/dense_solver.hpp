#pragma once

#include "durp/dual_solver.hpp"

namespace durp {

// Reference solver for the dual over an explicit N x N Gram matrix. Used for
// oracle solutions in the verification harnesses; cost is O(N^2) per iteration.

struct DenseSolveOptions {
  double gap_tolerance = 1e-8;
  int max_iterations = 100000;
  int check_every = 20;
};

struct DenseSolveResult {
  Eigen::VectorXd alpha;
  double objective = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

double dense_dual_objective(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& gram,
                            const LossModel& loss, double lambda);

/// Same convention as duality_gap(): P(M) - D(alpha)/N.
double dense_duality_gap(const Eigen::VectorXd& alpha, const Eigen::MatrixXd& gram,
                         const LossModel& loss, double lambda);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double power_iteration(const Eigen::MatrixXd& matrix, int iterations = 300);

/// Projected gradient ascent on [-1, 0]^N with step 1/L, where L is the
/// gradient Lipschitz constant lambda_max(G)/(lambda N) + l*'' (the largest
/// eigenvalue from power iteration, inflated by 5%). Nesterov momentum with
/// gradient-based restarts; stops once the duality gap reaches the tolerance.
DenseSolveResult solve_dense_dual(const Eigen::MatrixXd& gram, const LossModel& loss,
                                  double lambda, const DenseSolveOptions& options = {});

}  // namespace durp
