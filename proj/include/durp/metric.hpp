#pragma once

#include <iosfwd>
#include <string>

#include "durp/dual_solver.hpp"
#include "durp/projection.hpp"
#include "durp/triplets.hpp"

namespace durp {

/// Dense symmetric q x q matrix: a Mahalanobis metric or a subspace metric.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Stores (m + m^T)/2.
  explicit SymMatrix(const Eigen::MatrixXd& m);

  static SymMatrix identity(Index q) { return SymMatrix(Eigen::MatrixXd::Identity(q, q)); }

  const Eigen::MatrixXd& values() const { return values_; }
  Index dim() const { return values_.rows(); }

  SymMatrix scaled(double c) const { return SymMatrix(c * values_); }

 private:
  Eigen::MatrixXd values_;
};

/// -(1/(lambda N)) sum_t alpha_t A_t from the original-space cache, computed as
/// two factored products U diag(alpha) U^T and V diag(alpha) V^T.
SymMatrix recover_metric(const Eigen::VectorXd& alpha, const TripletCache& cache, double lambda);

/// R M_s R^T: the effective original-space metric of a subspace metric.
SymMatrix assemble_subspace_metric(const SymMatrix& subspace, const ProjectionMatrix& projection);

/// Nearest PSD matrix in Frobenius norm: eigenvalues below zero are set to zero.
SymMatrix psd_project(const SymMatrix& m);

/// (x - y)^T M (x - y).
double metric_distance(const SymMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Count of eigenvalues whose magnitude exceeds tol * max |eigenvalue|.
Index numerical_rank(const SymMatrix& m, double tol = 1e-10);

// Dense layout: q as u64 little-endian, then q*q f64 little-endian, row-major.
void write_metric(std::ostream& out, const SymMatrix& m);
SymMatrix read_metric(std::istream& in);
void save_metric(const std::string& path, const SymMatrix& m);
SymMatrix load_metric(const std::string& path);

/// Top-r eigenpairs by eigenvalue magnitude; M ~ V diag(w) V^T.
struct EigenformMetric {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // q x r
};

EigenformMetric to_eigenform(const SymMatrix& m, Index rank);
SymMatrix from_eigenform(const EigenformMetric& e);

// Eigenform layout: the 8 bytes "DURPEIG1", q as u64, r as u64, r eigenvalues,
// then r eigenvectors of q entries each; all little-endian, f64.
void write_eigenform(std::ostream& out, const EigenformMetric& e);
EigenformMetric read_eigenform(std::istream& in);

}  // namespace durp
