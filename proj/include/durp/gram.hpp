#pragma once

#include <array>

#include "durp/triplets.hpp"

namespace durp {

/// Read-only access to G_{a,b} = <A_a, A_b> over a (possibly projected) cache.
/// G is never materialized; the diagonal is precomputed. The view refers to
/// the cache and must not outlive it.
class GramView {
 public:
  explicit GramView(const TripletCache& cache);

  const TripletCache& cache() const { return *cache_; }
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  double diag(Index t) const { return diagonal_(t); }
  Index size() const { return cache_->size(); }
  Index dim() const { return cache_->dim(); }

 private:
  const TripletCache* cache_;
  Eigen::VectorXd diagonal_;
};

/// (u_a.u_b)^2 + (v_a.v_b)^2 - (u_a.v_b)^2 - (v_a.u_b)^2, O(p).
double gram_entry(const GramView& view, Index a, Index b);

/// <z_a, z_b> with explicit Kronecker vectors z_t = u_t (x) u_t - v_t (x) v_t.
/// Reference implementation; throws std::length_error when p > 256.
double gram_oracle(const GramView& view, Index a, Index b);

/// G * alpha through S = sum_t alpha_t (u_t u_t^T - v_t v_t^T):
/// (G alpha)_t = u_t^T S u_t - v_t^T S v_t. Cost O(N p^2).
Eigen::VectorXd gram_vector_product(const GramView& view, const Eigen::VectorXd& alpha);

/// Full N x N Gram matrix from the three cross inner-product matrices.
/// Only for N small enough to hold N^2 doubles.
Eigen::MatrixXd dense_gram(const TripletCache& cache);

/// kappa = max of the spectral norms of the four N x N norm-product matrices
///   M1 = p p^T, M2 = q q^T, M3 = p q^T, M4 = q p^T
/// with p_t = |u_t|^2 and q_t = |v_t|^2. Each is rank one, so
/// |M1| = |p|^2, |M2| = |q|^2 and |M3| = |M4| = |p| |q|.
struct KappaStats {
  double kappa = 0.0;
  std::array<double, 4> norms{};
};

KappaStats kappa(const TripletCache& cache);

}  // namespace durp
