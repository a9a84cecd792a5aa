#include "durp/gram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace durp {

GramView::GramView(const TripletCache& cache) : cache_(&cache) {
  const auto uv = (cache.u.array() * cache.v.array()).colwise().sum().transpose();
  diagonal_ = cache.uu.array().square() + cache.vv.array().square() - 2.0 * uv.square();
}

double gram_entry(const GramView& view, Index a, Index b) {
  const auto& c = view.cache();
  const double uu = c.u.col(a).dot(c.u.col(b));
  const double vv = c.v.col(a).dot(c.v.col(b));
  const double uv = c.u.col(a).dot(c.v.col(b));
  const double vu = c.v.col(a).dot(c.u.col(b));
  // Grouping the cross terms in one sum keeps the result exactly symmetric in (a, b).
  return (uu * uu + vv * vv) - (uv * uv + vu * vu);
}

namespace {

Eigen::VectorXd kronecker_vector(const TripletCache& cache, Index t) {
  const Index p = cache.dim();
  Eigen::VectorXd z(p * p);
  for (Index r = 0; r < p; ++r) {
    for (Index s = 0; s < p; ++s) {
      z(r * p + s) = cache.u(r, t) * cache.u(s, t) - cache.v(r, t) * cache.v(s, t);
    }
  }
  return z;
}

}  // namespace

double gram_oracle(const GramView& view, Index a, Index b) {
  if (view.dim() > 256) {
    throw std::length_error("gram_oracle: dimension " + std::to_string(view.dim()) +
                            " exceeds the 256 limit");
  }
  return kronecker_vector(view.cache(), a).dot(kronecker_vector(view.cache(), b));
}

Eigen::VectorXd gram_vector_product(const GramView& view, const Eigen::VectorXd& alpha) {
  const auto& c = view.cache();
  if (alpha.size() != c.size()) throw std::invalid_argument("gram_vector_product: size mismatch");
  const Eigen::MatrixXd s = c.u * alpha.asDiagonal() * c.u.transpose() -
                            c.v * alpha.asDiagonal() * c.v.transpose();
  const Eigen::MatrixXd su = s * c.u;
  const Eigen::MatrixXd sv = s * c.v;
  return ((c.u.array() * su.array()).colwise().sum() - (c.v.array() * sv.array()).colwise().sum())
      .transpose();
}

Eigen::MatrixXd dense_gram(const TripletCache& cache) {
  const Eigen::MatrixXd uu = cache.u.transpose() * cache.u;
  const Eigen::MatrixXd vv = cache.v.transpose() * cache.v;
  const Eigen::MatrixXd uv = cache.u.transpose() * cache.v;
  Eigen::MatrixXd g = uu.array().square() + vv.array().square() - uv.array().square() -
                      uv.transpose().array().square();
  // Exact symmetry; the expression above is symmetric up to rounding only.
  return (0.5 * (g + g.transpose())).eval();
}

KappaStats kappa(const TripletCache& cache) {
  const double p = cache.uu.norm();
  const double q = cache.vv.norm();
  KappaStats stats;
  stats.norms = {p * p, q * q, p * q, p * q};
  stats.kappa = *std::max_element(stats.norms.begin(), stats.norms.end());
  return stats;
}

}  // namespace durp
