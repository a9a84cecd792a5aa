#include "durp/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "durp/rng.hpp"

namespace durp {

std::string_view to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::kGaussian: return "gaussian";
    case ProjectionKind::kPca: return "pca";
    case ProjectionKind::kIdentity: return "identity";
  }
  return "unknown";
}

ProjectionMatrix gaussian_matrix(Index d, Index m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw std::invalid_argument("gaussian_matrix: d and m must be positive");
  ProjectionMatrix projection;
  projection.kind = ProjectionKind::kGaussian;
  projection.seed = seed;
  projection.entries.resize(d, m);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index col = 0; col < m; ++col) {
    for (Index row = 0; row < d; ++row) projection.entries(row, col) = scale * rng.normal();
  }
  return projection;
}

ProjectionMatrix identity_projection(Index d) {
  if (d < 1) throw std::invalid_argument("identity_projection: d must be positive");
  ProjectionMatrix projection;
  projection.kind = ProjectionKind::kIdentity;
  projection.entries = Eigen::MatrixXd::Identity(d, d);
  return projection;
}

ProjectionMatrix pca_projection(const PcaBasis& pca) {
  ProjectionMatrix projection;
  projection.kind = ProjectionKind::kPca;
  projection.entries = pca.basis;
  return projection;
}

Eigen::MatrixXd project_points(const Eigen::MatrixXd& points, const ProjectionMatrix& projection) {
  if (points.rows() != projection.input_dim()) {
    throw std::invalid_argument("project_points: points have " + std::to_string(points.rows()) +
                                " rows, projection expects " +
                                std::to_string(projection.input_dim()));
  }
  return projection.entries.transpose() * points;
}

}  // namespace durp
