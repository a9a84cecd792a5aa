#pragma once

#include <cstdint>
#include <string_view>

#include "durp/dataset.hpp"

namespace durp {

enum class ProjectionKind { kGaussian, kPca, kIdentity };

std::string_view to_string(ProjectionKind kind);

/// A d x m linear map; points project as R^T x.
struct ProjectionMatrix {
  Eigen::MatrixXd entries;
  ProjectionKind kind = ProjectionKind::kGaussian;
  std::uint64_t seed = 0;  // meaningful for kGaussian only

  Index input_dim() const { return entries.rows(); }
  Index output_dim() const { return entries.cols(); }
};

/// Entries i.i.d. N(0, 1/m), filled column by column from Rng(seed).
ProjectionMatrix gaussian_matrix(Index d, Index m, std::uint64_t seed);

ProjectionMatrix identity_projection(Index d);

/// Wraps a PCA basis (orthonormal columns) as a projection.
ProjectionMatrix pca_projection(const PcaBasis& pca);

/// Returns R^T X.
Eigen::MatrixXd project_points(const Eigen::MatrixXd& points, const ProjectionMatrix& projection);

}  // namespace durp
