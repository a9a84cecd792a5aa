#include "durp/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "durp/rng.hpp"

namespace durp {

namespace {

Eigen::MatrixXd normal_matrix(Index rows, Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

Eigen::MatrixXd orthonormal_columns(Index rows, Index cols, Rng& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(normal_matrix(rows, cols, rng));
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

std::vector<int> cyclic_labels(Index n, int classes) {
  if (classes < 1) throw std::invalid_argument("synthetic data: need at least one class");
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[i] = static_cast<int>(i % classes);
  return labels;
}

}  // namespace

LabeledDataset make_gaussian_blobs(Index d, Index n, int classes, double mean_scale, double noise,
                                   std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::MatrixXd means = mean_scale * normal_matrix(d, classes, rng);
  LabeledDataset data;
  data.labels = cyclic_labels(n, classes);
  data.points = noise * normal_matrix(d, n, rng);
  for (Index i = 0; i < n; ++i) data.points.col(i) += means.col(data.labels[i]);
  return data;
}

LabeledDataset make_separated_blobs(Index d, Index n, int classes, double gap, double noise,
                                    std::uint64_t seed) {
  if (classes > d) throw std::invalid_argument("make_separated_blobs: classes exceed dimension");
  Rng rng(seed);
  // Orthonormal directions e_c give pairwise mean distance gap when scaled by gap/sqrt(2).
  const Eigen::MatrixXd means = (gap / std::sqrt(2.0)) * orthonormal_columns(d, classes, rng);
  LabeledDataset data;
  data.labels = cyclic_labels(n, classes);
  data.points = noise * normal_matrix(d, n, rng);
  for (Index i = 0; i < n; ++i) data.points.col(i) += means.col(data.labels[i]);
  return data;
}

LabeledDataset make_low_rank_dataset(Index d, Index rank, Index n, int classes, double scale,
                                     std::uint64_t seed) {
  if (rank < 1 || rank > d) throw std::invalid_argument("make_low_rank_dataset: need 1 <= r <= d");
  Rng rng(seed);
  const Eigen::MatrixXd means = normal_matrix(rank, classes, rng);
  LabeledDataset data;
  data.labels = cyclic_labels(n, classes);
  Eigen::MatrixXd factors = normal_matrix(rank, n, rng);
  for (Index i = 0; i < n; ++i) factors.col(i) += means.col(data.labels[i]);
  data.points = orthonormal_columns(d, rank, rng) * (scale * factors);
  return data;
}

LabeledDataset make_isotropic_dataset(Index d, Index n, int classes, double scale,
                                      std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset data;
  data.points = scale * normal_matrix(d, n, rng);
  data.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) data.labels[i] = static_cast<int>(rng.below(classes));
  // Guarantee every class is present with two members when n allows.
  for (Index i = 0; i < std::min<Index>(n, 2 * classes); ++i) data.labels[i] = static_cast<int>(i % classes);
  return data;
}

std::pair<LabeledDataset, LabeledDataset> split_alternating(const LabeledDataset& data) {
  LabeledDataset first, second;
  const Index n = data.size();
  first.points.resize(data.dim(), (n + 1) / 2);
  second.points.resize(data.dim(), n / 2);
  for (Index i = 0; i < n; ++i) {
    auto& target = (i % 2 == 0) ? first : second;
    target.points.col(i / 2) = data.points.col(i);
    target.labels.push_back(data.labels[i]);
  }
  return {std::move(first), std::move(second)};
}

}  // namespace durp
