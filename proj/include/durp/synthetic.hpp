#pragma once

#include <cstdint>

#include "durp/dataset.hpp"

namespace durp {

/// Gaussian class blobs: class means drawn as N(0, mean_scale^2 I), points as
/// mean + N(0, noise^2 I). Labels cycle 0, 1, ..., classes-1.
LabeledDataset make_gaussian_blobs(Index d, Index n, int classes, double mean_scale, double noise,
                                   std::uint64_t seed);

/// Blobs whose means sit on a regular simplex-like layout: every pair of class
/// means is `gap` apart (along random orthonormal directions) with unit-variance
/// isotropic noise scaled by `noise`.
LabeledDataset make_separated_blobs(Index d, Index n, int classes, double gap, double noise,
                                    std::uint64_t seed);

/// Exactly rank-r data: r-dimensional class blobs (scale `scale`) mapped into
/// R^d by a random matrix with orthonormal columns.
LabeledDataset make_low_rank_dataset(Index d, Index rank, Index n, int classes, double scale,
                                     std::uint64_t seed);

/// Full-rank isotropic data, entries i.i.d. N(0, scale^2), random labels.
LabeledDataset make_isotropic_dataset(Index d, Index n, int classes, double scale,
                                      std::uint64_t seed);

/// Splits a dataset into two halves by alternating columns (even -> first).
std::pair<LabeledDataset, LabeledDataset> split_alternating(const LabeledDataset& data);

}  // namespace durp
