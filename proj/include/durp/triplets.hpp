#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "durp/dataset.hpp"
#include "durp/projection.hpp"

namespace durp {

/// Anchor i, same-class partner j, different-class impostor k.
struct Triplet {
  Index i = 0;
  Index j = 0;
  Index k = 0;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

using TripletSet = std::vector<Triplet>;

class InsufficientTripletsError : public std::runtime_error {
 public:
  InsufficientTripletsError(std::size_t accepted, std::size_t draws);
  double acceptance_rate() const { return rate_; }

 private:
  double rate_;
};

/// Rejection-samples `count` triplets whose hinge loss under the Euclidean
/// metric is positive: 1 + |x_i - x_j|^2 - |x_i - x_k|^2 > 0. Anchors, partners
/// and impostors are drawn uniformly; duplicates are kept. Gives up after
/// 1000 * count draws.
TripletSet sample_active_triplets(const LabeledDataset& data, std::size_t count,
                                  std::uint64_t seed);

/// CSV `i,j,k` with 0-based indices and that header line.
void write_triplets_csv(std::ostream& out, const TripletSet& triplets);
TripletSet read_triplets_csv(std::istream& in);

/// Difference vectors that implicitly define A_t = u_t u_t^T - v_t v_t^T.
/// Columns are u_t = x_i - x_k and v_t = x_i - x_j.
struct TripletCache {
  Eigen::MatrixXd u;
  Eigen::MatrixXd v;
  Eigen::VectorXd uu;  // squared column norms of u
  Eigen::VectorXd vv;  // squared column norms of v

  Index dim() const { return u.rows(); }
  Index size() const { return u.cols(); }
};

TripletCache build_cache(const LabeledDataset& data, const TripletSet& triplets);

/// Cache of R^T u_t, R^T v_t; R^T A_t R is exactly representable this way.
TripletCache project_cache(const TripletCache& cache, const ProjectionMatrix& projection);

/// Dense A_t, for diagnostics and small-scale checks.
Eigen::MatrixXd assemble_constraint(const TripletCache& cache, Index t);

}  // namespace durp
