#include "durp/triplets.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "durp/rng.hpp"

namespace durp {

InsufficientTripletsError::InsufficientTripletsError(std::size_t accepted, std::size_t draws)
    : std::runtime_error("insufficient active triplets: accepted " + std::to_string(accepted) +
                         " of " + std::to_string(draws) + " draws (acceptance rate " +
                         std::to_string(draws ? static_cast<double>(accepted) / draws : 0.0) + ")"),
      rate_(draws ? static_cast<double>(accepted) / static_cast<double>(draws) : 0.0) {}

TripletSet sample_active_triplets(const LabeledDataset& data, std::size_t count,
                                  std::uint64_t seed) {
  data.validate();
  TripletSet triplets;
  if (count == 0) return triplets;

  const int classes = data.num_classes();
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(std::max(classes, 0)));
  for (Index p = 0; p < data.size(); ++p) members[data.labels[p]].push_back(p);
  int populated = 0;
  bool has_pair = false;
  for (const auto& group : members) {
    populated += group.empty() ? 0 : 1;
    has_pair = has_pair || group.size() >= 2;
  }
  if (populated < 2 || !has_pair) {
    throw std::invalid_argument(
        "sample_active_triplets: need two classes and a class with two members");
  }
  std::vector<std::vector<Index>> others(members.size());
  for (std::size_t c = 0; c < members.size(); ++c) {
    for (Index p = 0; p < data.size(); ++p) {
      if (data.labels[p] != static_cast<int>(c)) others[c].push_back(p);
    }
  }

  Rng rng(seed);
  const std::size_t max_draws = 1000 * count;
  std::size_t draws = 0;
  triplets.reserve(count);
  const auto& x = data.points;
  while (triplets.size() < count) {
    if (draws == max_draws) throw InsufficientTripletsError(triplets.size(), draws);
    ++draws;
    const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(data.size())));
    const auto& same = members[data.labels[i]];
    if (same.size() < 2) continue;
    // Uniform over same-class points other than i.
    Index j = same[rng.below(same.size() - 1)];
    if (j == i) j = same.back();
    const auto& diff = others[data.labels[i]];
    const Index k = diff[rng.below(diff.size())];
    const double positive = (x.col(i) - x.col(j)).squaredNorm();
    const double negative = (x.col(i) - x.col(k)).squaredNorm();
    if (1.0 + positive - negative > 0.0) triplets.push_back({i, j, k});
  }
  return triplets;
}

void write_triplets_csv(std::ostream& out, const TripletSet& triplets) {
  out << "i,j,k\n";
  for (const auto& t : triplets) out << t.i << ',' << t.j << ',' << t.k << '\n';
}

TripletSet read_triplets_csv(std::istream& in) {
  TripletSet triplets;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || (line_number == 1 && line == "i,j,k")) continue;
    std::istringstream fields(line);
    Triplet t;
    char c1 = 0, c2 = 0;
    if (!(fields >> t.i >> c1 >> t.j >> c2 >> t.k) || c1 != ',' || c2 != ',' || t.i < 0 ||
        t.j < 0 || t.k < 0) {
      throw ParseError(line_number, "expected i,j,k");
    }
    triplets.push_back(t);
  }
  return triplets;
}

TripletCache build_cache(const LabeledDataset& data, const TripletSet& triplets) {
  const auto n = static_cast<Index>(triplets.size());
  TripletCache cache;
  cache.u.resize(data.dim(), n);
  cache.v.resize(data.dim(), n);
  for (Index t = 0; t < n; ++t) {
    const auto& tr = triplets[static_cast<std::size_t>(t)];
    if (tr.i >= data.size() || tr.j >= data.size() || tr.k >= data.size()) {
      throw std::out_of_range("build_cache: triplet index out of range");
    }
    cache.u.col(t) = data.points.col(tr.i) - data.points.col(tr.k);
    cache.v.col(t) = data.points.col(tr.i) - data.points.col(tr.j);
  }
  cache.uu = cache.u.colwise().squaredNorm().transpose();
  cache.vv = cache.v.colwise().squaredNorm().transpose();
  return cache;
}

TripletCache project_cache(const TripletCache& cache, const ProjectionMatrix& projection) {
  if (projection.input_dim() != cache.dim()) {
    throw std::invalid_argument("project_cache: projection expects dimension " +
                                std::to_string(projection.input_dim()) + ", cache has " +
                                std::to_string(cache.dim()));
  }
  TripletCache projected;
  projected.u = projection.entries.transpose() * cache.u;
  projected.v = projection.entries.transpose() * cache.v;
  projected.uu = projected.u.colwise().squaredNorm().transpose();
  projected.vv = projected.v.colwise().squaredNorm().transpose();
  return projected;
}

Eigen::MatrixXd assemble_constraint(const TripletCache& cache, Index t) {
  return cache.u.col(t) * cache.u.col(t).transpose() - cache.v.col(t) * cache.v.col(t).transpose();
}

}  // namespace durp
