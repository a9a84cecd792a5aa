#include "durp/metric.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace durp {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  values_ = 0.5 * (m + m.transpose());
}

SymMatrix recover_metric(const Eigen::VectorXd& alpha, const TripletCache& cache, double lambda) {
  if (alpha.size() != cache.size()) {
    throw std::invalid_argument("recover_metric: " + std::to_string(alpha.size()) +
                                " dual variables for " + std::to_string(cache.size()) +
                                " triplets");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("recover_metric: lambda must be positive");
  if (cache.size() == 0) return SymMatrix(Eigen::MatrixXd::Zero(cache.dim(), cache.dim()));
  const double scale = -1.0 / (lambda * static_cast<double>(cache.size()));
  const Eigen::MatrixXd weighted_u = cache.u * (scale * alpha).asDiagonal();
  const Eigen::MatrixXd weighted_v = cache.v * (scale * alpha).asDiagonal();
  Eigen::MatrixXd m = weighted_u * cache.u.transpose();
  m.noalias() -= weighted_v * cache.v.transpose();
  return SymMatrix(m);
}

SymMatrix assemble_subspace_metric(const SymMatrix& subspace, const ProjectionMatrix& projection) {
  if (subspace.dim() != projection.output_dim()) {
    throw std::invalid_argument("assemble_subspace_metric: metric is " +
                                std::to_string(subspace.dim()) + "-dimensional, projection has " +
                                std::to_string(projection.output_dim()) + " columns");
  }
  const auto& r = projection.entries;
  return SymMatrix(r * subspace.values() * r.transpose());
}

SymMatrix psd_project(const SymMatrix& m) {
  if (m.dim() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.values());
  if (solver.info() != Eigen::Success) throw std::runtime_error("psd_project: eigensolver failed");
  const Eigen::VectorXd clamped = solver.eigenvalues().cwiseMax(0.0);
  const auto& vectors = solver.eigenvectors();
  return SymMatrix(vectors * clamped.asDiagonal() * vectors.transpose());
}

double metric_distance(const SymMatrix& m, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != m.dim() || y.size() != m.dim()) {
    throw std::invalid_argument("metric_distance: dimension mismatch");
  }
  const Eigen::VectorXd diff = x - y;
  return diff.dot(m.values() * diff);
}

Index numerical_rank(const SymMatrix& m, double tol) {
  if (m.dim() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.values(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd magnitude = solver.eigenvalues().cwiseAbs();
  const double top = magnitude.maxCoeff();
  if (top == 0.0) return 0;
  return (magnitude.array() > tol * top).count();
}

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
void write_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw std::runtime_error("metric file truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

constexpr char kEigenMagic[8] = {'D', 'U', 'R', 'P', 'E', 'I', 'G', '1'};
constexpr std::uint64_t kMaxDim = 1u << 20;

}  // namespace

void write_metric(std::ostream& out, const SymMatrix& m) {
  const auto q = static_cast<std::uint64_t>(m.dim());
  write_le(out, q);
  for (Index r = 0; r < m.dim(); ++r) {
    for (Index c = 0; c < m.dim(); ++c) write_le(out, m.values()(r, c));
  }
  if (!out) throw std::runtime_error("write_metric: stream error");
}

SymMatrix read_metric(std::istream& in) {
  const auto q = read_le<std::uint64_t>(in);
  if (q > kMaxDim) throw std::runtime_error("read_metric: implausible dimension");
  Eigen::MatrixXd m(static_cast<Index>(q), static_cast<Index>(q));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = read_le<double>(in);
  }
  return SymMatrix(m);
}

void save_metric(const std::string& path, const SymMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_metric(out, m);
}

SymMatrix load_metric(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_metric(in);
}

EigenformMetric to_eigenform(const SymMatrix& m, Index rank) {
  if (rank < 0 || rank > m.dim()) throw std::invalid_argument("to_eigenform: rank out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.values());
  if (solver.info() != Eigen::Success) throw std::runtime_error("to_eigenform: eigensolver failed");
  std::vector<Index> order(static_cast<std::size_t>(m.dim()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(solver.eigenvalues()(a)) > std::abs(solver.eigenvalues()(b));
  });
  EigenformMetric e;
  e.eigenvalues.resize(rank);
  e.eigenvectors.resize(m.dim(), rank);
  for (Index c = 0; c < rank; ++c) {
    e.eigenvalues(c) = solver.eigenvalues()(order[c]);
    e.eigenvectors.col(c) = solver.eigenvectors().col(order[c]);
  }
  return e;
}

SymMatrix from_eigenform(const EigenformMetric& e) {
  return SymMatrix(e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.transpose());
}

void write_eigenform(std::ostream& out, const EigenformMetric& e) {
  out.write(kEigenMagic, sizeof(kEigenMagic));
  write_le(out, static_cast<std::uint64_t>(e.eigenvectors.rows()));
  write_le(out, static_cast<std::uint64_t>(e.eigenvalues.size()));
  for (Index c = 0; c < e.eigenvalues.size(); ++c) write_le(out, e.eigenvalues(c));
  for (Index c = 0; c < e.eigenvectors.cols(); ++c) {
    for (Index r = 0; r < e.eigenvectors.rows(); ++r) write_le(out, e.eigenvectors(r, c));
  }
  if (!out) throw std::runtime_error("write_eigenform: stream error");
}

EigenformMetric read_eigenform(std::istream& in) {
  char magic[sizeof(kEigenMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kEigenMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("read_eigenform: bad magic");
  }
  const auto q = read_le<std::uint64_t>(in);
  const auto r = read_le<std::uint64_t>(in);
  if (q > kMaxDim || r > q) throw std::runtime_error("read_eigenform: implausible header");
  EigenformMetric e;
  e.eigenvalues.resize(static_cast<Index>(r));
  e.eigenvectors.resize(static_cast<Index>(q), static_cast<Index>(r));
  for (Index c = 0; c < e.eigenvalues.size(); ++c) e.eigenvalues(c) = read_le<double>(in);
  for (Index c = 0; c < e.eigenvectors.cols(); ++c) {
    for (Index row = 0; row < e.eigenvectors.rows(); ++row) e.eigenvectors(row, c) = read_le<double>(in);
  }
  return e;
}

}  // namespace durp
