#include "durp/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace durp {

int LabeledDataset::num_classes() const {
  int top = -1;
  for (int label : labels) top = std::max(top, label);
  return top + 1;
}

void LabeledDataset::validate() const {
  if (static_cast<Index>(labels.size()) != size()) {
    throw std::invalid_argument("dataset: label count " + std::to_string(labels.size()) +
                                " does not match point count " + std::to_string(size()));
  }
  for (int label : labels) {
    if (label < 0) throw std::invalid_argument("dataset: negative class id");
  }
  if (!points.allFinite()) throw std::invalid_argument("dataset: non-finite entry");
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

bool parse_double(const std::string& token, double& value) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  value = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size() && errno != ERANGE && std::isfinite(value);
}

bool parse_index(const std::string& token, long long& value) {
  if (token.empty()) return false;
  errno = 0;
  char* end = nullptr;
  value = std::strtoll(token.c_str(), &end, 10);
  return end == token.c_str() + token.size() && errno != ERANGE;
}

struct SparseRow {
  double label;
  std::vector<std::pair<Index, double>> entries;
};

}  // namespace

LibsvmData parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  std::vector<SparseRow> rows;
  Index max_index = 0;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;  // blank line

    SparseRow row;
    if (!parse_double(token, row.label)) {
      throw ParseError(line_number, "invalid label '" + token + "'");
    }
    Index previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParseError(line_number, "expected <index>:<value>, got '" + token + "'");
      }
      long long index = 0;
      double value = 0.0;
      if (!parse_index(token.substr(0, colon), index) || index < 1) {
        throw ParseError(line_number, "invalid feature index in '" + token + "'");
      }
      if (!parse_double(token.substr(colon + 1), value)) {
        throw ParseError(line_number, "invalid feature value in '" + token + "'");
      }
      if (index <= previous) {
        throw ParseError(line_number, "feature indices must be strictly increasing");
      }
      if (options.dim && index > *options.dim) {
        throw ParseError(line_number, "feature index " + std::to_string(index) +
                                          " exceeds dimension " + std::to_string(*options.dim));
      }
      previous = static_cast<Index>(index);
      row.entries.emplace_back(previous - 1, value);
    }
    max_index = std::max(max_index, previous);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(0, "no data lines");

  LibsvmData result;
  result.label_values = options.label_values;
  std::map<double, int> ids;
  for (std::size_t c = 0; c < result.label_values.size(); ++c) {
    ids.emplace(result.label_values[c], static_cast<int>(c));
  }
  std::vector<double> fresh;
  for (const auto& row : rows) {
    if (!ids.count(row.label)) fresh.push_back(row.label);
  }
  std::sort(fresh.begin(), fresh.end());
  fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
  for (double value : fresh) {
    ids.emplace(value, static_cast<int>(result.label_values.size()));
    result.label_values.push_back(value);
  }

  const Index dim = options.dim.value_or(max_index);
  const auto n = static_cast<Index>(rows.size());
  result.data.points = Eigen::MatrixXd::Zero(dim, n);
  result.data.labels.resize(rows.size());
  for (Index col = 0; col < n; ++col) {
    const auto& row = rows[static_cast<std::size_t>(col)];
    result.data.labels[static_cast<std::size_t>(col)] = ids.at(row.label);
    for (const auto& [index, value] : row.entries) result.data.points(index, col) = value;
  }
  return result;
}

LibsvmData load_libsvm(const std::string& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return parse_libsvm(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

void write_libsvm(std::ostream& out, const LabeledDataset& data,
                  const std::vector<double>& label_values) {
  data.validate();
  const auto old_precision = out.precision(17);
  for (Index col = 0; col < data.size(); ++col) {
    const int id = data.labels[static_cast<std::size_t>(col)];
    if (id >= static_cast<int>(label_values.size())) {
      throw std::invalid_argument("write_libsvm: class id without a label value");
    }
    out << label_values[static_cast<std::size_t>(id)];
    for (Index row = 0; row < data.dim(); ++row) {
      const double value = data.points(row, col);
      if (value != 0.0) out << ' ' << row + 1 << ':' << value;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void pad_dimension(LabeledDataset& data, Index dim) {
  if (dim < data.dim()) throw std::invalid_argument("pad_dimension: cannot shrink");
  if (dim == data.dim()) return;
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(dim, data.size());
  padded.topRows(data.dim()) = data.points;
  data.points = std::move(padded);
}

std::pair<LibsvmData, LibsvmData> load_train_test(const std::string& train_path,
                                                  const std::string& test_path) {
  LibsvmData train = load_libsvm(train_path);
  LibsvmOptions test_options;
  test_options.label_values = train.label_values;
  LibsvmData test = load_libsvm(test_path, test_options);
  // Test-only labels extend the map; training data never sees them.
  train.label_values = test.label_values;
  const Index dim = std::max(train.data.dim(), test.data.dim());
  pad_dimension(train.data, dim);
  pad_dimension(test.data, dim);
  return {std::move(train), std::move(test)};
}

namespace {

// Gram-Schmidt (two passes) of `column` against the first `count` columns of `basis`.
Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& basis, Index count, Eigen::VectorXd column) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index c = 0; c < count; ++c) column -= basis.col(c).dot(column) * basis.col(c);
  }
  return column;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> column) {
  Index arg = 0;
  column.cwiseAbs().maxCoeff(&arg);
  if (column(arg) < 0) column = -column;
}

}  // namespace

PcaBasis pca_fit(const LabeledDataset& data, Index k) {
  data.validate();
  const Index d = data.dim();
  const Index n = data.size();
  if (k < 1 || k > std::min(d, n)) {
    throw std::invalid_argument("pca_fit: k=" + std::to_string(k) + " outside [1, min(d, n)=" +
                                std::to_string(std::min(d, n)) + "]");
  }
  PcaBasis pca;
  pca.mean = data.points.rowwise().mean();
  const Eigen::MatrixXd centered = data.points.colwise() - pca.mean;
  pca.basis.resize(d, k);
  pca.eigenvalues.resize(k);

  Index filled = 0;
  if (d <= n) {
    const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");
    // Eigenvalues at or below this are treated as rank deficiency.
    const double tol = 1e-12 * std::max(solver.eigenvalues()(d - 1), 1e-300);
    for (Index c = 0; c < k; ++c) {
      const double lambda = solver.eigenvalues()(d - 1 - c);
      if (lambda <= tol) break;
      pca.eigenvalues(c) = lambda;
      pca.basis.col(c) = solver.eigenvectors().col(d - 1 - c);
      ++filled;
    }
  } else {
    // Dual route: eigenvectors of the n x n Gram map to covariance eigenvectors.
    const Eigen::MatrixXd gram = centered.transpose() * centered / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");
    const double tol = 1e-12 * std::max(solver.eigenvalues()(n - 1), 1e-300);
    for (Index c = 0; c < k; ++c) {
      const double lambda = solver.eigenvalues()(n - 1 - c);
      if (lambda <= tol) break;
      Eigen::VectorXd column = centered * solver.eigenvectors().col(n - 1 - c);
      column = orthogonalize(pca.basis, c, column);
      pca.basis.col(c) = column.normalized();
      pca.eigenvalues(c) = lambda;
      ++filled;
    }
  }

  for (Index c = filled; c < k; ++c) {
    pca.eigenvalues(c) = 0.0;
    for (Index axis = 0; axis < d; ++axis) {
      Eigen::VectorXd candidate = orthogonalize(pca.basis, c, Eigen::VectorXd::Unit(d, axis));
      if (candidate.norm() > 0.5) {
        pca.basis.col(c) = candidate.normalized();
        break;
      }
    }
  }
  for (Index c = 0; c < k; ++c) fix_sign(pca.basis.col(c));
  return pca;
}

Spectrum eigen_spectrum(const LabeledDataset& data) {
  data.validate();
  if (data.size() < 1) throw std::invalid_argument("eigen_spectrum: empty dataset");
  const Eigen::VectorXd mean = data.points.rowwise().mean();
  const Eigen::MatrixXd centered = data.points.colwise() - mean;
  const bool primal = data.dim() <= data.size();
  const Eigen::MatrixXd gram = primal ? Eigen::MatrixXd(centered * centered.transpose())
                                      : Eigen::MatrixXd(centered.transpose() * centered);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigen_spectrum: eigensolver failed");

  Spectrum spectrum;
  spectrum.values = solver.eigenvalues().reverse().cwiseMax(0.0);
  const double total = spectrum.values.sum();
  const double reference = data.points.squaredNorm();
  if (total <= 1e-20 * reference || total == 0.0) {
    spectrum.values.setZero();
    spectrum.degenerate = true;
  } else {
    spectrum.values /= total;
  }
  return spectrum;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "rank,normalized_eigenvalue\n";
  const auto old_precision = out.precision(17);
  for (Index i = 0; i < spectrum.values.size(); ++i) {
    out << i + 1 << ',' << spectrum.values(i) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace durp
