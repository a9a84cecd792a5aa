#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace durp {

using Index = Eigen::Index;

/// Points stored column-wise (d rows, n columns) with 0-based class ids.
struct LabeledDataset {
  Eigen::MatrixXd points;
  std::vector<int> labels;

  Index dim() const { return points.rows(); }
  Index size() const { return points.cols(); }
  int num_classes() const;

  /// Throws std::invalid_argument when labels and points disagree, a label is
  /// negative, or an entry is not finite.
  void validate() const;
};

/// Raised on malformed LIBSVM input. line() is 1-based, 0 for file-level errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LibsvmOptions {
  /// Exact dimension to use; indices beyond it are a parse error.
  std::optional<Index> dim;
  /// Label values already assigned ids (e.g. from the training file). Values
  /// not listed here get fresh ids in ascending order of value.
  std::vector<double> label_values;
};

struct LibsvmData {
  LabeledDataset data;
  /// label_values[id] is the original label of class id.
  std::vector<double> label_values;
};

LibsvmData parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
LibsvmData load_libsvm(const std::string& path, const LibsvmOptions& options = {});

/// Writes zero entries sparsely (omitted) with round-trip precision.
void write_libsvm(std::ostream& out, const LabeledDataset& data,
                  const std::vector<double>& label_values);

/// Loads a train/test pair with a shared label map and a common dimension.
std::pair<LibsvmData, LibsvmData> load_train_test(const std::string& train_path,
                                                  const std::string& test_path);

/// Zero-pads the feature dimension to `dim` (must not shrink).
void pad_dimension(LabeledDataset& data, Index dim);

struct PcaBasis {
  Eigen::MatrixXd basis;       // d x k, orthonormal columns
  Eigen::VectorXd mean;        // length d
  Eigen::VectorXd eigenvalues; // length k, nonincreasing
};

/// Top-k principal directions of the centered covariance (1/n) sum (x-mean)(x-mean)^T.
/// Directions beyond the data rank are an orthonormal completion with eigenvalue 0.
/// Each column is signed so that its largest-magnitude entry is positive.
PcaBasis pca_fit(const LabeledDataset& data, Index k);

struct Spectrum {
  Eigen::VectorXd values;   // nonincreasing, sums to 1 unless degenerate
  bool degenerate = false;  // centered data is numerically zero
};

/// Squared singular values of the centered data, normalized to sum to 1.
Spectrum eigen_spectrum(const LabeledDataset& data);

/// CSV with header `rank,normalized_eigenvalue`, rank starting at 1.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

}  // namespace durp
