#pragma once

#include "json.hpp"

#include "durp/dataset.hpp"
#include "durp/metric.hpp"

namespace durp {

struct EvalReport {
  double map = 0.0;
  double knn_accuracy = 0.0;
  int k = 0;
  std::size_t n_queries = 0;
  std::size_t excluded_queries = 0;
};

/// Fields `map`, `knn_accuracy`, `k`, `n_queries`, `excluded_queries`.
nlohmann::json to_json(const EvalReport& report);

struct MapResult {
  double map = 0.0;
  std::size_t n_queries = 0;  // queries with at least one relevant item
  std::size_t excluded_queries = 0;
};

/// Every test point queries all other test points, ranked by ascending d_M
/// (ties by index). Relevant means same class. Queries without a relevant
/// item are excluded from the mean.
MapResult evaluate_map(const SymMatrix& m, const LabeledDataset& test);
double map_score(const SymMatrix& m, const LabeledDataset& test);

/// Majority vote of the k training points nearest under d_M. Distance ties go
/// to the smaller training index, vote ties to the smaller class id.
double knn_accuracy(const SymMatrix& m, const LabeledDataset& train, const LabeledDataset& test,
                    int k);

EvalReport evaluate(const SymMatrix& m, const LabeledDataset& train, const LabeledDataset& test,
                    int k);

}  // namespace durp
