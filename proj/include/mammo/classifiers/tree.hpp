#pragma once

#include "mammo/classifiers/common.hpp"

#include <optional>

namespace mammo {

struct TreeConfig {
  /// Cap on internal nodes; unset means n - 1 for n training samples.
  std::optional<int> max_splits;
};

/// CART classification tree with axis-aligned threshold splits chosen by
/// Gini impurity. Nodes are expanded breadth first until every leaf is pure,
/// no split separates its samples, or the split budget is used up. Leaves
/// may hold a single sample.
class TreeModel {
public:
  static TreeModel train(const FeatureRows &X, std::span<const int> y, const TreeConfig &cfg = {});

  std::vector<int> predict(const FeatureRows &X) const;

  struct Node {
    int feature = -1; ///< -1 for leaves
    double threshold = 0.0; ///< x[feature] <= threshold goes left
    int left = -1, right = -1;
    int label = 0; ///< majority class (leaves)
    int depth = 0;
  };
  const std::vector<Node> &nodes() const { return nodes_; }
  int split_count() const;
  int depth() const;
  const std::vector<int> &classes() const { return classes_; }
  Eigen::Index dims() const { return dims_; }

private:
  std::vector<Node> nodes_;
  std::vector<int> classes_;
  Eigen::Index dims_ = 0;
};

/// Gini impurity 1 - Σ p_c² of a count vector.
double gini(std::span<const int> counts);

} // namespace mammo
