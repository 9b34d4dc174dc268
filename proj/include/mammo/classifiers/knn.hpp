#pragma once

#include "mammo/classifiers/common.hpp"

#include <memory>

namespace mammo {

inline constexpr int kKnnLeafCapacity = 50;

/// Exact Euclidean kd-tree. Buckets hold at most `leaf_capacity` points;
/// nodes split at the median of the widest coordinate.
class KdTree {
public:
  KdTree() = default;
  KdTree(FeatureRows points, int leaf_capacity = kKnnLeafCapacity);

  /// Index of the nearest stored point; equal distances resolve to the
  /// lowest index.
  Eigen::Index nearest(const Eigen::Ref<const Eigen::RowVectorXd> &query) const;

  const FeatureRows &points() const { return points_; }
  int leaf_capacity() const { return leaf_capacity_; }
  int max_leaf_size() const;
  int node_count() const { return static_cast<int>(nodes_.size()); }

private:
  struct Node {
    int begin = 0, end = 0; // range into order_ (leaves)
    int dim = -1;           // split coordinate; -1 for leaves
    double threshold = 0.0;
    int left = -1, right = -1;
  };
  int build(int begin, int end);
  void search(int node, const Eigen::RowVectorXd &q, Eigen::Index &best, double &best_d2) const;

  FeatureRows points_;
  int leaf_capacity_ = kKnnLeafCapacity;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
};

/// 1-nearest-neighbour classifier.
class KnnModel {
public:
  static KnnModel train(const FeatureRows &X, std::span<const int> y,
                        int leaf_capacity = kKnnLeafCapacity);
  std::vector<int> predict(const FeatureRows &X) const;

  const KdTree &tree() const { return tree_; }

private:
  KdTree tree_;
  std::vector<int> labels_;
};

/// Σ (a_i - b_i)² accumulated left to right. Shared by the tree and any
/// reference scan so both see bit-identical distances.
inline double squared_distance(const Eigen::Ref<const Eigen::RowVectorXd> &a,
                               const Eigen::Ref<const Eigen::RowVectorXd> &b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

} // namespace mammo
