#include "mammo/classifiers/knn.hpp"

#include <limits>
#include <numeric>

namespace mammo {

KdTree::KdTree(FeatureRows points, int leaf_capacity)
    : points_(std::move(points)), leaf_capacity_(leaf_capacity) {
  if (points_.rows() == 0)
    throw ClassifierError("k-NN needs at least one training sample");
  if (leaf_capacity_ < 1)
    throw std::invalid_argument("leaf capacity must be >= 1");
  order_.resize(static_cast<std::size_t>(points_.rows()));
  std::iota(order_.begin(), order_.end(), Eigen::Index{0});
  build(0, static_cast<int>(order_.size()));
}

int KdTree::build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end});
  if (end - begin <= leaf_capacity_)
    return id;

  int dim = -1;
  double widest = 0.0;
  for (Eigen::Index d = 0; d < points_.cols(); ++d) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int k = begin; k < end; ++k) {
      const double v = points_(order_[static_cast<std::size_t>(k)], d);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      dim = static_cast<int>(d);
    }
  }
  if (dim < 0)
    return id; // all points coincide

  const auto first = order_.begin() + begin, last = order_.begin() + end;
  std::sort(first, last, [&](Eigen::Index a, Eigen::Index b) {
    const double va = points_(a, dim), vb = points_(b, dim);
    return va < vb || (va == vb && a < b);
  });
  const int mid = begin + (end - begin) / 2;
  const double threshold = points_(order_[static_cast<std::size_t>(mid)], dim);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node &n = nodes_[static_cast<std::size_t>(id)];
  n.dim = dim;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  return id;
}

void KdTree::search(int node, const Eigen::RowVectorXd &q, Eigen::Index &best,
                    double &best_d2) const {
  const Node &n = nodes_[static_cast<std::size_t>(node)];
  if (n.dim < 0) {
    for (int k = n.begin; k < n.end; ++k) {
      const Eigen::Index idx = order_[static_cast<std::size_t>(k)];
      const double d2 = squared_distance(points_.row(idx), q);
      if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
        best_d2 = d2;
        best = idx;
      }
    }
    return;
  }
  const double diff = q[n.dim] - n.threshold;
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  search(near, q, best, best_d2);
  if (diff * diff <= best_d2)
    search(far, q, best, best_d2);
}

Eigen::Index KdTree::nearest(const Eigen::Ref<const Eigen::RowVectorXd> &query) const {
  check_dimensions(query, points_.cols());
  const Eigen::RowVectorXd q = query;
  Eigen::Index best = std::numeric_limits<Eigen::Index>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  search(0, q, best, best_d2);
  return best;
}

int KdTree::max_leaf_size() const {
  int m = 0;
  for (const Node &n : nodes_)
    if (n.dim < 0)
      m = std::max(m, n.end - n.begin);
  return m;
}

KnnModel KnnModel::train(const FeatureRows &X, std::span<const int> y, int leaf_capacity) {
  check_training_input(X, y);
  KnnModel m;
  m.tree_ = KdTree(X, leaf_capacity);
  m.labels_.assign(y.begin(), y.end());
  return m;
}

std::vector<int> KnnModel::predict(const FeatureRows &X) const {
  std::vector<int> out(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    out[static_cast<std::size_t>(i)] = labels_[static_cast<std::size_t>(tree_.nearest(X.row(i)))];
  return out;
}

} // namespace mammo
