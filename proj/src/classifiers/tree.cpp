#include "mammo/classifiers/tree.hpp"

#include <deque>
#include <limits>
#include <numeric>

namespace mammo {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0; // weighted child impurity
};

// Split point strictly between two distinct neighbouring values a < b.
double midpoint(double a, double b) {
  const double m = a + 0.5 * (b - a);
  return m < b ? m : a;
}

int majority(std::span<const int> counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)])
      best = static_cast<int>(c);
  return best;
}

// Best threshold over all features for the rows in `idx`, or feature -1 when
// every feature is constant on them. Ties keep the lowest feature and the
// lowest threshold.
Split best_split(const FeatureRows &X, std::span<const int> pos, std::vector<Eigen::Index> idx,
                 int nc) {
  Split best;
  best.impurity = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(idx.size());
  std::vector<int> left(static_cast<std::size_t>(nc)), total(static_cast<std::size_t>(nc), 0);
  for (Eigen::Index i : idx)
    ++total[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];

  for (Eigen::Index f = 0; f < X.cols(); ++f) {
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      return X(a, f) < X(b, f) || (X(a, f) == X(b, f) && a < b);
    });
    std::fill(left.begin(), left.end(), 0);
    std::vector<int> right = total;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
      const auto c = static_cast<std::size_t>(pos[static_cast<std::size_t>(idx[k])]);
      ++left[c];
      --right[c];
      const double a = X(idx[k], f), b = X(idx[k + 1], f);
      if (!(a < b))
        continue;
      const double nl = static_cast<double>(k + 1);
      const double imp = (nl * gini(left) + (n - nl) * gini(right)) / n;
      if (imp < best.impurity) {
        best = {static_cast<int>(f), midpoint(a, b), imp};
      }
    }
  }
  return best;
}

} // namespace

double gini(std::span<const int> counts) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (n == 0.0)
    return 0.0;
  double s = 1.0;
  for (int c : counts)
    s -= (c / n) * (c / n);
  return s;
}

TreeModel TreeModel::train(const FeatureRows &X, std::span<const int> y, const TreeConfig &cfg) {
  check_training_input(X, y);
  TreeModel m;
  m.classes_ = distinct_classes(y);
  m.dims_ = X.cols();
  const std::vector<int> pos = class_positions(y, m.classes_);
  const int nc = static_cast<int>(m.classes_.size());
  const int budget = cfg.max_splits.value_or(static_cast<int>(X.rows()) - 1);
  if (budget < 0)
    throw std::invalid_argument("max_splits must be >= 0");

  struct Pending {
    int node;
    std::vector<Eigen::Index> rows;
  };
  std::vector<Eigen::Index> all(static_cast<std::size_t>(X.rows()));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  std::deque<Pending> queue;
  m.nodes_.push_back({});
  queue.push_back({0, std::move(all)});

  int splits = 0;
  while (!queue.empty()) {
    Pending p = std::move(queue.front());
    queue.pop_front();
    std::vector<int> counts(static_cast<std::size_t>(nc), 0);
    for (Eigen::Index i : p.rows)
      ++counts[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])];
    m.nodes_[static_cast<std::size_t>(p.node)].label = m.classes_[static_cast<std::size_t>(majority(counts))];
    if (gini(counts) == 0.0 || splits >= budget)
      continue;

    // Zero-gain splits are allowed on impure nodes so that XOR-like layouts
    // still separate deeper down.
    const Split s = best_split(X, pos, p.rows, nc);
    if (s.feature < 0)
      continue;
    ++splits;
    Pending l{static_cast<int>(m.nodes_.size()), {}}, r{static_cast<int>(m.nodes_.size()) + 1, {}};
    for (Eigen::Index i : p.rows)
      (X(i, s.feature) <= s.threshold ? l.rows : r.rows).push_back(i);
    const int depth = m.nodes_[static_cast<std::size_t>(p.node)].depth + 1;
    m.nodes_.push_back({-1, 0.0, -1, -1, 0, depth});
    m.nodes_.push_back({-1, 0.0, -1, -1, 0, depth});
    Node &n = m.nodes_[static_cast<std::size_t>(p.node)];
    n.feature = s.feature;
    n.threshold = s.threshold;
    n.left = l.node;
    n.right = r.node;
    queue.push_back(std::move(l));
    queue.push_back(std::move(r));
  }
  return m;
}

std::vector<int> TreeModel::predict(const FeatureRows &X) const {
  check_dimensions(X, dims_);
  std::vector<int> out(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    int k = 0;
    while (nodes_[static_cast<std::size_t>(k)].feature >= 0) {
      const Node &n = nodes_[static_cast<std::size_t>(k)];
      k = X(i, n.feature) <= n.threshold ? n.left : n.right;
    }
    out[static_cast<std::size_t>(i)] = nodes_[static_cast<std::size_t>(k)].label;
  }
  return out;
}

int TreeModel::split_count() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                        [](const Node &n) { return n.feature >= 0; }));
}

int TreeModel::depth() const {
  int d = 0;
  for (const Node &n : nodes_)
    d = std::max(d, n.depth);
  return d;
}

} // namespace mammo
