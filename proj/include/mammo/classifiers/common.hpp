#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace mammo {

/// Feature rows, one sample per row.
using FeatureRows = Eigen::MatrixXd;
/// Integer class ids (ClassLabel values in the pipeline).
using ClassIds = std::vector<int>;

struct ClassifierError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Index of the largest entry; ties resolve to the lowest index.
template <typename Derived> Eigen::Index argmax_lowest(const Eigen::DenseBase<Derived> &v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best))
      best = i;
  return best;
}

/// Sorted distinct class ids; throws on negative ids or a size mismatch.
std::vector<int> distinct_classes(std::span<const int> y);

/// Position of each label in `classes`.
std::vector<int> class_positions(std::span<const int> y, std::span<const int> classes);

void check_training_input(const FeatureRows &X, std::span<const int> y);
void check_dimensions(const FeatureRows &X, Eigen::Index expected);

/// Wall-clock seconds of `fn()` on the monotonic clock.
template <typename Fn> double timeit(Fn &&fn) {
  const auto start = std::chrono::steady_clock::now();
  std::forward<Fn>(fn)();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename T> struct Timed {
  T value;
  double seconds;
};

template <typename Fn> auto timed(Fn &&fn) -> Timed<std::invoke_result_t<Fn>> {
  const auto start = std::chrono::steady_clock::now();
  auto value = std::forward<Fn>(fn)();
  return {std::move(value),
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
}

double accuracy(std::span<const int> truth, std::span<const int> predicted);

} // namespace mammo
