#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace mammo {

inline constexpr int kDefaultFolds = 10;

/// Assignment of each sample to a cross-validation fold.
struct FoldPlan {
  std::vector<int> fold_of; ///< sample index -> fold id
  int folds = 0;
  std::uint64_t permutation_seed = 0;

  /// Sample indices of fold `f`, ascending.
  std::vector<Eigen::Index> members(int f) const;
  /// Every sample not in fold `f`, ascending.
  std::vector<Eigen::Index> complement(int f) const;
  std::vector<int> sizes() const;
};

/// Shuffles [0, n) by `seed` and deals the first k-1 folds ⌊n/k⌋ samples
/// each, the last fold the rest. Throws std::invalid_argument if n < k or
/// k < 2.
FoldPlan make_fold_plan(Eigen::Index n, int k, std::uint64_t seed);

} // namespace mammo
