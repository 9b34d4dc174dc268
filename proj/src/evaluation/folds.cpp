#include "mammo/evaluation/folds.hpp"
#include "mammo/random.hpp"

#include <stdexcept>
#include <string>

namespace mammo {

FoldPlan make_fold_plan(Eigen::Index n, int k, std::uint64_t seed) {
  if (k < 2)
    throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (n < k)
    throw std::invalid_argument("cannot split " + std::to_string(n) + " samples into " +
                                std::to_string(k) + " folds");
  FoldPlan plan;
  plan.folds = k;
  plan.permutation_seed = seed;
  plan.fold_of.resize(static_cast<std::size_t>(n));
  const std::vector<int> order = permutation(static_cast<int>(n), seed);
  const Eigen::Index base = n / k;
  for (Eigen::Index i = 0; i < n; ++i)
    plan.fold_of[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        static_cast<int>(std::min<Eigen::Index>(i / base, k - 1));
  return plan;
}

std::vector<Eigen::Index> FoldPlan::members(int f) const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == f)
      out.push_back(static_cast<Eigen::Index>(i));
  return out;
}

std::vector<Eigen::Index> FoldPlan::complement(int f) const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != f)
      out.push_back(static_cast<Eigen::Index>(i));
  return out;
}

std::vector<int> FoldPlan::sizes() const {
  std::vector<int> s(static_cast<std::size_t>(folds), 0);
  for (int f : fold_of)
    ++s[static_cast<std::size_t>(f)];
  return s;
}

} // namespace mammo
