#include "mammo/dataio.hpp"
#include "mammo/random.hpp"

#include <algorithm>

namespace mammo {

std::vector<LabeledSample> balance_dataset(const std::vector<LabeledSample> &samples,
                                           std::uint64_t seed) {
  std::array<std::vector<const LabeledSample *>, kNumClasses> by_class;
  for (const auto &s : samples) {
    if (s.features.size() != samples.front().features.size())
      throw DataError("cannot balance: inconsistent feature dimensions");
    if (!s.synthetic)
      by_class[static_cast<int>(s.label)].push_back(&s);
  }
  std::size_t majority = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (by_class[c].empty())
      throw DataError("cannot balance: class '" +
                      std::string(to_string(static_cast<ClassLabel>(c))) + "' has no samples");
    majority = std::max(majority, by_class[c].size());
  }

  std::vector<LabeledSample> out = samples;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto &real = by_class[c];
    const std::size_t missing = majority - real.size();
    if (missing == 0)
      continue;
    if (real.size() < 2)
      throw DataError("cannot balance: class '" +
                      std::string(to_string(static_cast<ClassLabel>(c))) +
                      "' needs at least 2 real samples for synthesis");
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c));
    const Eigen::Index dims = real.front()->features.size();
    Eigen::VectorXd weights(static_cast<Eigen::Index>(real.size()));
    for (std::size_t k = 0; k < missing; ++k) {
      double total = 0.0;
      do {
        for (Eigen::Index i = 0; i < weights.size(); ++i)
          weights[i] = rng.uniform();
        total = weights.sum();
      } while (total <= 0.0);
      weights /= total;

      LabeledSample synth{Eigen::VectorXd::Zero(dims), static_cast<ClassLabel>(c), true};
      for (std::size_t i = 0; i < real.size(); ++i)
        synth.features += weights[static_cast<Eigen::Index>(i)] * real[i]->features;
      out.push_back(std::move(synth));
    }
  }
  return out;
}

} // namespace mammo
