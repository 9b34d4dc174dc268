#pragma once

#include "mammo/classifiers/common.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace mammo {

/// Hidden-unit activation. With z = w·x + b:
///   linear z, sigmoid 1/(1+e^-z), sine sin z, hardlim [z >= 0],
///   tribas max(0, 1-|z|), polynomial (z+1)², wavelet cos(1.75z)e^(-z²/2),
///   rbf exp(-|x-a|² b) with centre a and width b.
enum class ElmKernel { Rbf, Linear, Polynomial, Wavelet, Sigmoid, Sine, Hardlim, Tribas };

std::optional<ElmKernel> parse_elm_kernel(std::string_view name);
std::string_view to_string(ElmKernel kernel);
inline constexpr std::string_view kElmKernelNames =
    "rbf, linear, polynomial, wavelet, sigmoid, sine, hardlim, tribas";

struct ElmConfig {
  int hidden_neurons = 100;
  ElmKernel kernel = ElmKernel::Sigmoid;
  std::uint64_t weight_seed = 1;
};

/// Single hidden layer with random fixed input weights; output weights are
/// pinv(H)·T for one-hot targets T.
class ElmModel {
public:
  static ElmModel train(const FeatureRows &X, std::span<const int> y, const ElmConfig &cfg);

  std::vector<int> predict(const FeatureRows &X) const;

  /// Hidden activations H for `X` (rows = samples).
  Eigen::MatrixXd hidden(const FeatureRows &X) const;
  /// Hβ, one column per class.
  Eigen::MatrixXd outputs(const FeatureRows &X) const;

  const Eigen::MatrixXd &output_weights() const { return beta_; }
  const std::vector<int> &classes() const { return classes_; }
  Eigen::Index dims() const { return input_weights_.cols(); }

private:
  ElmConfig cfg_;
  Eigen::MatrixXd input_weights_; // hidden × dims (rbf: centres)
  Eigen::VectorXd biases_;        // hidden (rbf: widths)
  Eigen::MatrixXd beta_;          // hidden × classes
  std::vector<int> classes_;
};

} // namespace mammo
