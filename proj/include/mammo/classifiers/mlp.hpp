#pragma once

#include "mammo/classifiers/common.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace mammo {

/// First-order batch trainers.
///   batch  fixed-rate delta rule on the summed per-sample gradient
///   gd     gradient descent on the mean squared error
///   gdm    gradient descent with momentum
///   gda    gradient descent with adaptive learning rate
///   gdx    momentum and adaptive learning rate combined
///   rprop  resilient backpropagation
enum class MlpTrainer { Batch, Gd, Gdm, Gda, Gdx, Rprop };

std::optional<MlpTrainer> parse_mlp_trainer(std::string_view name);
std::string_view to_string(MlpTrainer trainer);
inline constexpr std::string_view kMlpTrainerNames = "batch, gd, gdm, gda, gdx, rprop";

/// The three hidden-layer layouts of the benchmark.
inline const std::vector<std::vector<int>> kMlpArchitectures = {{100}, {500}, {100, 100}};
std::string architecture_name(const std::vector<int> &hidden);

struct MlpConfig {
  std::vector<int> architecture{100};
  MlpTrainer trainer = MlpTrainer::Rprop;
  int max_epochs = 100;
  int patience = 5;
  double train_fraction = 0.70;
  double validation_fraction = 0.15;
  double test_fraction = 0.15;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double lr_increase = 1.05;
  double lr_decrease = 0.7;
  double max_error_ratio = 1.04;
  double rprop_delta0 = 0.07;
  double rprop_delta_max = 50.0;
  double rprop_increase = 1.2;
  double rprop_decrease = 0.5;
  std::uint64_t weight_seed = 1;
  std::uint64_t shuffle_seed = 1;
};

void validate(const MlpConfig &cfg);

/// Shape of a fully connected network: sizes[0] inputs, sizes.back() outputs.
/// Parameters are packed layer by layer, each layer as its weight matrix
/// (out × in, column major) followed by its bias vector.
struct MlpLayout {
  std::vector<int> sizes;
  Eigen::Index parameter_count() const;
  Eigen::Index weight_offset(std::size_t layer) const;
  Eigen::Index bias_offset(std::size_t layer) const;
  std::size_t layers() const { return sizes.size() - 1; }
};

/// Uniform ±1/√fan_in initial weights and biases.
Eigen::VectorXd mlp_initial_parameters(const MlpLayout &layout, std::uint64_t seed);

/// Network outputs (rows = samples): sigmoid hidden layers, linear output.
Eigen::MatrixXd mlp_forward(const MlpLayout &layout, const Eigen::VectorXd &theta,
                            const FeatureRows &X);

/// Mean squared error over all samples and outputs; fills `grad` with its
/// gradient when non-null.
double mlp_loss(const MlpLayout &layout, const Eigen::VectorXd &theta, const FeatureRows &X,
                const Eigen::MatrixXd &targets, Eigen::VectorXd *grad = nullptr);

/// Patience counter over validation error. `update` returns true when the
/// error improved on the best seen so far.
class EarlyStopping {
public:
  explicit EarlyStopping(int patience) : patience_(patience) {}
  bool update(double validation_error);
  bool should_stop() const { return failures_ >= patience_; }
  double best() const { return best_; }
  int failures() const { return failures_; }

private:
  int patience_;
  int failures_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
};

/// Train/validation/test row indices of a seeded 70/15/15 style split.
struct MlpSplit {
  std::vector<Eigen::Index> train, validation, test;
};
MlpSplit mlp_split(Eigen::Index n, const MlpConfig &cfg, std::uint64_t seed);

struct MlpHistory {
  std::vector<double> train_error;      ///< per epoch, index 0 = before training
  std::vector<double> validation_error; ///< as train_error; empty without validation
  int epochs = 0;                       ///< epochs actually run
  int best_epoch = 0;
};

class MlpModel {
public:
  /// Trains on (X_train, y_train) with early stopping on (X_val, y_val) and
  /// keeps the weights of the best validation epoch.
  static MlpModel fit(const FeatureRows &X_train, std::span<const int> y_train,
                      const FeatureRows &X_val, std::span<const int> y_val, const MlpConfig &cfg);

  /// Trains for the full epoch budget without early stopping and keeps the
  /// final weights.
  static MlpModel fit(const FeatureRows &X_train, std::span<const int> y_train,
                      const MlpConfig &cfg);

  /// Splits `X` by cfg.shuffle_seed into training and validation parts in the
  /// ratio train_fraction : validation_fraction and calls fit.
  static MlpModel train(const FeatureRows &X, std::span<const int> y, const MlpConfig &cfg);

  std::vector<int> predict(const FeatureRows &X) const;
  Eigen::MatrixXd outputs(const FeatureRows &X) const;

  const MlpLayout &layout() const { return layout_; }
  const Eigen::VectorXd &parameters() const { return theta_; }
  const MlpHistory &history() const { return history_; }
  const std::vector<int> &classes() const { return classes_; }
  Eigen::Index dims() const { return layout_.sizes.front(); }

private:
  struct Validation {
    const FeatureRows &X;
    std::span<const int> y;
  };
  static MlpModel fit_impl(const FeatureRows &X_train, std::span<const int> y_train,
                           const Validation *val, const MlpConfig &cfg);

  MlpLayout layout_;
  Eigen::VectorXd theta_;
  MlpHistory history_;
  std::vector<int> classes_;
};

/// One-hot target matrix for `y` over `classes`.
Eigen::MatrixXd one_hot(std::span<const int> y, std::span<const int> classes);

} // namespace mammo
