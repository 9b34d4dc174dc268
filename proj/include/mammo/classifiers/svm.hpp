#pragma once

#include "mammo/classifiers/common.hpp"

#include <optional>
#include <string_view>

namespace mammo {

enum class SvmKernel { Linear, Polynomial, Rbf, Sigmoid };

std::optional<SvmKernel> parse_svm_kernel(std::string_view name);
std::string_view to_string(SvmKernel kernel);
inline constexpr std::string_view kSvmKernelNames = "linear, polynomial, rbf, sigmoid";

/// C-SVC settings. An unset gamma resolves to 1/num_features at training.
struct SvmConfig {
  SvmKernel kernel = SvmKernel::Linear;
  double C = 1.0;
  int degree = 3;
  std::optional<double> gamma;
  double coef0 = 0.0;
  double tolerance = 1e-3;
  long max_iterations = 10'000'000;
  bool record_objective = false;
};

struct KernelParams {
  SvmKernel kernel;
  int degree;
  double gamma;
  double coef0;

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd> &a,
                    const Eigen::Ref<const Eigen::RowVectorXd> &b) const;
};

/// Two-class soft-margin machine, f(x) = Σ α_i y_i K(x_i, x) - ρ, y = ±1.
struct BinarySvm {
  KernelParams kernel;
  double C = 1.0;
  Eigen::VectorXd alpha; ///< one per training row
  Eigen::VectorXd y;     ///< ±1 per training row
  double rho = 0.0;
  Eigen::MatrixXd support_vectors;
  Eigen::VectorXd dual_coef; ///< α_i y_i for each support vector
  long iterations = 0;
  /// Dual objective Σα - ½αᵀQα after each iteration (if requested).
  std::vector<double> objective_trace;

  double decision(const Eigen::Ref<const Eigen::RowVectorXd> &x) const;
};

/// SMO with second-order working-set selection, stopping when the maximal
/// KKT gap falls below `cfg.tolerance`. `y` holds ±1.
BinarySvm train_binary_svm(const FeatureRows &X, const Eigen::VectorXd &y, const SvmConfig &cfg,
                           double gamma);

/// Largest violation of the box/complementarity conditions over the
/// training set: α=0 ⇒ y f ≥ 1, 0<α<C ⇒ y f = 1, α=C ⇒ y f ≤ 1.
double kkt_violation(const BinarySvm &svm, const FeatureRows &X);

/// One-vs-one multiclass C-SVC with majority voting; ties go to the lowest
/// class index.
class SvmModel {
public:
  static SvmModel train(const FeatureRows &X, std::span<const int> y, const SvmConfig &cfg);

  std::vector<int> predict(const FeatureRows &X) const;

  struct Pair {
    int first;  ///< class position voted for by f > 0
    int second; ///< class position voted for by f <= 0
    BinarySvm machine;
  };
  const std::vector<Pair> &machines() const { return machines_; }
  const std::vector<int> &classes() const { return classes_; }
  double gamma() const { return gamma_; }
  Eigen::Index dims() const { return dims_; }

private:
  std::vector<Pair> machines_;
  std::vector<int> classes_;
  double gamma_ = 0.0;
  Eigen::Index dims_ = 0;
};

} // namespace mammo
