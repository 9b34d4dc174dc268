#pragma once

#include "mammo/classifiers/elm.hpp"
#include "mammo/classifiers/knn.hpp"
#include "mammo/classifiers/mlp.hpp"
#include "mammo/classifiers/svm.hpp"
#include "mammo/classifiers/tree.hpp"

#include <string>
#include <variant>

namespace mammo {

enum class ClassifierFamily { Elm, Svm, Knn, Tree, Mlp };

std::optional<ClassifierFamily> parse_classifier_family(std::string_view name);
std::string_view to_string(ClassifierFamily family);
inline constexpr std::string_view kClassifierNames = "elm, svm, knn, tree, mlp";

struct KnnConfig {
  int leaf_capacity = kKnnLeafCapacity;
};

using ClassifierConfig = std::variant<ElmConfig, SvmConfig, KnnConfig, TreeConfig, MlpConfig>;

ClassifierFamily family_of(const ClassifierConfig &cfg);
/// Kernel or trainer name ("linear", "rprop:100-100", "none").
std::string kernel_name(const ClassifierConfig &cfg);

/// A fitted classifier of any family plus its measured training time.
class TrainedModel {
public:
  using Variant = std::variant<ElmModel, SvmModel, KnnModel, TreeModel, MlpModel>;

  TrainedModel(Variant model, std::string kind, double train_seconds)
      : model_(std::move(model)), kind_(std::move(kind)), train_seconds_(train_seconds) {}

  std::vector<int> predict(const FeatureRows &X) const;

  /// "<family>:<kernel>".
  const std::string &kind() const { return kind_; }
  double train_seconds() const { return train_seconds_; }
  Eigen::Index dims() const;
  const Variant &model() const { return model_; }

private:
  Variant model_;
  std::string kind_;
  double train_seconds_;
};

TrainedModel train_classifier(const ClassifierConfig &cfg, const FeatureRows &X,
                              std::span<const int> y);

} // namespace mammo
