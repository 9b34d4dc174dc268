#include "mammo/classifiers/model.hpp"

#include <cmath>

namespace mammo {

namespace {

constexpr std::pair<ClassifierFamily, std::string_view> kFamilies[] = {
    {ClassifierFamily::Elm, "elm"},   {ClassifierFamily::Svm, "svm"},
    {ClassifierFamily::Knn, "knn"},   {ClassifierFamily::Tree, "tree"},
    {ClassifierFamily::Mlp, "mlp"},
};

template <class... Ts> struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts> Overload(Ts...) -> Overload<Ts...>;

} // namespace

std::vector<int> distinct_classes(std::span<const int> y) {
  std::vector<int> c(y.begin(), y.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  if (!c.empty() && c.front() < 0)
    throw ClassifierError("class ids must be non-negative");
  return c;
}

std::vector<int> class_positions(std::span<const int> y, std::span<const int> classes) {
  std::vector<int> pos;
  pos.reserve(y.size());
  for (int label : y) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label)
      throw ClassifierError("label " + std::to_string(label) + " is not a known class");
    pos.push_back(static_cast<int>(it - classes.begin()));
  }
  return pos;
}

void check_training_input(const FeatureRows &X, std::span<const int> y) {
  if (X.rows() == 0 || X.cols() == 0)
    throw ClassifierError("training data is empty");
  if (static_cast<std::size_t>(X.rows()) != y.size())
    throw ClassifierError("training data has " + std::to_string(X.rows()) + " rows but " +
                          std::to_string(y.size()) + " labels");
  if (!X.allFinite())
    throw ClassifierError("training data contains non-finite values");
  for (int label : y)
    if (label < 0)
      throw ClassifierError("class ids must be non-negative");
}

void check_dimensions(const FeatureRows &X, Eigen::Index expected) {
  if (X.cols() != expected)
    throw ClassifierError("expected " + std::to_string(expected) + " features, got " +
                          std::to_string(X.cols()));
}

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("accuracy needs equally sized label vectors");
  if (truth.empty())
    return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    hits += truth[i] == predicted[i];
  return 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::optional<ClassifierFamily> parse_classifier_family(std::string_view name) {
  for (const auto &[f, n] : kFamilies)
    if (n == name)
      return f;
  return std::nullopt;
}

std::string_view to_string(ClassifierFamily family) {
  for (const auto &[f, n] : kFamilies)
    if (f == family)
      return n;
  return "?";
}

ClassifierFamily family_of(const ClassifierConfig &cfg) {
  return static_cast<ClassifierFamily>(cfg.index());
}

std::string kernel_name(const ClassifierConfig &cfg) {
  return std::visit(Overload{
                        [](const ElmConfig &c) { return std::string(to_string(c.kernel)); },
                        [](const SvmConfig &c) { return std::string(to_string(c.kernel)); },
                        [](const KnnConfig &) { return std::string("none"); },
                        [](const TreeConfig &) { return std::string("none"); },
                        [](const MlpConfig &c) {
                          return std::string(to_string(c.trainer)) + ":" +
                                 architecture_name(c.architecture);
                        },
                    },
                    cfg);
}

std::vector<int> TrainedModel::predict(const FeatureRows &X) const {
  return std::visit([&](const auto &m) { return m.predict(X); }, model_);
}

Eigen::Index TrainedModel::dims() const {
  return std::visit(Overload{
                        [](const KnnModel &m) { return m.tree().points().cols(); },
                        [](const auto &m) { return m.dims(); },
                    },
                    model_);
}

TrainedModel train_classifier(const ClassifierConfig &cfg, const FeatureRows &X,
                              std::span<const int> y) {
  const std::string kind = std::string(to_string(family_of(cfg))) + ":" + kernel_name(cfg);
  auto t = timed([&]() -> TrainedModel::Variant {
    return std::visit(Overload{
                          [&](const ElmConfig &c) -> TrainedModel::Variant {
                            return ElmModel::train(X, y, c);
                          },
                          [&](const SvmConfig &c) -> TrainedModel::Variant {
                            return SvmModel::train(X, y, c);
                          },
                          [&](const KnnConfig &c) -> TrainedModel::Variant {
                            return KnnModel::train(X, y, c.leaf_capacity);
                          },
                          [&](const TreeConfig &c) -> TrainedModel::Variant {
                            return TreeModel::train(X, y, c);
                          },
                          [&](const MlpConfig &c) -> TrainedModel::Variant {
                            return MlpModel::train(X, y, c);
                          },
                      },
                      cfg);
  });
  return TrainedModel(std::move(t.value), kind, t.seconds);
}

} // namespace mammo
