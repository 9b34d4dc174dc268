#include "mammo/classifiers/elm.hpp"
#include "mammo/classifiers/pseudoinverse.hpp"
#include "mammo/random.hpp"

#include <cmath>

namespace mammo {

namespace {

constexpr std::pair<ElmKernel, std::string_view> kNames[] = {
    {ElmKernel::Rbf, "rbf"},         {ElmKernel::Linear, "linear"},
    {ElmKernel::Polynomial, "polynomial"}, {ElmKernel::Wavelet, "wavelet"},
    {ElmKernel::Sigmoid, "sigmoid"}, {ElmKernel::Sine, "sine"},
    {ElmKernel::Hardlim, "hardlim"}, {ElmKernel::Tribas, "tribas"},
};

double activate(ElmKernel k, double z) {
  switch (k) {
  case ElmKernel::Linear:
    return z;
  case ElmKernel::Sigmoid:
    return 1.0 / (1.0 + std::exp(-z));
  case ElmKernel::Sine:
    return std::sin(z);
  case ElmKernel::Hardlim:
    return z >= 0.0 ? 1.0 : 0.0;
  case ElmKernel::Tribas:
    return std::max(0.0, 1.0 - std::abs(z));
  case ElmKernel::Polynomial:
    return (z + 1.0) * (z + 1.0);
  case ElmKernel::Wavelet:
    return std::cos(1.75 * z) * std::exp(-0.5 * z * z);
  case ElmKernel::Rbf:
    break;
  }
  throw std::logic_error("rbf is not a projection activation");
}

} // namespace

std::optional<ElmKernel> parse_elm_kernel(std::string_view name) {
  for (const auto &[k, n] : kNames)
    if (n == name)
      return k;
  return std::nullopt;
}

std::string_view to_string(ElmKernel kernel) {
  for (const auto &[k, n] : kNames)
    if (k == kernel)
      return n;
  return "?";
}

ElmModel ElmModel::train(const FeatureRows &X, std::span<const int> y, const ElmConfig &cfg) {
  check_training_input(X, y);
  if (cfg.hidden_neurons < 1)
    throw std::invalid_argument("ELM needs at least one hidden neuron");

  ElmModel m;
  m.cfg_ = cfg;
  m.classes_ = distinct_classes(y);
  const Eigen::Index hidden = cfg.hidden_neurons, dims = X.cols();

  Rng rng(cfg.weight_seed);
  m.input_weights_.resize(hidden, dims);
  m.biases_.resize(hidden);
  for (Eigen::Index i = 0; i < hidden; ++i) {
    for (Eigen::Index j = 0; j < dims; ++j)
      m.input_weights_(i, j) = rng.uniform(-1.0, 1.0);
    m.biases_[i] = cfg.kernel == ElmKernel::Rbf ? rng.uniform() : rng.uniform(-1.0, 1.0);
  }

  const std::vector<int> pos = class_positions(y, m.classes_);
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(X.rows(), static_cast<Eigen::Index>(m.classes_.size()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    targets(i, pos[static_cast<std::size_t>(i)]) = 1.0;

  m.beta_ = pseudoinverse(m.hidden(X)) * targets;
  return m;
}

Eigen::MatrixXd ElmModel::hidden(const FeatureRows &X) const {
  check_dimensions(X, dims());
  if (cfg_.kernel == ElmKernel::Rbf) {
    // |x - a|² = |x|² - 2 x·a + |a|²
    Eigen::MatrixXd d2 = (-2.0 * X * input_weights_.transpose()).colwise() + X.rowwise().squaredNorm();
    d2.rowwise() += input_weights_.rowwise().squaredNorm().transpose();
    return (-(d2.cwiseMax(0.0).array().rowwise() * biases_.transpose().array())).exp().matrix();
  }
  Eigen::MatrixXd z = (X * input_weights_.transpose()).rowwise() + biases_.transpose();
  const ElmKernel k = cfg_.kernel;
  return z.unaryExpr([k](double v) { return activate(k, v); });
}

Eigen::MatrixXd ElmModel::outputs(const FeatureRows &X) const { return hidden(X) * beta_; }

std::vector<int> ElmModel::predict(const FeatureRows &X) const {
  const Eigen::MatrixXd out = outputs(X);
  std::vector<int> labels(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    labels[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(argmax_lowest(out.row(i)))];
  return labels;
}

} // namespace mammo
