#include "mammo/classifiers/mlp.hpp"
#include "mammo/random.hpp"

#include <cmath>

namespace mammo {

namespace {

constexpr std::pair<MlpTrainer, std::string_view> kNames[] = {
    {MlpTrainer::Batch, "batch"}, {MlpTrainer::Gd, "gd"},   {MlpTrainer::Gdm, "gdm"},
    {MlpTrainer::Gda, "gda"},     {MlpTrainer::Gdx, "gdx"}, {MlpTrainer::Rprop, "rprop"},
};

constexpr double kRpropDeltaMin = 1e-6;

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

ConstMap weights(const MlpLayout &l, const Eigen::VectorXd &theta, std::size_t k) {
  return ConstMap(theta.data() + l.weight_offset(k), l.sizes[k + 1], l.sizes[k]);
}

ConstVecMap biases(const MlpLayout &l, const Eigen::VectorXd &theta, std::size_t k) {
  return ConstVecMap(theta.data() + l.bias_offset(k), l.sizes[k + 1]);
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd &z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

// Activations of every layer, activations[0] = X.
std::vector<Eigen::MatrixXd> forward_all(const MlpLayout &l, const Eigen::VectorXd &theta,
                                         const FeatureRows &X) {
  std::vector<Eigen::MatrixXd> a;
  a.reserve(l.sizes.size());
  a.push_back(X);
  for (std::size_t k = 0; k < l.layers(); ++k) {
    Eigen::MatrixXd z = (a.back() * weights(l, theta, k).transpose()).rowwise() +
                        biases(l, theta, k).transpose();
    a.push_back(k + 1 < l.layers() ? sigmoid(z) : std::move(z));
  }
  return a;
}

MlpLayout make_layout(Eigen::Index inputs, const std::vector<int> &hidden, std::size_t outputs) {
  MlpLayout l;
  l.sizes.push_back(static_cast<int>(inputs));
  l.sizes.insert(l.sizes.end(), hidden.begin(), hidden.end());
  l.sizes.push_back(static_cast<int>(outputs));
  return l;
}

FeatureRows rows_of(const FeatureRows &X, const std::vector<Eigen::Index> &idx) {
  return X(idx, Eigen::all);
}

std::vector<int> labels_of(std::span<const int> y, const std::vector<Eigen::Index> &idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (Eigen::Index i : idx)
    out.push_back(y[static_cast<std::size_t>(i)]);
  return out;
}

} // namespace

std::optional<MlpTrainer> parse_mlp_trainer(std::string_view name) {
  for (const auto &[k, n] : kNames)
    if (n == name)
      return k;
  return std::nullopt;
}

std::string_view to_string(MlpTrainer trainer) {
  for (const auto &[k, n] : kNames)
    if (k == trainer)
      return n;
  return "?";
}

std::string architecture_name(const std::vector<int> &hidden) {
  std::string s;
  for (std::size_t i = 0; i < hidden.size(); ++i)
    s += (i ? "-" : "") + std::to_string(hidden[i]);
  return s;
}

void validate(const MlpConfig &cfg) {
  if (cfg.architecture.empty())
    throw std::invalid_argument("MLP needs at least one hidden layer");
  for (int h : cfg.architecture)
    if (h < 1)
      throw std::invalid_argument("MLP hidden layers need at least one neuron");
  if (cfg.max_epochs < 0 || cfg.patience < 1)
    throw std::invalid_argument("MLP needs max_epochs >= 0 and patience >= 1");
  const double fractions[] = {cfg.train_fraction, cfg.validation_fraction, cfg.test_fraction};
  for (double f : fractions)
    if (!(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("MLP split fractions must lie in [0, 1]");
  if (std::abs(cfg.train_fraction + cfg.validation_fraction + cfg.test_fraction - 1.0) > 1e-9)
    throw std::invalid_argument("MLP split fractions must sum to 1");
  if (cfg.learning_rate < 0.0 || cfg.momentum < 0.0 || cfg.momentum >= 1.0)
    throw std::invalid_argument("MLP needs learning_rate >= 0 and momentum in [0, 1)");
}

Eigen::Index MlpLayout::parameter_count() const { return bias_offset(layers() - 1) + sizes.back(); }

Eigen::Index MlpLayout::weight_offset(std::size_t layer) const {
  Eigen::Index off = 0;
  for (std::size_t k = 0; k < layer; ++k)
    off += static_cast<Eigen::Index>(sizes[k + 1]) * (sizes[k] + 1);
  return off;
}

Eigen::Index MlpLayout::bias_offset(std::size_t layer) const {
  return weight_offset(layer) + static_cast<Eigen::Index>(sizes[layer + 1]) * sizes[layer];
}

Eigen::VectorXd mlp_initial_parameters(const MlpLayout &layout, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd theta(layout.parameter_count());
  for (std::size_t k = 0; k < layout.layers(); ++k) {
    const double r = 1.0 / std::sqrt(static_cast<double>(layout.sizes[k]));
    const Eigen::Index begin = layout.weight_offset(k), end = layout.weight_offset(k + 1);
    for (Eigen::Index i = begin; i < end; ++i)
      theta[i] = rng.uniform(-r, r);
  }
  return theta;
}

Eigen::MatrixXd mlp_forward(const MlpLayout &layout, const Eigen::VectorXd &theta,
                            const FeatureRows &X) {
  return std::move(forward_all(layout, theta, X).back());
}

double mlp_loss(const MlpLayout &layout, const Eigen::VectorXd &theta, const FeatureRows &X,
                const Eigen::MatrixXd &targets, Eigen::VectorXd *grad) {
  const std::vector<Eigen::MatrixXd> a = forward_all(layout, theta, X);
  const Eigen::MatrixXd err = a.back() - targets;
  const double scale = 1.0 / static_cast<double>(err.size());
  const double loss = err.squaredNorm() * scale;
  if (!grad)
    return loss;

  grad->resize(theta.size());
  Eigen::MatrixXd delta = 2.0 * scale * err; // ∂loss/∂z of the output layer
  for (std::size_t k = layout.layers(); k-- > 0;) {
    Eigen::Map<Eigen::MatrixXd>(grad->data() + layout.weight_offset(k), layout.sizes[k + 1],
                                layout.sizes[k]) = delta.transpose() * a[k];
    grad->segment(layout.bias_offset(k), layout.sizes[k + 1]) = delta.colwise().sum().transpose();
    if (k > 0) {
      const Eigen::MatrixXd &h = a[k];
      delta = ((delta * weights(layout, theta, k)).array() * h.array() * (1.0 - h.array())).matrix();
    }
  }
  return loss;
}

bool EarlyStopping::update(double validation_error) {
  if (validation_error < best_) {
    best_ = validation_error;
    failures_ = 0;
    return true;
  }
  ++failures_;
  return false;
}

MlpSplit mlp_split(Eigen::Index n, const MlpConfig &cfg, std::uint64_t seed) {
  validate(cfg);
  const auto count = [n](double f) {
    return static_cast<Eigen::Index>(std::llround(f * static_cast<double>(n)));
  };
  const Eigen::Index n_val = count(cfg.validation_fraction), n_test = count(cfg.test_fraction);
  const Eigen::Index n_train = n - n_val - n_test;
  if (n_train < 1 || (cfg.validation_fraction > 0.0 && n_val < 1) ||
      (cfg.test_fraction > 0.0 && n_test < 1))
    throw ClassifierError("MLP split of " + std::to_string(n) + " samples leaves an empty partition");

  const std::vector<int> p = permutation(static_cast<int>(n), seed);
  MlpSplit s;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = p[static_cast<std::size_t>(i)];
    (i < n_train ? s.train : i < n_train + n_val ? s.validation : s.test).push_back(r);
  }
  return s;
}

Eigen::MatrixXd one_hot(std::span<const int> y, std::span<const int> classes) {
  const std::vector<int> pos = class_positions(y, classes);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(y.size()),
                                            static_cast<Eigen::Index>(classes.size()));
  for (std::size_t i = 0; i < pos.size(); ++i)
    t(static_cast<Eigen::Index>(i), pos[i]) = 1.0;
  return t;
}

MlpModel MlpModel::fit(const FeatureRows &X_train, std::span<const int> y_train,
                       const FeatureRows &X_val, std::span<const int> y_val, const MlpConfig &cfg) {
  check_training_input(X_val, y_val);
  check_dimensions(X_val, X_train.cols());
  const Validation val{X_val, y_val};
  return fit_impl(X_train, y_train, &val, cfg);
}

MlpModel MlpModel::fit(const FeatureRows &X_train, std::span<const int> y_train,
                       const MlpConfig &cfg) {
  return fit_impl(X_train, y_train, nullptr, cfg);
}

MlpModel MlpModel::fit_impl(const FeatureRows &X_train, std::span<const int> y_train,
                            const Validation *val, const MlpConfig &cfg) {
  validate(cfg);
  check_training_input(X_train, y_train);

  MlpModel m;
  m.classes_ = distinct_classes(y_train);
  m.layout_ = make_layout(X_train.cols(), cfg.architecture, m.classes_.size());
  const Eigen::MatrixXd T = one_hot(y_train, m.classes_);
  Eigen::MatrixXd T_val;
  if (val) {
    for (int label : val->y)
      if (!std::binary_search(m.classes_.begin(), m.classes_.end(), label))
        throw ClassifierError("validation label " + std::to_string(label) +
                              " absent from training");
    T_val = one_hot(val->y, m.classes_);
  }
  const MlpLayout &layout = m.layout_;

  Eigen::VectorXd theta = mlp_initial_parameters(layout, cfg.weight_seed);
  const Eigen::Index P = theta.size();
  Eigen::VectorXd g(P), velocity = Eigen::VectorXd::Zero(P);
  Eigen::VectorXd prev_g = Eigen::VectorXd::Zero(P);
  Eigen::VectorXd delta = Eigen::VectorXd::Constant(P, cfg.rprop_delta0);
  double lr = cfg.learning_rate;
  const double batch_scale = 0.5 * static_cast<double>(T.size());

  double E = mlp_loss(layout, theta, X_train, T, &g);
  EarlyStopping stop(cfg.patience);
  m.theta_ = theta;
  m.history_.train_error.push_back(E);
  if (val) {
    stop.update(mlp_loss(layout, theta, val->X, T_val));
    m.history_.validation_error.push_back(stop.best());
  }

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    switch (cfg.trainer) {
    case MlpTrainer::Batch:
      theta -= lr * batch_scale * g;
      E = mlp_loss(layout, theta, X_train, T, &g);
      break;
    case MlpTrainer::Gd:
      theta -= lr * g;
      E = mlp_loss(layout, theta, X_train, T, &g);
      break;
    case MlpTrainer::Gdm:
      velocity = cfg.momentum * velocity - (1.0 - cfg.momentum) * lr * g;
      theta += velocity;
      E = mlp_loss(layout, theta, X_train, T, &g);
      break;
    case MlpTrainer::Gda:
    case MlpTrainer::Gdx: {
      const Eigen::VectorXd step = cfg.trainer == MlpTrainer::Gdx
                                       ? Eigen::VectorXd(cfg.momentum * velocity -
                                                         (1.0 - cfg.momentum) * lr * g)
                                       : Eigen::VectorXd(-lr * g);
      const Eigen::VectorXd candidate = theta + step;
      Eigen::VectorXd g_new(P);
      const double E_new = mlp_loss(layout, candidate, X_train, T, &g_new);
      if (E_new > E * cfg.max_error_ratio) {
        lr *= cfg.lr_decrease; // reject the step
        velocity.setZero();
      } else {
        if (E_new < E)
          lr *= cfg.lr_increase;
        theta = candidate;
        velocity = step;
        E = E_new;
        g = std::move(g_new);
      }
      break;
    }
    case MlpTrainer::Rprop:
      for (Eigen::Index i = 0; i < P; ++i) {
        const double s = g[i] * prev_g[i];
        if (s > 0.0) {
          delta[i] = std::min(delta[i] * cfg.rprop_increase, cfg.rprop_delta_max);
        } else if (s < 0.0) {
          delta[i] = std::max(delta[i] * cfg.rprop_decrease, kRpropDeltaMin);
          g[i] = 0.0;
        }
        theta[i] -= (g[i] > 0.0 ? 1.0 : g[i] < 0.0 ? -1.0 : 0.0) * delta[i];
      }
      prev_g = g;
      E = mlp_loss(layout, theta, X_train, T, &g);
      break;
    }

    m.history_.train_error.push_back(E);
    m.history_.epochs = epoch;
    if (!val) {
      m.theta_ = theta;
      m.history_.best_epoch = epoch;
      if (!std::isfinite(E))
        break;
      continue;
    }
    const double V = mlp_loss(layout, theta, val->X, T_val);
    m.history_.validation_error.push_back(V);
    if (stop.update(V)) {
      m.theta_ = theta;
      m.history_.best_epoch = epoch;
    }
    if (stop.should_stop() || !std::isfinite(E))
      break;
  }
  return m;
}

MlpModel MlpModel::train(const FeatureRows &X, std::span<const int> y, const MlpConfig &cfg) {
  validate(cfg);
  check_training_input(X, y);
  MlpConfig inner = cfg;
  const double tv = cfg.train_fraction + cfg.validation_fraction;
  if (!(cfg.validation_fraction > 0.0))
    throw std::invalid_argument("MLP training needs a validation fraction");
  inner.train_fraction = cfg.train_fraction / tv;
  inner.validation_fraction = cfg.validation_fraction / tv;
  inner.test_fraction = 0.0;
  const MlpSplit s = mlp_split(X.rows(), inner, cfg.shuffle_seed);
  return fit(rows_of(X, s.train), labels_of(y, s.train), rows_of(X, s.validation),
             labels_of(y, s.validation), cfg);
}

Eigen::MatrixXd MlpModel::outputs(const FeatureRows &X) const {
  check_dimensions(X, dims());
  return mlp_forward(layout_, theta_, X);
}

std::vector<int> MlpModel::predict(const FeatureRows &X) const {
  const Eigen::MatrixXd out = outputs(X);
  std::vector<int> labels(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    labels[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(argmax_lowest(out.row(i)))];
  return labels;
}

} // namespace mammo
