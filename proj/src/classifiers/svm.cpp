#include "mammo/classifiers/svm.hpp"

#include <cmath>
#include <limits>

namespace mammo {

namespace {

constexpr std::pair<SvmKernel, std::string_view> kNames[] = {
    {SvmKernel::Linear, "linear"},
    {SvmKernel::Polynomial, "polynomial"},
    {SvmKernel::Rbf, "rbf"},
    {SvmKernel::Sigmoid, "sigmoid"},
};

constexpr double kTau = 1e-12;

Eigen::MatrixXd gram(const FeatureRows &A, const FeatureRows &B, const KernelParams &k) {
  Eigen::MatrixXd dot = A * B.transpose();
  switch (k.kernel) {
  case SvmKernel::Linear:
    return dot;
  case SvmKernel::Polynomial:
    return (k.gamma * dot.array() + k.coef0).pow(k.degree).matrix();
  case SvmKernel::Sigmoid:
    return (k.gamma * dot.array() + k.coef0).tanh().matrix();
  case SvmKernel::Rbf: {
    Eigen::MatrixXd d2 = (-2.0 * dot).colwise() + A.rowwise().squaredNorm();
    d2.rowwise() += B.rowwise().squaredNorm().transpose();
    return (-k.gamma * d2.array().max(0.0)).exp().matrix();
  }
  }
  throw std::logic_error("unknown SVM kernel");
}

// Dual solver on a precomputed kernel matrix (libsvm's WSS2 scheme).
BinarySvm solve(const Eigen::MatrixXd &K, const Eigen::VectorXd &y, const SvmConfig &cfg) {
  const Eigen::Index n = y.size();
  const double C = cfg.C;
  const double eps = cfg.tolerance;
  const Eigen::MatrixXd Q = (y * y.transpose()).cwiseProduct(K);
  const Eigen::VectorXd QD = Q.diagonal();

  BinarySvm svm;
  svm.C = C;
  svm.y = y;
  Eigen::VectorXd &alpha = svm.alpha;
  alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd G = Eigen::VectorXd::Constant(n, -1.0);

  const auto upper = [&](Eigen::Index t) { return alpha[t] >= C; };
  const auto lower = [&](Eigen::Index t) { return alpha[t] <= 0.0; };
  const auto in_up = [&](Eigen::Index t) { return y[t] > 0 ? !upper(t) : !lower(t); };
  const auto in_low = [&](Eigen::Index t) { return y[t] > 0 ? !lower(t) : !upper(t); };

  for (;;) {
    double Gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t)
      if (in_up(t) && -y[t] * G[t] >= Gmax) {
        Gmax = -y[t] * G[t];
        i = t;
      }

    double Gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t))
        continue;
      const double yg = y[t] * G[t];
      Gmax2 = std::max(Gmax2, yg);
      if (i < 0)
        continue;
      const double grad_diff = Gmax + yg;
      if (grad_diff > 0.0) {
        double quad = QD[i] + QD[t] - 2.0 * y[i] * y[t] * Q(i, t);
        if (quad <= 0.0)
          quad = kTau;
        const double obj_diff = -(grad_diff * grad_diff) / quad;
        if (obj_diff <= best) {
          best = obj_diff;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || Gmax + Gmax2 < eps || svm.iterations >= cfg.max_iterations)
      break;
    ++svm.iterations;

    const double old_i = alpha[i], old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = QD[i] + QD[j] + 2.0 * Q(i, j);
      if (quad <= 0.0)
        quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = QD[i] + QD[j] - 2.0 * Q(i, j);
      if (quad <= 0.0)
        quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    G += Q.col(i) * (alpha[i] - old_i) + Q.col(j) * (alpha[j] - old_j);

    if (cfg.record_objective)
      svm.objective_trace.push_back(-0.5 * alpha.dot(G - Eigen::VectorXd::Ones(n)));
  }

  // ρ: mean of y·G over free vectors, else the midpoint of the feasible band.
  double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
  int free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (upper(t)) {
      if (y[t] < 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0)
        ub = std::min(ub, yg);
      else
        lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  svm.rho = free > 0 ? sum_free / free : 0.5 * (ub + lb);
  return svm;
}

} // namespace

std::optional<SvmKernel> parse_svm_kernel(std::string_view name) {
  for (const auto &[k, s] : kNames)
    if (s == name)
      return k;
  return std::nullopt;
}

std::string_view to_string(SvmKernel kernel) {
  for (const auto &[k, s] : kNames)
    if (k == kernel)
      return s;
  return "?";
}

double KernelParams::operator()(const Eigen::Ref<const Eigen::RowVectorXd> &a,
                                const Eigen::Ref<const Eigen::RowVectorXd> &b) const {
  switch (kernel) {
  case SvmKernel::Linear:
    return a.dot(b);
  case SvmKernel::Polynomial:
    return std::pow(gamma * a.dot(b) + coef0, degree);
  case SvmKernel::Sigmoid:
    return std::tanh(gamma * a.dot(b) + coef0);
  case SvmKernel::Rbf:
    return std::exp(-gamma * (a - b).squaredNorm());
  }
  throw std::logic_error("unknown SVM kernel");
}

double BinarySvm::decision(const Eigen::Ref<const Eigen::RowVectorXd> &x) const {
  double s = -rho;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i)
    s += dual_coef[i] * kernel(support_vectors.row(i), x);
  return s;
}

BinarySvm train_binary_svm(const FeatureRows &X, const Eigen::VectorXd &y, const SvmConfig &cfg,
                           double gamma) {
  if (X.rows() != y.size() || X.rows() == 0)
    throw std::invalid_argument("SVM training data/label size mismatch");
  if (!(cfg.C > 0.0) || !(cfg.tolerance > 0.0))
    throw std::invalid_argument("SVM needs C > 0 and tolerance > 0");
  if (!X.allFinite())
    throw ClassifierError("SVM input contains non-finite values");
  const KernelParams kp{cfg.kernel, cfg.degree, gamma, cfg.coef0};
  BinarySvm svm = solve(gram(X, X, kp), y, cfg);
  svm.kernel = kp;

  std::vector<Eigen::Index> sv;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (svm.alpha[i] > 0.0)
      sv.push_back(i);
  svm.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
  svm.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t k = 0; k < sv.size(); ++k) {
    svm.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(sv[k]);
    svm.dual_coef[static_cast<Eigen::Index>(k)] = svm.alpha[sv[k]] * y[sv[k]];
  }
  return svm;
}

double kkt_violation(const BinarySvm &svm, const FeatureRows &X) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double yf = svm.y[i] * svm.decision(X.row(i));
    const double a = svm.alpha[i];
    double v;
    if (a <= 0.0)
      v = std::max(0.0, 1.0 - yf);
    else if (a >= svm.C)
      v = std::max(0.0, yf - 1.0);
    else
      v = std::abs(yf - 1.0);
    worst = std::max(worst, v);
  }
  return worst;
}

SvmModel SvmModel::train(const FeatureRows &X, std::span<const int> y, const SvmConfig &cfg) {
  check_training_input(X, y);
  SvmModel m;
  m.classes_ = distinct_classes(y);
  if (m.classes_.size() < 2)
    throw ClassifierError("SVM training needs at least two classes");
  m.dims_ = X.cols();
  m.gamma_ = cfg.gamma.value_or(1.0 / static_cast<double>(X.cols()));

  const std::vector<int> pos = class_positions(y, m.classes_);
  const int nc = static_cast<int>(m.classes_.size());
  for (int a = 0; a < nc; ++a)
    for (int b = a + 1; b < nc; ++b) {
      std::vector<Eigen::Index> rows;
      for (std::size_t i = 0; i < pos.size(); ++i)
        if (pos[i] == a || pos[i] == b)
          rows.push_back(static_cast<Eigen::Index>(i));
      const FeatureRows Xab = X(rows, Eigen::all);
      Eigen::VectorXd yab(static_cast<Eigen::Index>(rows.size()));
      for (std::size_t k = 0; k < rows.size(); ++k)
        yab[static_cast<Eigen::Index>(k)] = pos[static_cast<std::size_t>(rows[k])] == a ? 1.0 : -1.0;
      m.machines_.push_back({a, b, train_binary_svm(Xab, yab, cfg, m.gamma_)});
    }
  return m;
}

std::vector<int> SvmModel::predict(const FeatureRows &X) const {
  check_dimensions(X, dims_);
  std::vector<int> out(static_cast<std::size_t>(X.rows()));
  Eigen::VectorXi votes(static_cast<Eigen::Index>(classes_.size()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    votes.setZero();
    for (const auto &p : machines_)
      ++votes[p.machine.decision(X.row(i)) > 0.0 ? p.first : p.second];
    out[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(argmax_lowest(votes))];
  }
  return out;
}

} // namespace mammo
