#include "mammo/evaluation/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mammo {

namespace {

// Continued fraction for the incomplete beta, evaluated by the modified
// Lentz method.
double beta_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16, kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny)
    d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps)
      return h;
  }
  return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("incomplete_beta needs a, b > 0 and x in [0, 1]");
  if (x == 0.0 || x == 1.0)
    return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_front) * beta_fraction(a, b, x) / a;
  return 1.0 - std::exp(log_front) * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0))
    throw std::invalid_argument("student_t_cdf needs df > 0");
  if (std::isinf(t))
    return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

double mean(std::span<const double> v) {
  if (v.empty())
    return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2)
    return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v)
    s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, bool welch) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("t_test needs at least two values per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = mean(a), mb = mean(b);
  const double va = std::pow(sample_std(a), 2), vb = std::pow(sample_std(b), 2);

  TTestResult r;
  double se;
  if (welch) {
    se = std::sqrt(va / na + vb / nb);
    const double qa = va / na, qb = vb / nb;
    r.degrees_of_freedom = se > 0.0 ? std::pow(qa + qb, 2) / (qa * qa / (na - 1) + qb * qb / (nb - 1))
                                    : na + nb - 2.0;
  } else {
    const double pooled = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2.0);
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    r.degrees_of_freedom = na + nb - 2.0;
  }

  if (se == 0.0) {
    if (ma == mb) {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_statistic = ma > mb ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
  } else {
    r.t_statistic = (ma - mb) / se;
    const double df = r.degrees_of_freedom;
    r.p_value = incomplete_beta(0.5 * df, 0.5, df / (df + r.t_statistic * r.t_statistic));
  }
  r.hypothesis = r.p_value < kSignificance ? 1 : 0;
  return r;
}

} // namespace mammo
