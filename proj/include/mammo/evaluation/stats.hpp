#pragma once

#include <span>

namespace mammo {

inline constexpr double kSignificance = 0.05;

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0; ///< two-tailed
  int hypothesis = 0;   ///< 1 iff p_value < 0.05
};

/// Two-sample two-tailed t-test, pooled variance by default or Welch's
/// unequal-variance form. Each sample needs at least two values. Zero
/// variance in both samples gives p = 1 for equal means and p = 0 otherwise.
TTestResult t_test(std::span<const double> a, std::span<const double> b, bool welch = false);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// Student's t cumulative distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> v);

} // namespace mammo
