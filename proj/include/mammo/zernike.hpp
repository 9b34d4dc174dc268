#pragma once

#include "mammo/image.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <vector>

namespace mammo {

struct ZernikeIndex {
  int n = 0; ///< radial order
  int m = 0; ///< repetition

  constexpr bool valid() const { return n >= 0 && std::abs(m) <= n && (n - std::abs(m)) % 2 == 0; }
  friend constexpr bool operator==(const ZernikeIndex &, const ZernikeIndex &) = default;
};

/// The 32 (n, m) pairs used per component: n = 3..10 ascending, m >= 0
/// ascending within each order with n - m even.
std::vector<ZernikeIndex> standard_moment_indices();

inline constexpr int kMomentsPerComponent = 32;
inline constexpr int kMaxZernikeOrder = 20;

namespace detail {

inline constexpr std::array<double, kMaxZernikeOrder + 1> kFactorial = [] {
  std::array<double, kMaxZernikeOrder + 1> f{};
  f[0] = 1.0;
  for (int i = 1; i <= kMaxZernikeOrder; ++i)
    f[i] = f[i - 1] * i;
  return f;
}();

inline void check_index(int n, int m) {
  if (!ZernikeIndex{n, m}.valid() || n > kMaxZernikeOrder)
    throw std::invalid_argument("invalid Zernike index (" + std::to_string(n) + ", " +
                                std::to_string(m) + ")");
}

} // namespace detail

/// R_{n,m}(p) = sum_s (-1)^s (n-s)! / (s! ((n+|m|)/2-s)! ((n-|m|)/2-s)!) p^(n-2s)
template <typename Scalar> Scalar radial_poly(int n, int m, Scalar p) {
  detail::check_index(n, m);
  const int am = std::abs(m);
  const auto &fact = detail::kFactorial;
  Scalar sum(0);
  for (int s = 0; s <= (n - am) / 2; ++s) {
    const Scalar c = Scalar(fact[n - s] / (fact[s] * fact[(n + am) / 2 - s] * fact[(n - am) / 2 - s]));
    const Scalar term = c * Scalar(std::pow(p, n - 2 * s));
    sum += (s % 2) ? -term : term;
  }
  return sum;
}

/// V_{n,m}(p, θ) = R_{n,m}(p) e^{j m θ}
template <typename Scalar> std::complex<Scalar> basis(int n, int m, Scalar p, Scalar theta) {
  return radial_poly(n, m, p) * std::polar(Scalar(1), Scalar(m) * theta);
}

struct ZernikeMomentSet {
  std::vector<ZernikeIndex> indices;
  Eigen::VectorXd magnitudes;
};

/// Basis sampled on the unit disk inscribed in a rows×cols grid: centre at the
/// image centre, radius min(rows, cols)/2, pixels outside the disk excluded,
/// pixel area (2/min(rows, cols))².
class ZernikeProjector {
public:
  ZernikeProjector(Eigen::Index rows, Eigen::Index cols, std::vector<ZernikeIndex> indices);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const std::vector<ZernikeIndex> &indices() const { return indices_; }

  /// Sampled V_{n,m}: one row per in-disk pixel, one column per index.
  const Eigen::MatrixXcd &sampled_basis() const { return basis_; }
  double pixel_area() const { return pixel_area_; }

  /// Z_{n,m} = (n+1)/π Σ f(x,y) conj(V_{n,m}(p,θ)) ΔA
  Eigen::VectorXcd complex_moments(const Image &component) const;
  ZernikeMomentSet moments(const Image &component) const;

private:
  Eigen::Index rows_, cols_;
  std::vector<ZernikeIndex> indices_;
  std::vector<Eigen::Index> pixels_; // column-major offsets of in-disk pixels
  Eigen::MatrixXcd basis_;
  Eigen::VectorXd scale_; // (n+1)/π · ΔA per index
  double pixel_area_;
};

/// Convenience wrappers building a projector for the component's size.
/// Throw DataError for an empty component.
Eigen::VectorXcd complex_moments(const Image &component, std::span<const ZernikeIndex> indices);
ZernikeMomentSet moments(const Image &component, std::span<const ZernikeIndex> indices);

} // namespace mammo
