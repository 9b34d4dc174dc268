#pragma once

#include "mammo/image.hpp"

#include <span>
#include <vector>

namespace mammo {

struct ConvergenceError : DataError {
  using DataError::DataError;
};

/// Grayscale structuring element g: S -> [0,1], origin at the centre pixel.
/// A value of 0 means the offset does not take part in the operator.
class StructuringElement {
public:
  /// Throws std::invalid_argument unless dimensions are odd and values in [0,1].
  explicit StructuringElement(Image values);

  static StructuringElement square(int size = 3);
  static StructuringElement cross(int size = 3);
  /// Digital Euclidean disc x² + y² <= radius².
  static StructuringElement disc(int radius);

  const Image &values() const { return values_; }
  int half_height() const { return static_cast<int>(values_.rows() / 2); }
  int half_width() const { return static_cast<int>(values_.cols() / 2); }

  bool is_flat() const;
  /// Flat and every entry equal to 1.
  bool is_full_rectangle() const;
  bool is_symmetric() const;

private:
  Image values_;
};

/// ε_g(f)(u) = min_v max(f(v), 1 - g(u - v)). Reads outside f count as 1.
Image erode(const Image &f, const StructuringElement &g);
/// δ_g(f)(u) = max_v min(f(v), g(u - v)). Reads outside f count as 0.
Image dilate(const Image &f, const StructuringElement &g);

Image opening(const Image &f, const StructuringElement &g);
Image closing(const Image &f, const StructuringElement &g);

/// Opening at scale k: k erosions followed by k dilations by g, i.e. the
/// opening by the k-fold Minkowski sum of g. Scale 0 is the identity.
Image scaled_opening(const Image &f, const StructuringElement &g, int k);

struct PatternSpectrum {
  std::vector<double> residual;   ///< V(k), k = 0..K
  std::vector<double> cumulative; ///< Ξ[k] = 1 - V(k)/V(0), k = 0..K
  std::vector<double> xi;         ///< ξ[k] = Ξ[k+1] - Ξ[k], k = 0..K-1

  int converged_at() const { return static_cast<int>(residual.size()) - 1; }
};

inline constexpr int kDefaultMaxScale = 64;
inline constexpr double kNullResidualTolerance = 1e-9;

/// Granulometry of `f` by openings at growing scale until V(k) < 1e-9·V(0).
/// Throws DataError for a blank image (V(0) = 0) and ConvergenceError if the
/// residual is not null by scale `max_k`.
PatternSpectrum pattern_spectrum(const Image &f, const StructuringElement &g,
                                 int max_k = kDefaultMaxScale);

struct SpectrumStats {
  double mean = 0.0;
  double std_dev = 0.0; ///< population (1/n) standard deviation
  double mode = 0.0;    ///< centre of the fullest of 32 equal-width bins
  double median = 0.0;
  double kurtosis = 0.0; ///< m4 / m2², 0 when the variance vanishes
  double minimum = 0.0;
  double maximum = 0.0;
};

inline constexpr int kModeBins = 32;

SpectrumStats spectrum_stats(std::span<const double> xi);

SpectrumStats spectrum_features(const Image &f, const StructuringElement &g,
                                int max_k = kDefaultMaxScale);

} // namespace mammo
