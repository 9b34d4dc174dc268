#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mammo {

/// Dense 2D intensity field. Rows index y (height), columns index x (width).
/// Pipeline images live in [0,1]; wavelet subbands carry raw coefficients.
template <typename Scalar>
using ImageT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Image = ImageT<double>;

/// Pixel values are all within [0,1].
template <typename Derived>
bool is_unit_range(const Eigen::ArrayBase<Derived> &img) {
  if (img.size() == 0)
    return true;
  return img.minCoeff() >= 0.0 && img.maxCoeff() <= 1.0;
}

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ClassLabel : int { Normal = 0, Benign = 1, Malignant = 2 };

inline constexpr int kNumClasses = 3;
inline constexpr std::array<ClassLabel, kNumClasses> kAllLabels{
    ClassLabel::Normal, ClassLabel::Benign, ClassLabel::Malignant};

inline constexpr std::string_view to_string(ClassLabel l) {
  switch (l) {
  case ClassLabel::Normal:
    return "normal";
  case ClassLabel::Benign:
    return "benign";
  case ClassLabel::Malignant:
    return "malignant";
  }
  return "?";
}

inline std::optional<ClassLabel> parse_label(std::string_view s) {
  for (ClassLabel l : kAllLabels)
    if (to_string(l) == s)
      return l;
  return std::nullopt;
}

} // namespace mammo
