#pragma once

#include "mammo/image.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace mammo {

enum class WaveletFamily { Biorthogonal3_7, Daubechies8, Symlet8 };

/// Accepts the short names `bior3.7`, `db8`, `sym8`.
std::optional<WaveletFamily> parse_family(std::string_view name);
std::string_view to_string(WaveletFamily family);
inline constexpr std::string_view kFamilyNames = "bior3.7, db8, sym8";

/// Analysis/synthesis quadruple in convolution form. Filters of different
/// lengths are centred in a common frame of `frame_length()` taps.
struct WaveletFilterBank {
  WaveletFamily family;
  Eigen::VectorXd analysis_lowpass;
  Eigen::VectorXd analysis_highpass;
  Eigen::VectorXd synthesis_lowpass;
  Eigen::VectorXd synthesis_highpass;

  bool orthogonal() const { return family != WaveletFamily::Biorthogonal3_7; }
  Eigen::Index frame_length() const;
};

/// Coefficients for `family`, checked against the filter invariants.
const WaveletFilterBank &filter_bank(WaveletFamily family);

/// Throws std::logic_error if a bank breaks the highpass-sum, lowpass-sum or
/// (for orthogonal families) unit-energy and time-reversal invariants.
void validate_filter_bank(const WaveletFilterBank &bank, double tol = 1e-10);

enum class Extension {
  Symmetric, ///< half-sample symmetric; pipeline default
  Periodic,  ///< used where exact reconstruction/energy identities are needed
};

/// One Mallat level. Horizontal (HL) is lowpass along rows and highpass along
/// columns; vertical (LH) the converse; diagonal (HH) highpass on both.
struct SubbandSet {
  Image approximation;
  Image horizontal;
  Image vertical;
  Image diagonal;
  int level = 1;
};

enum class Subband { Horizontal, Vertical, Diagonal, Approximation };

struct ComponentRef {
  int level;
  Subband band;
  const Image *image;
};

struct Decomposition {
  std::vector<SubbandSet> levels; ///< level 1 first; last holds the final LL

  int component_count() const { return 3 * static_cast<int>(levels.size()) + 1; }
  /// Level 1 HL, LH, HH, level 2 HL, LH, HH, ..., last level HL, LH, HH, LL.
  std::vector<ComponentRef> components() const;
};

/// Row filtering with column decimation, then column filtering with row
/// decimation; keeps even-indexed outputs, ⌈N/2⌉ per axis. Throws DataError if
/// either axis is shorter than 2.
SubbandSet analyze_level(const Image &img, const WaveletFilterBank &bank,
                         Extension ext = Extension::Symmetric);

/// Inverse of periodic `analyze_level`: upsample, filter with the synthesis
/// pair, sum. Output is twice the subband size per axis.
Image synthesize_level(const SubbandSet &subbands, const WaveletFilterBank &bank);

/// Recursive analysis of the approximation. Throws DataError if the image is
/// too small for `levels`.
Decomposition decompose(const Image &img, const WaveletFilterBank &bank, int levels,
                        Extension ext = Extension::Symmetric);

} // namespace mammo
