#pragma once

#include "mammo/dataio.hpp"
#include "mammo/morphology.hpp"
#include "mammo/wavelets.hpp"
#include "mammo/zernike.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mammo {

inline constexpr int kWaveletLevels = 4;
inline constexpr int kWaveletComponents = 3 * kWaveletLevels + 1;
inline constexpr int kWaveletZernikeDims = kWaveletComponents * kMomentsPerComponent; // 416
inline constexpr int kSpectrumDims = 7;

enum class SeShape { Square, Cross };
std::optional<SeShape> parse_se_shape(std::string_view name);
std::string_view to_string(SeShape shape);
StructuringElement make_se(SeShape shape);

std::string wavelet_zernike_id(WaveletFamily family);
std::string spectrum_id(SeShape shape);

/// What a feature index means: the wavelet component and the moment order.
struct FeatureSlot {
  int level;
  Subband band;
  ZernikeIndex index;
};

/// Frozen index -> (level, subband, n, m) layout of the 416-dim vector.
std::vector<FeatureSlot> wavelet_zernike_layout();

/// Histogram stretch, 4-level decomposition (symmetric extension), 32 moment
/// magnitudes per component, concatenated in Decomposition::components()
/// order. Projectors are cached per component size; safe to share across
/// threads.
class WaveletZernikeExtractor {
public:
  explicit WaveletZernikeExtractor(WaveletFamily family);

  const std::string &id() const { return id_; }
  /// Throws DataError for images smaller than 16×16.
  Eigen::VectorXd operator()(const Image &img) const;

private:
  const ZernikeProjector &projector(Eigen::Index rows, Eigen::Index cols) const;

  WaveletFamily family_;
  std::string id_;
  std::vector<ZernikeIndex> indices_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<Eigen::Index, Eigen::Index>, ZernikeProjector> cache_;
};

Eigen::VectorXd extract_wavelet_zernike(const Image &img, WaveletFamily family);

/// Seven pattern-spectrum statistics (mean, std, mode, median, kurtosis,
/// min, max) of the histogram-stretched image under a flat 3×3 element.
/// The scale limit defaults to rows + cols, enough for the residual of any
/// stretched image to vanish under either 3×3 element.
Eigen::VectorXd extract_spectrum(const Image &img, SeShape shape, int max_k = 0);

// ---------------------------------------------------------------------------

struct FeatureMatrix {
  std::string extractor_id;
  Eigen::MatrixXd values; ///< one row per sample
  std::vector<ClassLabel> labels;
  std::vector<char> synthetic;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index dims() const { return values.cols(); }

  std::vector<LabeledSample> samples() const;
  static FeatureMatrix from_samples(std::string extractor_id,
                                    const std::vector<LabeledSample> &samples);
};

/// Per-feature linear min-max map fitted on training rows. Values outside
/// the fitted range are clamped; constant features map to 0.
struct MinMaxNormalization {
  Eigen::RowVectorXd minimum;
  Eigen::RowVectorXd maximum;

  Eigen::MatrixXd apply(const Eigen::MatrixXd &rows) const;
};

/// Throws DataError on an empty training set.
MinMaxNormalization fit_normalization(const Eigen::MatrixXd &train_rows);

/// Header `# extractor=<id>;dims=<d>`, column line, then
/// `label,synthetic,v0,...` rows at 17 significant digits.
void save_features(const FeatureMatrix &matrix, const std::filesystem::path &path);
/// Throws DataError on I/O failure, a header/dimension mismatch or no rows.
FeatureMatrix load_features(const std::filesystem::path &path);

} // namespace mammo
