#pragma once

#include "mammo/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mammo {

// ---------------------------------------------------------------------------
// Raster I/O

/// Reads binary PGM (P5, maxval up to 65535) or grayscale PNG (8/16 bit).
/// Intensities are scaled linearly from the integer range into [0,1].
/// Throws DataError on unreadable, malformed, colour or empty images.
Image load_image(const std::filesystem::path &path);

/// Writes a binary PGM. `bit_depth` is 8 or 16; values are clamped to [0,1]
/// and rounded to the nearest integer level.
void save_pgm(const Image &img, const std::filesystem::path &path,
              int bit_depth = 8);

/// Linear stretch to full [0,1] range. Constant images map to zeros.
template <typename Derived>
Image normalize_histogram(const Eigen::ArrayBase<Derived> &img) {
  const double lo = img.minCoeff();
  const double hi = img.maxCoeff();
  if (!(hi > lo))
    return Image::Zero(img.rows(), img.cols());
  return (img.derived().template cast<double>() - lo) / (hi - lo);
}

// ---------------------------------------------------------------------------
// Manifest

struct ManifestEntry {
  std::string image_path; // relative to the manifest root
  ClassLabel label;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry &e) const {
    return root / e.image_path;
  }
};

/// CSV with header `path,label`. Root is the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path &csv);
void save_manifest(const DatasetManifest &manifest,
                   const std::filesystem::path &csv);

// ---------------------------------------------------------------------------
// Phantom generator

struct PhantomConfig {
  int normals = 10;
  int benign = 10;
  int malignant = 10;
  int size = 128;
  std::uint64_t seed = 1;
};

/// Bright mass with radius r(θ) = radius·(1 + spike_amplitude·sin(spikes·θ + phase))
/// and a logistic edge of width `edge_width` pixels. spikes = 0 gives a disk.
struct MassShape {
  double cx = 0.0, cy = 0.0;
  double radius = 10.0;
  int spikes = 0;
  double spike_amplitude = 0.0;
  double phase = 0.0;
  double edge_width = 1.0;
  double amplitude = 0.5;
};

/// Adds the mass to `img` (no clamping).
void add_mass(Image &img, const MassShape &mass);

/// Single-image generators, exposed for tests. Each is a pure function of
/// (size, seed).
Image phantom_background(int size, std::uint64_t seed);
Image phantom_image(ClassLabel label, int size, std::uint64_t seed);

/// Writes `<label>_<idx>.pgm` files plus `manifest.csv` under `out_dir`.
DatasetManifest generate_phantom_dataset(const PhantomConfig &config,
                                         const std::filesystem::path &out_dir);

// ---------------------------------------------------------------------------
// Class balancing

struct LabeledSample {
  Eigen::VectorXd features;
  ClassLabel label;
  bool synthetic = false;
};

/// Raises every class to the majority count. Each synthetic sample is a
/// convex combination of all real samples of its class, with weights drawn
/// uniform on [0,1] and normalised to sum to one (fresh weights per sample).
/// Real samples keep their order; synthetic ones are appended grouped by
/// class. Throws DataError for an empty class or a class needing synthesis
/// with fewer than two real samples.
std::vector<LabeledSample> balance_dataset(const std::vector<LabeledSample> &samples,
                                           std::uint64_t seed);

} // namespace mammo
