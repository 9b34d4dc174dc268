#include "mammo/dataio.hpp"
#include "mammo/random.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace mammo {

namespace fs = std::filesystem;

namespace {

// Separable box blur with clamped borders.
Image box_blur(const Image &src, int radius) {
  const Eigen::Index h = src.rows(), w = src.cols();
  Image tmp(h, w), out(h, w);
  const double norm = 1.0 / (2 * radius + 1);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) {
      double s = 0.0;
      for (int d = -radius; d <= radius; ++d)
        s += src(y, std::clamp<Eigen::Index>(x + d, 0, w - 1));
      tmp(y, x) = s * norm;
    }
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) {
      double s = 0.0;
      for (int d = -radius; d <= radius; ++d)
        s += tmp(std::clamp<Eigen::Index>(y + d, 0, h - 1), x);
      out(y, x) = s * norm;
    }
  return out;
}

Image noise(int size, Rng &rng) {
  Image n(size, size);
  for (Eigen::Index y = 0; y < size; ++y)
    for (Eigen::Index x = 0; x < size; ++x)
      n(y, x) = rng.uniform();
  return n;
}

enum : std::uint64_t { kTagBackground = 1, kTagMass = 2 };

} // namespace

void add_mass(Image &img, const MassShape &m) {
  for (Eigen::Index y = 0; y < img.rows(); ++y)
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      const double dx = x - m.cx, dy = y - m.cy;
      const double r = std::hypot(dx, dy);
      const double theta = std::atan2(dy, dx);
      const double boundary =
          m.radius * (1.0 + m.spike_amplitude * std::sin(m.spikes * theta + m.phase));
      const double inside = 1.0 / (1.0 + std::exp(-(boundary - r) / m.edge_width));
      img(y, x) += m.amplitude * inside;
    }
}

Image phantom_background(int size, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, kTagBackground);
  const Image fine = box_blur(noise(size, rng), 1);
  const Image coarse = box_blur(box_blur(noise(size, rng), std::max(1, size / 16)),
                                std::max(1, size / 16));
  Image bg = 0.5 * fine + 0.5 * coarse;
  const double lo = bg.minCoeff(), hi = bg.maxCoeff();
  return 0.15 + 0.30 * (bg - lo) / std::max(hi - lo, 1e-12);
}

Image phantom_image(ClassLabel label, int size, std::uint64_t seed) {
  Image img = phantom_background(size, seed);
  if (label == ClassLabel::Normal)
    return img;

  Rng rng = Rng::stream(seed, kTagMass);
  MassShape m;
  const double jitter = size / 16.0;
  m.cx = (size - 1) / 2.0 + rng.uniform(-jitter, jitter);
  m.cy = (size - 1) / 2.0 + rng.uniform(-jitter, jitter);
  m.amplitude = rng.uniform(0.35, 0.5);
  m.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  if (label == ClassLabel::Benign) {
    m.radius = size * rng.uniform(0.12, 0.20);
    m.edge_width = size / 64.0;
  } else {
    m.radius = size * rng.uniform(0.10, 0.16);
    m.spikes = 5 + static_cast<int>(rng.below(5));
    m.spike_amplitude = rng.uniform(0.35, 0.55);
    m.edge_width = size / 256.0;
  }
  add_mass(img, m);
  return img.min(1.0).max(0.0);
}

DatasetManifest generate_phantom_dataset(const PhantomConfig &config, const fs::path &out_dir) {
  if (config.normals < 1 || config.benign < 1 || config.malignant < 1)
    throw std::invalid_argument("phantom counts must be >= 1");
  if (config.size < 32)
    throw std::invalid_argument("phantom size must be >= 32");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw DataError("cannot create output directory " + out_dir.string());

  DatasetManifest manifest;
  manifest.root = out_dir;
  const std::pair<ClassLabel, int> plan[] = {{ClassLabel::Normal, config.normals},
                                             {ClassLabel::Benign, config.benign},
                                             {ClassLabel::Malignant, config.malignant}};
  for (const auto &[label, count] : plan) {
    for (int i = 0; i < count; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%04d.pgm", std::string(to_string(label)).c_str(), i);
      const std::uint64_t image_seed =
          Rng::stream(config.seed, (static_cast<std::uint64_t>(label) << 32) | static_cast<unsigned>(i))
              .next();
      save_pgm(phantom_image(label, config.size, image_seed), out_dir / name);
      manifest.entries.push_back({name, label});
    }
  }
  save_manifest(manifest, out_dir / "manifest.csv");
  return manifest;
}

} // namespace mammo
