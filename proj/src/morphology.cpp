#include "mammo/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mammo {

StructuringElement::StructuringElement(Image values) : values_(std::move(values)) {
  if (values_.rows() % 2 == 0 || values_.cols() % 2 == 0)
    throw std::invalid_argument("structuring element dimensions must be odd");
  if (!is_unit_range(values_))
    throw std::invalid_argument("structuring element values must lie in [0,1]");
}

StructuringElement StructuringElement::square(int size) {
  return StructuringElement(Image::Ones(size, size));
}

StructuringElement StructuringElement::cross(int size) {
  Image v = Image::Zero(size, size);
  v.row(size / 2).setOnes();
  v.col(size / 2).setOnes();
  return StructuringElement(std::move(v));
}

StructuringElement StructuringElement::disc(int radius) {
  const int size = 2 * radius + 1;
  Image v(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const int dy = y - radius, dx = x - radius;
      v(y, x) = dx * dx + dy * dy <= radius * radius ? 1.0 : 0.0;
    }
  return StructuringElement(std::move(v));
}

bool StructuringElement::is_flat() const {
  return ((values_ == 0.0) || (values_ == 1.0)).all();
}

bool StructuringElement::is_full_rectangle() const { return (values_ == 1.0).all(); }

bool StructuringElement::is_symmetric() const { return values_.isApprox(values_.reverse(), 0.0); }

namespace {

enum class Extreme { Min, Max };

// Applies `op` over every SE offset d with g(d) > 0, reading f(u - d).
template <Extreme E> Image apply_se(const Image &f, const StructuringElement &se) {
  const Image &g = se.values();
  const Eigen::Index h = f.rows(), w = f.cols();
  const int hh = se.half_height(), hw = se.half_width();
  Image out = Image::Constant(h, w, E == Extreme::Min ? 1.0 : 0.0);

  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double gv = g(i, j);
      if (gv <= 0.0)
        continue;
      const Eigen::Index dy = i - hh, dx = j - hw;
      const Eigen::Index y0 = std::max<Eigen::Index>(0, dy), x0 = std::max<Eigen::Index>(0, dx);
      const Eigen::Index nr = h - std::abs(dy), nc = w - std::abs(dx);
      if (nr <= 0 || nc <= 0)
        continue;
      auto dst = out.block(y0, x0, nr, nc);
      const auto src = f.block(y0 - dy, x0 - dx, nr, nc);
      if constexpr (E == Extreme::Min)
        dst = dst.min(src.max(1.0 - gv));
      else
        dst = dst.max(src.min(gv));
    }
  return out;
}

// Running min/max over [i - r, i + r] clipped to the signal, van Herk /
// Gil-Werman: three passes regardless of r.
template <Extreme E>
void running_extreme(const double *in, double *out, Eigen::Index n, Eigen::Index stride, int r,
                     std::vector<double> &g, std::vector<double> &hbuf) {
  const auto pick = [](double a, double b) {
    if constexpr (E == Extreme::Min)
      return std::min(a, b);
    else
      return std::max(a, b);
  };
  const double identity = E == Extreme::Min ? 1e300 : -1e300;
  const Eigen::Index win = 2 * r + 1;
  const Eigen::Index padded = ((n + 2 * r + win - 1) / win) * win;
  g.assign(static_cast<std::size_t>(padded), identity);
  hbuf.assign(static_cast<std::size_t>(padded), identity);
  for (Eigen::Index i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i + r)] = in[i * stride];
  hbuf = g;
  for (Eigen::Index b = 0; b < padded; b += win) {
    for (Eigen::Index i = b + 1; i < b + win; ++i)
      g[i] = pick(g[i], g[i - 1]);
    for (Eigen::Index i = b + win - 2; i >= b; --i)
      hbuf[i] = pick(hbuf[i], hbuf[i + 1]);
  }
  for (Eigen::Index x = 0; x < n; ++x)
    out[x * stride] = pick(hbuf[x], g[x + win - 1]);
}

// Flat rectangle of half-extents (ry, rx); separable.
template <Extreme E> Image rect_filter(const Image &f, int ry, int rx) {
  const Eigen::Index h = f.rows(), w = f.cols();
  Image tmp(h, w), out(h, w);
  std::vector<double> g, hb;
  // Column-major storage: a column is contiguous, a row has stride h.
  for (Eigen::Index y = 0; y < h; ++y)
    running_extreme<E>(f.data() + y, tmp.data() + y, w, h, rx, g, hb);
  for (Eigen::Index x = 0; x < w; ++x)
    running_extreme<E>(tmp.data() + x * h, out.data() + x * h, h, 1, ry, g, hb);
  return out;
}

// k-fold erosion or dilation.
template <Extreme E> Image iterate(Image f, const StructuringElement &g, int k) {
  if (g.is_full_rectangle())
    return k == 0 ? f : rect_filter<E>(f, k * g.half_height(), k * g.half_width());
  for (int i = 0; i < k; ++i)
    f = apply_se<E>(f, g);
  return f;
}

} // namespace

Image erode(const Image &f, const StructuringElement &g) { return apply_se<Extreme::Min>(f, g); }

Image dilate(const Image &f, const StructuringElement &g) { return apply_se<Extreme::Max>(f, g); }

Image opening(const Image &f, const StructuringElement &g) { return dilate(erode(f, g), g); }

Image closing(const Image &f, const StructuringElement &g) { return erode(dilate(f, g), g); }

Image scaled_opening(const Image &f, const StructuringElement &g, int k) {
  if (k < 0)
    throw std::invalid_argument("opening scale must be >= 0");
  return iterate<Extreme::Max>(iterate<Extreme::Min>(f, g, k), g, k);
}

PatternSpectrum pattern_spectrum(const Image &f, const StructuringElement &g, int max_k) {
  const double v0 = f.sum();
  if (!(v0 > 0.0))
    throw DataError("pattern spectrum of a blank image is undefined (V(0) = 0)");

  PatternSpectrum ps;
  ps.residual.push_back(v0);
  const bool rect = g.is_full_rectangle();
  Image eroded = f;
  bool converged = false;
  for (int k = 1; k <= max_k; ++k) {
    // ε^k is built incrementally; an all-zero erosion has a null opening.
    eroded = rect ? rect_filter<Extreme::Min>(eroded, g.half_height(), g.half_width())
                  : erode(eroded, g);
    const double v =
        eroded.maxCoeff() <= 0.0 ? 0.0 : iterate<Extreme::Max>(eroded, g, k).sum();
    ps.residual.push_back(v);
    if (v < kNullResidualTolerance * v0) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("pattern spectrum did not reach a null residual within " +
                           std::to_string(max_k) + " openings");

  ps.cumulative.reserve(ps.residual.size());
  for (double v : ps.residual)
    ps.cumulative.push_back(1.0 - v / v0);
  for (std::size_t k = 0; k + 1 < ps.cumulative.size(); ++k)
    ps.xi.push_back(ps.cumulative[k + 1] - ps.cumulative[k]);
  return ps;
}

SpectrumStats spectrum_stats(std::span<const double> xi) {
  if (xi.empty())
    throw std::invalid_argument("spectrum statistics need at least one value");
  const Eigen::Map<const Eigen::ArrayXd> v(xi.data(), static_cast<Eigen::Index>(xi.size()));
  const double n = static_cast<double>(v.size());

  SpectrumStats s;
  s.mean = v.mean();
  s.minimum = v.minCoeff();
  s.maximum = v.maxCoeff();
  const Eigen::ArrayXd centred = v - s.mean;
  const double m2 = centred.square().sum() / n;
  const double m4 = centred.square().square().sum() / n;
  s.std_dev = std::sqrt(m2);
  s.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

  std::vector<double> sorted(xi.begin(), xi.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  const double range = s.maximum - s.minimum;
  if (range <= 0.0) {
    s.mode = s.minimum;
  } else {
    const double width = range / kModeBins;
    std::array<int, kModeBins> counts{};
    for (double x : xi)
      ++counts[std::min<std::size_t>(kModeBins - 1, static_cast<std::size_t>((x - s.minimum) / width))];
    const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
    s.mode = std::min(s.maximum, s.minimum + (static_cast<double>(best) + 0.5) * width);
  }
  return s;
}

SpectrumStats spectrum_features(const Image &f, const StructuringElement &g, int max_k) {
  const PatternSpectrum ps = pattern_spectrum(f, g, max_k);
  return spectrum_stats(ps.xi);
}

} // namespace mammo
