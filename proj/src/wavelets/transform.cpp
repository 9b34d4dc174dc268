#include "mammo/wavelets.hpp"

#include <stdexcept>

namespace mammo {

namespace {

// Maps an arbitrary index onto [0, n) under the chosen extension.
Eigen::Index extend(Eigen::Index i, Eigen::Index n, Extension ext) {
  if (ext == Extension::Periodic) {
    i %= n;
    return i < 0 ? i + n : i;
  }
  const Eigen::Index period = 2 * n;
  i %= period;
  if (i < 0)
    i += period;
  return i < n ? i : period - 1 - i;
}

struct FramedFilter {
  const Eigen::VectorXd &taps;
  Eigen::Index offset; // position of taps[0] in the common frame
};

FramedFilter framed(const Eigen::VectorXd &taps, Eigen::Index frame) {
  return {taps, (frame - taps.size()) / 2};
}

// out[k] = sum_m f[m] x[2k - m + L/2], frame-indexed m. Rows are filtered,
// columns decimated to ceil(w/2).
Image filter_decimate_rows(const Image &in, FramedFilter f, Eigen::Index frame, Extension ext) {
  const Eigen::Index h = in.rows(), w = in.cols();
  const Eigen::Index out_w = (w + 1) / 2;
  const Eigen::Index centre = frame / 2;
  Image out = Image::Zero(h, out_w);
  for (Eigen::Index k = 0; k < out_w; ++k)
    for (Eigen::Index t = 0; t < f.taps.size(); ++t) {
      const Eigen::Index m = t + f.offset;
      out.col(k) += f.taps[t] * in.col(extend(2 * k - m + centre, w, ext));
    }
  return out;
}

// Adjoint of filter_decimate_rows under periodic extension.
void upsample_filter_rows(const Image &coeffs, FramedFilter f, Eigen::Index frame, Image &out) {
  const Eigen::Index w = out.cols();
  const Eigen::Index centre = frame / 2;
  for (Eigen::Index k = 0; k < coeffs.cols(); ++k)
    for (Eigen::Index t = 0; t < f.taps.size(); ++t) {
      const Eigen::Index m = t + f.offset;
      out.col(extend(2 * k + m - (frame - 1) + centre, w, Extension::Periodic)) +=
          f.taps[t] * coeffs.col(k);
    }
}

} // namespace

std::vector<ComponentRef> Decomposition::components() const {
  std::vector<ComponentRef> out;
  out.reserve(static_cast<std::size_t>(component_count()));
  for (const auto &lvl : levels) {
    out.push_back({lvl.level, Subband::Horizontal, &lvl.horizontal});
    out.push_back({lvl.level, Subband::Vertical, &lvl.vertical});
    out.push_back({lvl.level, Subband::Diagonal, &lvl.diagonal});
  }
  if (!levels.empty())
    out.push_back({levels.back().level, Subband::Approximation, &levels.back().approximation});
  return out;
}

SubbandSet analyze_level(const Image &img, const WaveletFilterBank &bank, Extension ext) {
  if (img.rows() < 2 || img.cols() < 2)
    throw DataError("wavelet analysis needs at least 2 pixels per axis");
  const Eigen::Index frame = bank.frame_length();
  const FramedFilter lo = framed(bank.analysis_lowpass, frame);
  const FramedFilter hi = framed(bank.analysis_highpass, frame);

  const Image row_lo = filter_decimate_rows(img, lo, frame, ext);
  const Image row_hi = filter_decimate_rows(img, hi, frame, ext);
  const auto columns = [&](const Image &x, FramedFilter f) -> Image {
    return filter_decimate_rows(x.transpose(), f, frame, ext).transpose();
  };
  SubbandSet s;
  s.approximation = columns(row_lo, lo);
  s.horizontal = columns(row_lo, hi);
  s.vertical = columns(row_hi, lo);
  s.diagonal = columns(row_hi, hi);
  return s;
}

Image synthesize_level(const SubbandSet &s, const WaveletFilterBank &bank) {
  const Eigen::Index h = s.approximation.rows(), w = s.approximation.cols();
  for (const Image *b : {&s.horizontal, &s.vertical, &s.diagonal})
    if (b->rows() != h || b->cols() != w)
      throw DataError("subband dimensions do not match");
  const Eigen::Index frame = bank.frame_length();
  const FramedFilter lo = framed(bank.synthesis_lowpass, frame);
  const FramedFilter hi = framed(bank.synthesis_highpass, frame);

  // Columns first (undo the last analysis step), working on transposes.
  const auto columns = [&](const Image &a, const Image &d) -> Image {
    Image out = Image::Zero(a.cols(), 2 * h);
    upsample_filter_rows(a.transpose(), lo, frame, out);
    upsample_filter_rows(d.transpose(), hi, frame, out);
    return out.transpose();
  };
  const Image row_lo = columns(s.approximation, s.horizontal);
  const Image row_hi = columns(s.vertical, s.diagonal);

  Image out = Image::Zero(2 * h, 2 * w);
  upsample_filter_rows(row_lo, lo, frame, out);
  upsample_filter_rows(row_hi, hi, frame, out);
  return out;
}

Decomposition decompose(const Image &img, const WaveletFilterBank &bank, int levels,
                        Extension ext) {
  if (levels < 1)
    throw std::invalid_argument("decomposition needs at least one level");
  Decomposition d;
  d.levels.reserve(static_cast<std::size_t>(levels));
  const Image *source = &img;
  for (int level = 1; level <= levels; ++level) {
    if (source->rows() < 2 || source->cols() < 2)
      throw DataError("image too small for a " + std::to_string(levels) +
                      "-level decomposition");
    SubbandSet s = analyze_level(*source, bank, ext);
    s.level = level;
    d.levels.push_back(std::move(s));
    source = &d.levels.back().approximation;
  }
  return d;
}

} // namespace mammo
