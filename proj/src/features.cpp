#include "mammo/features.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mammo {

namespace fs = std::filesystem;

std::optional<SeShape> parse_se_shape(std::string_view name) {
  if (name == "square")
    return SeShape::Square;
  if (name == "cross")
    return SeShape::Cross;
  return std::nullopt;
}

std::string_view to_string(SeShape shape) { return shape == SeShape::Square ? "square" : "cross"; }

StructuringElement make_se(SeShape shape) {
  return shape == SeShape::Square ? StructuringElement::square(3) : StructuringElement::cross(3);
}

std::string wavelet_zernike_id(WaveletFamily family) {
  return "wavelet-zernike:" + std::string(to_string(family)) + ":L" + std::to_string(kWaveletLevels);
}

std::string spectrum_id(SeShape shape) { return "spectrum:" + std::string(to_string(shape)); }

std::vector<FeatureSlot> wavelet_zernike_layout() {
  std::vector<FeatureSlot> layout;
  const auto indices = standard_moment_indices();
  const auto push_component = [&](int level, Subband band) {
    for (const auto &idx : indices)
      layout.push_back({level, band, idx});
  };
  for (int level = 1; level <= kWaveletLevels; ++level)
    for (Subband band : {Subband::Horizontal, Subband::Vertical, Subband::Diagonal})
      push_component(level, band);
  push_component(kWaveletLevels, Subband::Approximation);
  return layout;
}

WaveletZernikeExtractor::WaveletZernikeExtractor(WaveletFamily family)
    : family_(family), id_(wavelet_zernike_id(family)), indices_(standard_moment_indices()) {}

const ZernikeProjector &WaveletZernikeExtractor::projector(Eigen::Index rows,
                                                           Eigen::Index cols) const {
  std::lock_guard lock(mutex_);
  auto it = cache_.find({rows, cols});
  if (it == cache_.end())
    it = cache_.try_emplace({rows, cols}, rows, cols, indices_).first;
  return it->second;
}

Eigen::VectorXd WaveletZernikeExtractor::operator()(const Image &img) const {
  constexpr int min_side = 1 << kWaveletLevels;
  if (img.rows() < min_side || img.cols() < min_side)
    throw DataError("wavelet-Zernike extraction needs at least 16x16 pixels");
  const Decomposition d =
      decompose(normalize_histogram(img), filter_bank(family_), kWaveletLevels, Extension::Symmetric);

  Eigen::VectorXd out(kWaveletZernikeDims);
  Eigen::Index offset = 0;
  for (const ComponentRef &c : d.components()) {
    const Image &comp = *c.image;
    out.segment(offset, kMomentsPerComponent) = projector(comp.rows(), comp.cols()).moments(comp).magnitudes;
    offset += kMomentsPerComponent;
  }
  return out;
}

Eigen::VectorXd extract_wavelet_zernike(const Image &img, WaveletFamily family) {
  return WaveletZernikeExtractor(family)(img);
}

Eigen::VectorXd extract_spectrum(const Image &img, SeShape shape, int max_k) {
  if (max_k <= 0)
    max_k = static_cast<int>(img.rows() + img.cols());
  const SpectrumStats s = spectrum_features(normalize_histogram(img), make_se(shape), max_k);
  Eigen::VectorXd v(kSpectrumDims);
  v << s.mean, s.std_dev, s.mode, s.median, s.kurtosis, s.minimum, s.maximum;
  return v;
}

// ---------------------------------------------------------------------------

std::vector<LabeledSample> FeatureMatrix::samples() const {
  std::vector<LabeledSample> out;
  out.reserve(static_cast<std::size_t>(rows()));
  for (Eigen::Index i = 0; i < rows(); ++i)
    out.push_back({values.row(i).transpose(), labels[static_cast<std::size_t>(i)],
                   synthetic[static_cast<std::size_t>(i)] != 0});
  return out;
}

FeatureMatrix FeatureMatrix::from_samples(std::string extractor_id,
                                          const std::vector<LabeledSample> &samples) {
  FeatureMatrix m;
  m.extractor_id = std::move(extractor_id);
  const Eigen::Index dims = samples.empty() ? 0 : samples.front().features.size();
  m.values.resize(static_cast<Eigen::Index>(samples.size()), dims);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != dims)
      throw DataError("inconsistent feature dimensions");
    m.values.row(static_cast<Eigen::Index>(i)) = samples[i].features.transpose();
    m.labels.push_back(samples[i].label);
    m.synthetic.push_back(samples[i].synthetic ? 1 : 0);
  }
  return m;
}

Eigen::MatrixXd MinMaxNormalization::apply(const Eigen::MatrixXd &rows) const {
  if (rows.cols() != minimum.size())
    throw std::invalid_argument("normalization dimension mismatch");
  Eigen::MatrixXd out(rows.rows(), rows.cols());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const double range = maximum[j] - minimum[j];
    if (range > 0.0)
      out.col(j) = ((rows.col(j).array() - minimum[j]) / range).min(1.0).max(0.0).matrix();
    else
      out.col(j).setZero();
  }
  return out;
}

MinMaxNormalization fit_normalization(const Eigen::MatrixXd &train_rows) {
  if (train_rows.rows() == 0)
    throw DataError("cannot fit normalization on an empty training set");
  return {train_rows.colwise().minCoeff(), train_rows.colwise().maxCoeff()};
}

void save_features(const FeatureMatrix &m, const fs::path &path) {
  std::ofstream out(path);
  if (!out)
    throw DataError("cannot write " + path.string());
  out << "# extractor=" << m.extractor_id << ";dims=" << m.dims() << '\n';
  out << "label,synthetic";
  for (Eigen::Index j = 0; j < m.dims(); ++j)
    out << ",v" << j;
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << to_string(m.labels[static_cast<std::size_t>(i)]) << ','
        << (m.synthetic[static_cast<std::size_t>(i)] ? 1 : 0);
    for (Eigen::Index j = 0; j < m.dims(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m.values(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out)
    throw DataError("write failed: " + path.string());
}

FeatureMatrix load_features(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open " + path.string());
  const auto where = [&](int line) { return path.string() + ":" + std::to_string(line) + ": "; };

  std::string line;
  if (!std::getline(in, line) || line.rfind("# extractor=", 0) != 0)
    throw DataError(where(1) + "missing '# extractor=<id>;dims=<d>' header");
  const auto semi = line.find(";dims=");
  if (semi == std::string::npos)
    throw DataError(where(1) + "header lacks dims");
  FeatureMatrix m;
  m.extractor_id = line.substr(12, semi - 12);
  char *end = nullptr;
  const long dims = std::strtol(line.c_str() + semi + 6, &end, 10);
  if (dims <= 0 || *end != '\0')
    throw DataError(where(1) + "bad dims value");

  if (!std::getline(in, line) || line.rfind("label,synthetic", 0) != 0)
    throw DataError(where(2) + "missing column line");

  std::vector<double> values;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    const auto label = parse_label(cell);
    if (!label)
      throw DataError(where(lineno) + "unknown label '" + cell + "'");
    std::getline(ss, cell, ',');
    if (cell != "0" && cell != "1")
      throw DataError(where(lineno) + "synthetic flag must be 0 or 1");
    m.labels.push_back(*label);
    m.synthetic.push_back(cell == "1" ? 1 : 0);
    long count = 0;
    while (std::getline(ss, cell, ',')) {
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw DataError(where(lineno) + "bad number '" + cell + "'");
      values.push_back(v);
      ++count;
    }
    if (count != dims)
      throw DataError(where(lineno) + "row has " + std::to_string(count) + " values, header says " +
                      std::to_string(dims));
  }
  if (m.labels.empty())
    throw DataError(path.string() + ": no feature rows");
  const auto n = static_cast<Eigen::Index>(m.labels.size());
  m.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, dims);
  return m;
}

} // namespace mammo
