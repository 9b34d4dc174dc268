// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check is self-contained and seeded.

#include "mammo/classifiers/pseudoinverse.hpp"
#include "mammo/dataio.hpp"
#include "mammo/evaluation/report.hpp"
#include "mammo/random.hpp"
#include "mammo/wavelets.hpp"
#include "mammo/zernike.hpp"

#include "support.hpp"
#include "zernike_oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

using namespace mammo;
using mammo::testing::random_image;
using mammo::testing::TempDir;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  /// Records a failed condition; returns `ok` so calls can be chained.
  bool expect(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
    return ok;
  }
};

int hardware_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Loads every manifest image and extracts one feature row per image on all cores.
FeatureMatrix extract_all(const DatasetManifest &manifest, const std::string &id,
                          const std::function<Eigen::VectorXd(const Image &)> &extract) {
  const std::size_t n = manifest.entries.size();
  std::vector<Eigen::VectorXd> rows(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < hardware_jobs(); ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;)
        rows[i] = extract(load_image(manifest.resolve(manifest.entries[i])));
    });
  for (auto &t : pool)
    t.join();
  FeatureMatrix m;
  m.extractor_id = id;
  m.values.resize(static_cast<Eigen::Index>(n), rows.front().size());
  for (std::size_t i = 0; i < n; ++i) {
    m.values.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    m.labels.push_back(manifest.entries[i].label);
    m.synthetic.push_back(0);
  }
  return m;
}

FeatureMatrix gaussian_matrix(int per_class, int dims, double separation, std::uint64_t seed) {
  Rng rng(seed);
  FeatureMatrix m;
  m.extractor_id = "wavelet-zernike:sym8:L4";
  m.values.resize(3 * per_class, dims);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < per_class; ++i) {
      for (int d = 0; d < dims; ++d)
        m.values(c * per_class + i, d) = rng.normal() + (d % 3 == c ? separation : 0.0);
      m.labels.push_back(static_cast<ClassLabel>(c));
      m.synthetic.push_back(0);
    }
  return m;
}

std::string results_section(const RunReport &r) {
  return nlohmann::json::parse(report_to_string(r, ReportFormat::Json)).at("results").dump();
}

// ---------------------------------------------------------------------------

void pipeline_arithmetic(Outcome &o) {
  const Image img = phantom_image(ClassLabel::Malignant, 128, 1);
  const Decomposition d = decompose(img, filter_bank(WaveletFamily::Symlet8), kWaveletLevels);
  o.expect(d.components().size() == 13, "13 components");
  const WaveletZernikeExtractor extractor(WaveletFamily::Symlet8);
  double worst = 0.0;
  Eigen::Index dims = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Image roi = phantom_image(static_cast<ClassLabel>(seed % 3), 128, seed);
    const auto t0 = std::chrono::steady_clock::now();
    dims = extractor(roi).size();
    worst = std::max(worst, seconds_since(t0));
  }
  o.expect(dims == 416, "416 features");
  o.expect(worst < 1.0, "under 1 s per image");
  o.detail << d.components().size() << " components, " << dims << " features, slowest image "
           << worst << " s";
}

void balancing(Outcome &o) {
  Rng rng(5);
  std::vector<LabeledSample> samples;
  const std::map<ClassLabel, int> counts{
      {ClassLabel::Normal, 233}, {ClassLabel::Benign, 72}, {ClassLabel::Malignant, 83}};
  for (const auto &[label, n] : counts)
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd v(8);
      for (Eigen::Index k = 0; k < v.size(); ++k)
        v[k] = rng.uniform(0.0, 1.0);
      samples.push_back({v, label, false});
    }
  const auto balanced = balance_dataset(samples, 1);
  std::map<ClassLabel, int> per_class, synthetic;
  for (const auto &s : balanced) {
    ++per_class[s.label];
    synthetic[s.label] += s.synthetic;
  }
  o.expect(balanced.size() == 699, "699 samples");
  for (const auto &[label, n] : per_class)
    o.expect(n == 233, "233 per class");
  o.expect(synthetic[ClassLabel::Normal] == 0, "no synthetic normals");
  o.expect(synthetic[ClassLabel::Benign] == 161, "161 synthetic benign");
  o.expect(synthetic[ClassLabel::Malignant] == 150, "150 synthetic malignant");
  o.detail << balanced.size() << " samples, synthetic " << synthetic[ClassLabel::Benign] << " + "
           << synthetic[ClassLabel::Malignant];
}

void fold_sizes(Outcome &o) {
  const FoldPlan plan = make_fold_plan(699, 10, 1);
  std::vector<int> expected(9, 69);
  expected.push_back(78);
  o.expect(plan.sizes() == expected, "fold sizes {69 x 9, 78}");
  o.detail << "sizes";
  for (int s : plan.sizes())
    o.detail << ' ' << s;
}

void protocol_arithmetic(Outcome &o) {
  const FeatureMatrix m = gaussian_matrix(10, 4, 3.0, 2);
  TempDir dir("acceptance-protocol");
  const auto emitted_rows = [&](const ClassifierConfig &cfg, int seeds) {
    ProtocolOptions opts;
    opts.seeds = seeds;
    opts.jobs = hardware_jobs();
    const auto path = dir / "report.csv";
    emit_report(run_protocol(m, cfg, opts), path, ReportFormat::Csv);
    return static_cast<long>(load_report(path).runs.size());
  };
  SvmConfig svm;
  MlpConfig mlp;
  mlp.max_epochs = 3;
  const ElmConfig elm{10, ElmKernel::Sigmoid, 1};
  const long s = emitted_rows(svm, 30), k = emitted_rows(KnnConfig{}, 30),
             t = emitted_rows(TreeConfig{}, 30), e = emitted_rows(elm, 3), p = emitted_rows(mlp, 3);
  o.expect(s == 300 && k == 300 && t == 300, "300 runs for svm, knn and tree at 30 seeds");
  o.expect(e == 3 * 3 * 10 && e == expected_runs(elm, 3), "ELM seeds x seeds x folds at 3 seeds");
  o.expect(p == 3 * 3 * 3 && p == expected_runs(mlp, 3), "MLP archs x seeds x seeds at 3 seeds");
  o.expect(expected_runs(elm, 30) == 9000, "9000 ELM runs at 30 seeds");
  o.expect(expected_runs(mlp, 30) == 2700, "2700 MLP runs at 30 seeds");
  o.detail << "svm " << s << ", knn " << k << ", tree " << t << ", elm(3) " << e << ", mlp(3) " << p
           << "; at 30 seeds elm " << expected_runs(elm, 30) << ", mlp " << expected_runs(mlp, 30);
}

void impulse_spectrum(Outcome &o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto disk = [](int size, double c, double r) {
    Image img = Image::Zero(size, size);
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x)
        if ((y - c) * (y - c) + (x - c) * (x - c) <= r * r)
          img(y, x) = 1.0;
    return img;
  };
  const auto share = [](const PatternSpectrum &ps) {
    return *std::max_element(ps.xi.begin(), ps.xi.end()) /
           std::accumulate(ps.xi.begin(), ps.xi.end(), 0.0);
  };
  double lowest = 1.0;
  for (int r : {3, 6}) {
    const StructuringElement se = StructuringElement::disc(r);
    const int size = 8 * r + 8;
    const double c = size / 2 - 0.5;
    lowest = std::min({lowest, share(pattern_spectrum(disk(size, c, r), se)),
                       share(pattern_spectrum(disk(size, c, 2 * r), se))});
  }
  const double elapsed = seconds_since(t0);
  o.expect(lowest >= 0.99, "impulse share >= 0.99");
  o.expect(elapsed < 5.0, "under 5 s");
  o.detail << "lowest single-bin share " << lowest << ", " << elapsed << " s";
}

void wavelet_reconstruction(Outcome &o) {
  double worst_pr = 0.0, worst_energy = 0.0;
  for (WaveletFamily f :
       {WaveletFamily::Biorthogonal3_7, WaveletFamily::Daubechies8, WaveletFamily::Symlet8})
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const WaveletFilterBank &b = filter_bank(f);
      const Image x = random_image(32, 32, seed);
      const SubbandSet s = analyze_level(x, b, Extension::Periodic);
      worst_pr = std::max(worst_pr, (synthesize_level(s, b) - x).abs().maxCoeff());
      if (b.orthogonal()) {
        const double e = x.square().sum();
        const double es = s.approximation.square().sum() + s.horizontal.square().sum() +
                          s.vertical.square().sum() + s.diagonal.square().sum();
        worst_energy = std::max(worst_energy, std::abs(es - e) / e);
      }
    }
  o.expect(worst_pr < 1e-8, "reconstruction error < 1e-8");
  o.expect(worst_energy < 1e-6, "energy error < 1e-6");
  o.detail << "max reconstruction error " << worst_pr << ", max relative energy error "
           << worst_energy;
}

void zernike_suite(Outcome &o) {
  const auto idx = standard_moment_indices();
  std::map<int, int> per_order;
  for (const auto &i : idx)
    ++per_order[i.n];
  const std::map<int, int> counts{{3, 2}, {4, 3}, {5, 3}, {6, 4}, {7, 4}, {8, 5}, {9, 5}, {10, 6}};
  o.expect(idx.size() == 32 && per_order == counts, "32 indices with the per-order counts");

  double radial = 0.0;
  for (const auto &e : testing::kExpanded)
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
      radial = std::max(radial, std::abs(radial_poly(e.n, e.m, p) - testing::horner(e.coefficients, p)));
  o.expect(radial < 1e-10, "radial polynomials within 1e-10");

  const auto rotate90 = [](const Image &img) {
    const Eigen::Index n = img.rows();
    Image out(n, n);
    for (Eigen::Index y = 0; y < n; ++y)
      for (Eigen::Index x = 0; x < n; ++x)
        out(y, x) = img(x, n - 1 - y);
    return out;
  };
  double rotation = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (ClassLabel label : kAllLabels) {
      const Image img = phantom_image(label, 64, seed);
      const Eigen::VectorXd a = moments(img, idx).magnitudes;
      const Eigen::VectorXd b = moments(rotate90(img), idx).magnitudes;
      for (Eigen::Index i = 0; i < a.size(); ++i)
        rotation = std::max(rotation, std::abs(a[i] - b[i]) / std::max({a[i], b[i], 1e-300}));
    }
  o.expect(rotation <= 0.02, "quarter-turn invariance within 2%");

  // Arbitrary angles: a centred spiculated mass turned by its phase.
  const auto rendered = [](const MassShape &shape) {
    Image img = Image::Zero(64, 64);
    add_mass(img, shape);
    return img;
  };
  double turned = 0.0;
  for (int spikes : {3, 5, 7}) {
    const MassShape base{31.5, 31.5, 14.0, spikes, 0.3, 0.0, 1.5, 0.8};
    const Eigen::VectorXd ref = moments(rendered(base), idx).magnitudes;
    for (double angle : {0.2, 0.7, 1.9}) {
      MassShape shape = base;
      shape.phase = spikes * angle;
      turned = std::max(turned, (moments(rendered(shape), idx).magnitudes - ref).norm() / ref.norm());
    }
  }
  o.expect(turned <= 0.02, "arbitrary-angle invariance within 2%");

  const ZernikeProjector proj(256, 256, idx);
  const Eigen::MatrixXcd gram = proj.sampled_basis().adjoint() * proj.sampled_basis();
  double off = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j)
      if (i != j)
        off = std::max(off, std::abs(gram(i, j)) / std::sqrt(std::abs(gram(i, i) * gram(j, j))));
  o.expect(off < 1e-2, "Gram off-diagonals < 1e-2");
  o.detail << "radial error " << radial << ", rotation change " << 100.0 * rotation
           << "%, arbitrary-angle change " << 100.0 * turned << "%, Gram off-diagonal " << off;
}

void classifier_oracles(Outcome &o) {
  Rng rng(9);
  const auto random_matrix = [&](Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i)
      m(i) = rng.uniform(-1.0, 1.0);
    return m;
  };

  // Pseudoinverse of an ELM hidden layer.
  const FeatureMatrix blobs = gaussian_matrix(30, 6, 2.0, 4);
  ClassIds y;
  for (ClassLabel l : blobs.labels)
    y.push_back(static_cast<int>(l));
  const ElmModel elm = ElmModel::train(blobs.values, y, ElmConfig{40, ElmKernel::Sigmoid, 1});
  const Eigen::MatrixXd H = elm.hidden(blobs.values), P = pseudoinverse(H);
  const double penrose = std::max({(H * P * H - H).cwiseAbs().maxCoeff(),
                                   (P * H * P - P).cwiseAbs().maxCoeff(),
                                   ((H * P).transpose() - H * P).cwiseAbs().maxCoeff(),
                                   ((P * H).transpose() - P * H).cwiseAbs().maxCoeff()});
  o.expect(penrose < 1e-8, "Penrose conditions");

  FeatureRows two(2, 1);
  two << -1.0, 1.0;
  SvmConfig hard;
  hard.C = 1000.0;
  const BinarySvm pair = train_binary_svm(two, Eigen::Vector2d(1.0, -1.0), hard, 1.0);
  const double closed = std::max({std::abs(pair.alpha[0] - 0.5), std::abs(pair.alpha[1] - 0.5),
                                  std::abs(pair.rho)});
  o.expect(closed < 1e-9, "two-point closed form");

  double kkt = 0.0;
  for (SvmKernel k : {SvmKernel::Linear, SvmKernel::Polynomial, SvmKernel::Rbf, SvmKernel::Sigmoid}) {
    SvmConfig cfg;
    cfg.kernel = k;
    const SvmModel m = SvmModel::train(blobs.values, y, cfg);
    for (const auto &mp : m.machines()) {
      std::vector<Eigen::Index> rows;
      for (Eigen::Index i = 0; i < blobs.rows(); ++i)
        if (y[static_cast<std::size_t>(i)] == mp.first || y[static_cast<std::size_t>(i)] == mp.second)
          rows.push_back(i);
      kkt = std::max(kkt, kkt_violation(mp.machine, blobs.values(rows, Eigen::all)));
    }
  }
  o.expect(kkt <= SvmConfig{}.tolerance, "KKT residual within tolerance");

  const FeatureRows points = random_matrix(500, 5), queries = random_matrix(200, 5);
  const KdTree tree(points);
  int mismatches = 0;
  for (Eigen::Index q = 0; q < queries.rows(); ++q) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < points.rows(); ++i)
      if (squared_distance(points.row(i), queries.row(q)) <
          squared_distance(points.row(best), queries.row(q)))
        best = i;
    mismatches += tree.nearest(queries.row(q)) != best;
  }
  o.expect(mismatches == 0, "kd-tree equals linear scan");

  const FeatureMatrix noisy = gaussian_matrix(40, 5, 0.5, 7);
  ClassIds ny;
  for (ClassLabel l : noisy.labels)
    ny.push_back(static_cast<int>(l));
  const double tree_acc = accuracy(ny, TreeModel::train(noisy.values, ny).predict(noisy.values));
  o.expect(tree_acc == 100.0, "tree fits distinct points");

  const FeatureRows X = random_matrix(5, 3);
  const std::vector<int> classes{0, 1, 2};
  const Eigen::MatrixXd T = one_hot(ClassIds{0, 1, 2, 1, 0}, classes);
  const MlpLayout layout{{3, 6, 5, 3}};
  const Eigen::VectorXd theta = mlp_initial_parameters(layout, 4);
  Eigen::VectorXd grad;
  mlp_loss(layout, theta, X, T, &grad);
  double fd_rel = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd up = theta, down = theta;
    up[i] += 1e-6;
    down[i] -= 1e-6;
    const double fd = (mlp_loss(layout, up, X, T) - mlp_loss(layout, down, X, T)) / 2e-6;
    const double scale = std::max(std::abs(grad[i]), std::abs(fd));
    if (scale > 1e-8)
      fd_rel = std::max(fd_rel, std::abs(grad[i] - fd) / scale);
  }
  o.expect(fd_rel < 1e-4, "MLP gradient within 1e-4 relative");
  o.detail << "Penrose " << penrose << ", two-point " << closed << ", KKT " << kkt
           << ", kd-tree mismatches " << mismatches << ", tree train " << tree_acc
           << "%, gradient rel " << fd_rel;
}

void statistics(Outcome &o) {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
  const TTestResult r = t_test(a, b);
  o.expect(std::abs(r.t_statistic + 1.0) < 1e-4, "t = -1");
  o.expect(r.degrees_of_freedom == 8.0, "df = 8");
  o.expect(std::abs(r.p_value - 0.3466) < 1e-4, "p = 0.3466");
  const TTestResult same = t_test(a, a);
  o.expect(same.p_value == 1.0, "identical samples give p = 1");
  o.detail << "t " << r.t_statistic << ", df " << r.degrees_of_freedom << ", p " << r.p_value
           << ", identical p " << same.p_value;
}

struct PhantomFeatures {
  FeatureMatrix wavelet, spectrum;
};

void phantom_benchmark(Outcome &o, PhantomFeatures &features) {
  const auto t0 = std::chrono::steady_clock::now();
  TempDir dir("acceptance-phantoms");
  PhantomConfig cfg;
  cfg.normals = cfg.benign = cfg.malignant = 60;
  cfg.seed = 1;
  cfg.size = 128;
  const DatasetManifest manifest = generate_phantom_dataset(cfg, dir.path());
  const WaveletZernikeExtractor wz(WaveletFamily::Symlet8);
  features.wavelet = extract_all(manifest, wz.id(), [&](const Image &img) { return wz(img); });
  features.spectrum = extract_all(manifest, spectrum_id(SeShape::Square), [](const Image &img) {
    return extract_spectrum(img, SeShape::Square);
  });

  ProtocolOptions opts;
  opts.seeds = 5;
  opts.jobs = hardware_jobs();
  SvmConfig svm;
  svm.kernel = SvmKernel::Linear;
  const Aggregates w = run_protocol(features.wavelet, svm, opts).aggregates();
  const Aggregates s = run_protocol(features.spectrum, svm, opts).aggregates();
  const double elapsed = seconds_since(t0);
  o.expect(w.runs == 50, "50 runs");
  o.expect(w.test_accuracy.mean >= 90.0, "wavelet-Zernike accuracy >= 90%");
  o.expect(w.test_accuracy.mean > s.test_accuracy.mean, "wavelet-Zernike beats spectrum");
  o.expect(elapsed < 600.0, "under 10 min");
  o.detail << "wavelet-Zernike " << w.test_accuracy.mean << " +- " << w.test_accuracy.std
           << "%, spectrum " << s.test_accuracy.mean << " +- " << s.test_accuracy.std << "%, "
           << elapsed << " s";
}

void timing_trend(Outcome &o) {
  TempDir dir("acceptance-timing");
  PhantomConfig cfg;
  cfg.normals = 233;
  cfg.benign = 72;
  cfg.malignant = 83;
  cfg.seed = 2;
  const DatasetManifest manifest = generate_phantom_dataset(cfg, dir.path());
  const WaveletZernikeExtractor wz(WaveletFamily::Symlet8);
  const FeatureMatrix raw = extract_all(manifest, wz.id(), [&](const Image &img) { return wz(img); });
  FeatureMatrix m = FeatureMatrix::from_samples(raw.extractor_id, balance_dataset(raw.samples(), 1));
  m.values = fit_normalization(m.values).apply(m.values);
  ClassIds y;
  for (ClassLabel l : m.labels)
    y.push_back(static_cast<int>(l));

  // Median of repeated fits; each fit is timed around training only.
  const auto median_seconds = [&](const ClassifierConfig &c, int repeats) {
    std::vector<double> t;
    for (int i = 0; i < repeats; ++i)
      t.push_back(train_classifier(c, m.values, y).train_seconds());
    std::nth_element(t.begin(), t.begin() + repeats / 2, t.end());
    return t[static_cast<std::size_t>(repeats / 2)];
  };
  // The reference timing row is plain gradient-descent backpropagation.
  MlpConfig mlp;
  mlp.trainer = MlpTrainer::Gd;
  const double elm = median_seconds(ElmConfig{100, ElmKernel::Linear, 1}, 7);
  const double gd = median_seconds(mlp, 5);
  o.expect(m.rows() == 699 && m.dims() == 416, "699 x 416 matrix");
  o.expect(gd >= 10.0 * elm, "ELM at least 10x faster");
  o.detail << m.rows() << "x" << m.dims() << ", ELM linear " << elm << " s, MLP gradient descent "
           << gd << " s, ratio " << gd / elm;
}

void determinism(Outcome &o, const PhantomFeatures &features) {
  ProtocolOptions opts;
  opts.seeds = 3;
  opts.jobs = hardware_jobs();
  ProtocolOptions serial = opts;
  serial.jobs = 1;
  SvmConfig svm;
  svm.kernel = SvmKernel::Linear;
  MlpConfig mlp;
  mlp.max_epochs = 20;
  const std::vector<std::pair<const FeatureMatrix *, ClassifierConfig>> cases{
      {&features.wavelet, svm},
      {&features.wavelet, ElmConfig{100, ElmKernel::Sigmoid, 1}},
      {&features.spectrum, KnnConfig{}},
      {&features.spectrum, TreeConfig{}},
      {&features.spectrum, mlp}};
  int identical = 0;
  for (const auto &[m, cfg] : cases) {
    const std::string a = results_section(run_protocol(*m, cfg, opts));
    const std::string b = results_section(run_protocol(*m, cfg, serial));
    identical += a == b;
  }
  o.expect(identical == static_cast<int>(cases.size()), "identical results sections");
  o.detail << identical << "/" << cases.size() << " configurations byte-identical";
}

} // namespace

int main() {
  PhantomFeatures phantom;
  const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> criteria{
      {"pipeline arithmetic", pipeline_arithmetic},
      {"class balancing", balancing},
      {"fold sizes", fold_sizes},
      {"protocol run counts", protocol_arithmetic},
      {"pattern spectrum impulse", impulse_spectrum},
      {"wavelet perfect reconstruction", wavelet_reconstruction},
      {"Zernike moments", zernike_suite},
      {"classifier oracles", classifier_oracles},
      {"t-test", statistics},
      {"phantom benchmark", [&](Outcome &o) { phantom_benchmark(o, phantom); }},
      {"training time ordering", timing_trend},
      {"determinism", [&](Outcome &o) { determinism(o, phantom); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
