// Command-line front end: phantom generation, feature extraction,
// protocol evaluation and report comparison.
//
// Exit codes: 0 success, 1 runtime or data error, 2 usage error.

#include "mammo/dataio.hpp"
#include "mammo/evaluation/report.hpp"
#include "mammo/features.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_config(const Json &j) { std::cout << j.dump(2) << std::endl; }

// ---------------------------------------------------------------------------

struct PhantomArgs {
  std::string out;
  mammo::PhantomConfig cfg;
};

int run_phantom(const PhantomArgs &a) {
  print_config(Json{{"command", "phantom"},
                    {"out", a.out},
                    {"normals", a.cfg.normals},
                    {"benign", a.cfg.benign},
                    {"malignant", a.cfg.malignant},
                    {"size", a.cfg.size},
                    {"seed", a.cfg.seed},
                    {"format", "pgm 8-bit"}});
  const mammo::DatasetManifest m = mammo::generate_phantom_dataset(a.cfg, a.out);
  std::cerr << "wrote " << m.entries.size() << " images and manifest.csv to " << a.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  std::string manifest;
  std::string extractor;
  std::string family;
  std::string se;
  std::string out;
  int jobs = 1;
};

int run_extract(const ExtractArgs &a) {
  using namespace mammo;
  const bool wavelet = a.extractor == "wavelet-zernike";
  if (wavelet && !a.se.empty())
    throw UsageError("--se applies to the spectrum extractor only");
  if (!wavelet && !a.family.empty())
    throw UsageError("--family applies to the wavelet-zernike extractor only");
  const WaveletFamily family = *parse_family(a.family.empty() ? "sym8" : a.family);
  const SeShape shape = *parse_se_shape(a.se.empty() ? "square" : a.se);

  FeatureMatrix fm;
  fm.extractor_id = wavelet ? wavelet_zernike_id(family) : spectrum_id(shape);
  Json cfg{{"command", "extract"}, {"manifest", a.manifest}, {"extractor", fm.extractor_id}};
  if (wavelet) {
    cfg["family"] = std::string(to_string(family));
    cfg["levels"] = kWaveletLevels;
    cfg["extension"] = "half-sample symmetric";
    cfg["moments_per_component"] = kMomentsPerComponent;
    cfg["dims"] = kWaveletZernikeDims;
  } else {
    cfg["se"] = std::string(to_string(shape));
    cfg["max_scale"] = "rows + cols";
    cfg["dims"] = kSpectrumDims;
  }
  cfg["preprocessing"] = "min-max histogram stretch to [0,1]";
  cfg["out"] = a.out;
  cfg["jobs"] = a.jobs;
  print_config(cfg);

  const DatasetManifest manifest = load_manifest(a.manifest);
  const std::size_t n = manifest.entries.size();
  const WaveletZernikeExtractor wz(family);
  std::vector<Eigen::VectorXd> rows(n);
  std::vector<double> seconds(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        const Image img = load_image(manifest.resolve(manifest.entries[i]));
        seconds[i] = timeit([&] { rows[i] = wavelet ? wz(img) : extract_spectrum(img, shape); });
      } catch (const std::exception &e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, a.jobs); ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();

  fm.values.resize(static_cast<Eigen::Index>(n), wavelet ? kWaveletZernikeDims : kSpectrumDims);
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty())
      throw DataError(manifest.entries[i].image_path + ": " + errors[i]);
    std::fprintf(stderr, "[%zu/%zu] %s %.4f s\n", i + 1, n, manifest.entries[i].image_path.c_str(),
                 seconds[i]);
    fm.values.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    fm.labels.push_back(manifest.entries[i].label);
    fm.synthetic.push_back(0);
  }
  save_features(fm, a.out);
  std::cerr << "wrote " << n << "x" << fm.dims() << " features to " << a.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string features;
  std::string classifier;
  std::string kernel;
  int seeds = 30;
  bool balance = false;
  std::uint64_t balance_seed = 1;
  std::string report;
  std::string format;
  int jobs = 1;
  // hyperparameters
  int hidden = 100;
  double C = 1.0;
  std::optional<double> gamma;
  int degree = 3;
  double coef0 = 0.0;
  double tolerance = 1e-3;
  double learning_rate = 0.01;
  double momentum = 0.9;
  int epochs = 100;
  int patience = 5;
};

mammo::ClassifierConfig build_classifier(const EvaluateArgs &a) {
  using namespace mammo;
  const ClassifierFamily family = *parse_classifier_family(a.classifier);
  const auto bad_kernel = [&](std::string_view valid) {
    return UsageError("kernel '" + a.kernel + "' is not valid for " + a.classifier +
                      "; choose one of: " + std::string(valid));
  };
  switch (family) {
  case ClassifierFamily::Elm: {
    ElmConfig c;
    c.hidden_neurons = a.hidden;
    const auto k = parse_elm_kernel(a.kernel.empty() ? "sigmoid" : a.kernel);
    if (!k)
      throw bad_kernel(kElmKernelNames);
    c.kernel = *k;
    if (c.hidden_neurons < 1)
      throw UsageError("--hidden must be >= 1");
    return c;
  }
  case ClassifierFamily::Svm: {
    SvmConfig c;
    const auto k = parse_svm_kernel(a.kernel.empty() ? "linear" : a.kernel);
    if (!k)
      throw bad_kernel(kSvmKernelNames);
    c.kernel = *k;
    c.C = a.C;
    c.gamma = a.gamma;
    c.degree = a.degree;
    c.coef0 = a.coef0;
    c.tolerance = a.tolerance;
    if (!(c.C > 0.0) || !(c.tolerance > 0.0))
      throw UsageError("--C and --tolerance must be positive");
    return c;
  }
  case ClassifierFamily::Knn:
  case ClassifierFamily::Tree:
    if (!a.kernel.empty() && a.kernel != "none")
      throw bad_kernel("none");
    if (family == ClassifierFamily::Knn)
      return KnnConfig{};
    return TreeConfig{};
  case ClassifierFamily::Mlp: {
    MlpConfig c;
    const auto t = parse_mlp_trainer(a.kernel.empty() ? "rprop" : a.kernel);
    if (!t)
      throw bad_kernel(kMlpTrainerNames);
    c.trainer = *t;
    c.learning_rate = a.learning_rate;
    c.momentum = a.momentum;
    c.max_epochs = a.epochs;
    c.patience = a.patience;
    try {
      validate(c);
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
    return c;
  }
  }
  throw UsageError("unknown classifier");
}

int run_evaluate(const EvaluateArgs &a) {
  using namespace mammo;
  if (a.seeds < 1)
    throw UsageError("--seeds must be >= 1");
  ReportFormat format = ReportFormat::Csv;
  if (!a.format.empty())
    format = *parse_report_format(a.format);
  else if (std::filesystem::path(a.report).extension() == ".json")
    format = ReportFormat::Json;
  const ClassifierConfig cfg = build_classifier(a);
  ProtocolOptions opts;
  opts.seeds = a.seeds;
  opts.jobs = std::max(1, a.jobs);

  Json settings = Json::object();
  for (const auto &[k, v] : describe(cfg))
    settings[k] = v;
  print_config(Json{{"command", "evaluate"},
                    {"features", a.features},
                    {"classifier", a.classifier},
                    {"kernel", kernel_name(cfg)},
                    {"seeds", a.seeds},
                    {"expected_runs", expected_runs(cfg, a.seeds)},
                    {"folds", opts.folds},
                    {"balance", a.balance},
                    {"balance_seed", a.balance_seed},
                    {"settings", settings},
                    {"report", a.report},
                    {"format", format == ReportFormat::Json ? "json" : "csv"},
                    {"jobs", opts.jobs}});

  FeatureMatrix fm = load_features(a.features);
  if (a.balance) {
    fm = FeatureMatrix::from_samples(fm.extractor_id, balance_dataset(fm.samples(), a.balance_seed));
    std::cerr << "balanced to " << fm.rows() << " samples\n";
  }
  const RunReport report = run_protocol(fm, cfg, opts);
  emit_report(report, a.report, format);
  const Aggregates agg = report.aggregates();
  std::fprintf(stderr, "%zu runs (%d ok): test accuracy %.2f +- %.2f %%, train %.4f +- %.4f s\n",
               report.runs.size(), agg.runs, agg.test_accuracy.mean, agg.test_accuracy.std,
               agg.train_seconds.mean, agg.train_seconds.std);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> reports;
  std::string out;
  bool welch = false;
};

int run_compare(const CompareArgs &a) {
  using namespace mammo;
  if (a.reports.size() < 2)
    throw UsageError("--reports needs at least two report files");
  print_config(Json{{"command", "compare"},
                    {"reports", a.reports},
                    {"out", a.out},
                    {"t_test", a.welch ? "welch, two-tailed" : "pooled variance, two-tailed"},
                    {"significance", kSignificance},
                    {"near_chance_exclusion", kNearChanceAccuracy}});

  std::vector<RunReport> reports;
  for (const std::string &p : a.reports)
    reports.push_back(load_report(p));
  const std::vector<PairwiseTest> tests = pairwise_tests(reports, a.welch);
  const RatioTable ratios = ratio_report(reports);

  std::ostringstream os;
  char buf[512];
  os << "# pairwise t-tests on test accuracy\nfirst,second,t,df,p,hypothesis\n";
  for (const PairwiseTest &t : tests) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%.17g,%d\n", t.first.c_str(),
                  t.second.c_str(), t.result.t_statistic, t.result.degrees_of_freedom,
                  t.result.p_value, t.result.hypothesis);
    os << buf;
  }
  os << "# accuracy/time ratios, descending\nconfig_id,mean_test_acc,mean_train_sec,ratio\n";
  for (const RatioRow &r : ratios.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", r.config_id.c_str(),
                  r.mean_test_accuracy, r.mean_train_seconds, r.ratio);
    os << buf;
  }
  os << "# excluded below " << kNearChanceAccuracy << "% mean test accuracy\n";
  for (const std::string &id : ratios.excluded)
    os << id << '\n';

  std::ofstream out(a.out, std::ios::binary);
  if (!out || !(out << os.str()))
    throw DataError("cannot write " + a.out);
  std::cout << os.str();
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Mammographic mass classification pipeline"};
  app.require_subcommand(1);

  PhantomArgs ph;
  auto *phantom = app.add_subcommand("phantom", "Generate a synthetic labelled ROI data set");
  phantom->add_option("--out", ph.out, "Output directory")->required();
  phantom->add_option("--normals", ph.cfg.normals, "Normal images")->capture_default_str();
  phantom->add_option("--benign", ph.cfg.benign, "Benign images")->capture_default_str();
  phantom->add_option("--malignant", ph.cfg.malignant, "Malignant images")->capture_default_str();
  phantom->add_option("--size", ph.cfg.size, "ROI side in pixels")->capture_default_str();
  phantom->add_option("--seed", ph.cfg.seed, "Generator seed")->capture_default_str();

  ExtractArgs ex;
  auto *extract = app.add_subcommand("extract", "Extract a feature matrix from a manifest");
  extract->add_option("--manifest", ex.manifest, "Manifest CSV (path,label)")->required();
  extract->add_option("--extractor", ex.extractor, "Feature extractor")
      ->required()
      ->check(CLI::IsMember({"wavelet-zernike", "spectrum"}));
  extract->add_option("--family", ex.family, "Wavelet family (default sym8)")
      ->check(CLI::IsMember({"bior3.7", "db8", "sym8"}));
  extract->add_option("--se", ex.se, "Structuring element (default square)")
      ->check(CLI::IsMember({"square", "cross"}));
  extract->add_option("--out", ex.out, "Output feature CSV")->required();
  extract->add_option("--jobs", ex.jobs, "Worker threads")->envname("MAMMO_JOBS")->capture_default_str();

  EvaluateArgs ev;
  auto *evaluate = app.add_subcommand("evaluate", "Run the seeded cross-validation protocol");
  evaluate->add_option("--features", ev.features, "Feature CSV")->required();
  evaluate->add_option("--classifier", ev.classifier, "Classifier family")
      ->required()
      ->check(CLI::IsMember({"elm", "svm", "knn", "tree", "mlp"}));
  evaluate->add_option("--kernel", ev.kernel,
                       "ELM/SVM kernel, MLP trainer (batch|gd|gdm|gda|gdx|rprop), none for knn/tree");
  evaluate->add_option("--seeds", ev.seeds, "Number of data-order seeds (1..N)")->capture_default_str();
  evaluate->add_flag("--balance", ev.balance, "Balance classes with synthetic samples first");
  evaluate->add_option("--balance-seed", ev.balance_seed, "Seed for synthetic samples")->capture_default_str();
  evaluate->add_option("--report", ev.report, "Report output path")->required();
  evaluate->add_option("--format", ev.format, "csv or json (default from extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  evaluate->add_option("--jobs", ev.jobs, "Worker threads")->envname("MAMMO_JOBS")->capture_default_str();
  evaluate->add_option("--hidden", ev.hidden, "ELM hidden neurons")->capture_default_str();
  evaluate->add_option("--C", ev.C, "SVM soft-margin penalty")->capture_default_str();
  evaluate->add_option("--gamma", ev.gamma, "SVM gamma (default 1/num_features)");
  evaluate->add_option("--degree", ev.degree, "SVM polynomial degree")->capture_default_str();
  evaluate->add_option("--coef0", ev.coef0, "SVM coef0")->capture_default_str();
  evaluate->add_option("--tolerance", ev.tolerance, "SVM KKT tolerance")->capture_default_str();
  evaluate->add_option("--lr", ev.learning_rate, "MLP learning rate")->capture_default_str();
  evaluate->add_option("--momentum", ev.momentum, "MLP momentum")->capture_default_str();
  evaluate->add_option("--epochs", ev.epochs, "MLP maximum epochs")->capture_default_str();
  evaluate->add_option("--patience", ev.patience, "MLP early-stopping patience")->capture_default_str();

  CompareArgs cmp;
  auto *compare = app.add_subcommand("compare", "t-tests and accuracy/time ratios across reports");
  compare->add_option("--reports", cmp.reports, "Two or more report files")->required();
  compare->add_option("--out", cmp.out, "Comparison table output")->required();
  compare->add_flag("--welch", cmp.welch, "Use Welch's unequal-variance t-test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*phantom)
      return run_phantom(ph);
    if (*extract)
      return run_extract(ex);
    if (*evaluate)
      return run_evaluate(ev);
    return run_compare(cmp);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
