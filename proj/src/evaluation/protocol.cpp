#include "mammo/evaluation/protocol.hpp"
#include "mammo/evaluation/stats.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace mammo {

namespace {

template <class... Ts> struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts> Overload(Ts...) -> Overload<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Partition {
  FeatureRows X;
  std::vector<int> y;
};

Partition take(const FeatureMatrix &m, const std::vector<Eigen::Index> &rows) {
  Partition p{m.values(rows, Eigen::all), {}};
  p.y.reserve(rows.size());
  for (Eigen::Index i : rows)
    p.y.push_back(static_cast<int>(m.labels[static_cast<std::size_t>(i)]));
  return p;
}

std::vector<int> classes_of(const FeatureMatrix &m) {
  std::vector<int> y;
  for (ClassLabel l : m.labels)
    y.push_back(static_cast<int>(l));
  return distinct_classes(y);
}

// Empty when every class of the data set occurs in `y`.
std::string missing_class(const std::vector<int> &y, const std::vector<int> &classes,
                          const char *where) {
  for (int c : classes)
    if (std::find(y.begin(), y.end(), c) == y.end())
      return std::string("degenerate run: class ") +
             std::string(to_string(static_cast<ClassLabel>(c))) + " missing from " + where;
  return {};
}

void score(RunRecord &r, const std::vector<int> &truth, const std::vector<int> &pred) {
  r.test_accuracy = accuracy(truth, pred);
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++r.confusion(truth[i], pred[i]);
}

RunRecord evaluate_split(const FeatureMatrix &m, const ClassifierConfig &cfg,
                         const std::vector<Eigen::Index> &train_rows,
                         const std::vector<Eigen::Index> &test_rows, RunRecord r) {
  Partition train = take(m, train_rows), test = take(m, test_rows);
  r.error = missing_class(train.y, classes_of(m), "training rows");
  if (!r.ok())
    return r;
  const MinMaxNormalization norm = fit_normalization(train.X);
  train.X = norm.apply(train.X);
  test.X = norm.apply(test.X);
  try {
    const TrainedModel model = train_classifier(cfg, train.X, train.y);
    r.train_seconds = model.train_seconds();
    r.train_accuracy = accuracy(train.y, model.predict(train.X));
    const auto pred = timed([&] { return model.predict(test.X); });
    r.test_seconds = pred.seconds;
    score(r, test.y, pred.value);
  } catch (const ClassifierError &e) {
    r.error = e.what();
  }
  return r;
}

RunRecord evaluate_holdout(const FeatureMatrix &m, const MlpConfig &cfg, RunRecord r) {
  const MlpSplit split = mlp_split(m.rows(), cfg, cfg.shuffle_seed);
  Partition train = take(m, split.train), val = take(m, split.validation),
            test = take(m, split.test);
  r.error = missing_class(train.y, classes_of(m), "training rows");
  if (!r.ok())
    return r;
  const MinMaxNormalization norm = fit_normalization(train.X);
  train.X = norm.apply(train.X);
  val.X = norm.apply(val.X);
  test.X = norm.apply(test.X);
  try {
    const auto model = timed([&] { return MlpModel::fit(train.X, train.y, val.X, val.y, cfg); });
    r.train_seconds = model.seconds;
    r.train_accuracy = accuracy(train.y, model.value.predict(train.X));
    const auto pred = timed([&] { return model.value.predict(test.X); });
    r.test_seconds = pred.seconds;
    score(r, test.y, pred.value);
  } catch (const ClassifierError &e) {
    r.error = e.what();
  }
  return r;
}

// Runs every task on up to `jobs` threads; slot i receives task i's result.
std::vector<RunRecord> run_parallel(const std::vector<std::function<RunRecord()>> &tasks, int jobs) {
  std::vector<RunRecord> out(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);
  return out;
}

} // namespace

std::string ConfigurationId::str() const {
  return extractor + "|" + classifier + ":" + kernel;
}

std::vector<double> RunReport::test_accuracies() const {
  std::vector<double> v;
  for (const RunRecord &r : runs)
    if (r.ok())
      v.push_back(r.test_accuracy);
  return v;
}

Aggregates RunReport::aggregates() const {
  Aggregates a;
  std::vector<double> tra, tea, trs, tes;
  std::vector<ConfusionMean> conf;
  for (const RunRecord &r : runs) {
    if (!r.ok())
      continue;
    tra.push_back(r.train_accuracy);
    tea.push_back(r.test_accuracy);
    trs.push_back(r.train_seconds);
    tes.push_back(r.test_seconds);
    conf.push_back(r.confusion.cast<double>());
  }
  a.runs = static_cast<int>(tra.size());
  a.train_accuracy = {mean(tra), sample_std(tra)};
  a.test_accuracy = {mean(tea), sample_std(tea)};
  a.train_seconds = {mean(trs), sample_std(trs)};
  a.test_seconds = {mean(tes), sample_std(tes)};
  std::vector<double> cell(conf.size());
  for (int i = 0; i < kNumClasses; ++i)
    for (int j = 0; j < kNumClasses; ++j) {
      for (std::size_t k = 0; k < conf.size(); ++k)
        cell[k] = conf[k](i, j);
      a.confusion_mean(i, j) = mean(cell);
      a.confusion_std(i, j) = sample_std(cell);
    }
  return a;
}

std::vector<RunRecord> run_cv(const FeatureMatrix &matrix, const ClassifierConfig &cfg,
                              const FoldPlan &plan) {
  if (plan.fold_of.size() != static_cast<std::size_t>(matrix.rows()))
    throw std::invalid_argument("fold plan does not cover the feature matrix");
  std::uint64_t weight_seed = 0;
  if (const auto *elm = std::get_if<ElmConfig>(&cfg))
    weight_seed = elm->weight_seed;
  else if (const auto *mlp = std::get_if<MlpConfig>(&cfg))
    weight_seed = mlp->weight_seed;
  std::vector<RunRecord> out;
  for (int f = 0; f < plan.folds; ++f) {
    RunRecord r;
    r.seed = plan.permutation_seed;
    r.weight_seed = weight_seed;
    r.fold = f;
    r.kernel = kernel_name(cfg);
    out.push_back(evaluate_split(matrix, cfg, plan.complement(f), plan.members(f), std::move(r)));
  }
  return out;
}

long expected_runs(const ClassifierConfig &cfg, int seeds, int folds) {
  const long s = seeds;
  switch (family_of(cfg)) {
  case ClassifierFamily::Elm:
    return s * s * folds;
  case ClassifierFamily::Mlp:
    return static_cast<long>(kMlpArchitectures.size()) * s * s;
  default:
    return s * folds;
  }
}

std::string extractor_family(const std::string &extractor_id) {
  const auto a = extractor_id.find(':');
  if (a == std::string::npos)
    return {};
  const auto b = extractor_id.find(':', a + 1);
  return extractor_id.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
}

std::vector<std::pair<std::string, std::string>> describe(const ClassifierConfig &cfg) {
  using Settings = std::vector<std::pair<std::string, std::string>>;
  return std::visit(
      Overload{
          [](const ElmConfig &c) {
            return Settings{{"hidden_neurons", std::to_string(c.hidden_neurons)},
                            {"kernel", std::string(to_string(c.kernel))},
                            {"weight_init", "uniform[-1,1]; rbf widths uniform[0,1]"},
                            {"output_weights", "pinv(H)*T, singular values below 1e-12*max dropped"}};
          },
          [](const SvmConfig &c) {
            return Settings{{"kernel", std::string(to_string(c.kernel))},
                            {"C", fmt(c.C)},
                            {"degree", std::to_string(c.degree)},
                            {"gamma", c.gamma ? fmt(*c.gamma) : "1/num_features"},
                            {"coef0", fmt(c.coef0)},
                            {"tolerance", fmt(c.tolerance)},
                            {"multiclass", "one-vs-one voting"}};
          },
          [](const KnnConfig &c) {
            return Settings{{"k", "1"},
                            {"leaf_capacity", std::to_string(c.leaf_capacity)},
                            {"metric", "euclidean"}};
          },
          [](const TreeConfig &c) {
            return Settings{{"criterion", "gini"},
                            {"max_splits", c.max_splits ? std::to_string(*c.max_splits) : "n-1"},
                            {"min_leaf_size", "1"},
                            {"growth", "breadth-first"}};
          },
          [](const MlpConfig &c) {
            std::string archs;
            for (const auto &a : kMlpArchitectures)
              archs += (archs.empty() ? "" : ",") + architecture_name(a);
            return Settings{{"trainer", std::string(to_string(c.trainer))},
                            {"architectures", archs},
                            {"max_epochs", std::to_string(c.max_epochs)},
                            {"patience", std::to_string(c.patience)},
                            {"split", fmt(c.train_fraction) + "/" + fmt(c.validation_fraction) +
                                          "/" + fmt(c.test_fraction)},
                            {"learning_rate", fmt(c.learning_rate)},
                            {"momentum", fmt(c.momentum)},
                            {"lr_increase", fmt(c.lr_increase)},
                            {"lr_decrease", fmt(c.lr_decrease)},
                            {"max_error_ratio", fmt(c.max_error_ratio)},
                            {"rprop_delta0", fmt(c.rprop_delta0)},
                            {"rprop_delta_max", fmt(c.rprop_delta_max)},
                            {"hidden_activation", "sigmoid"},
                            {"output_activation", "linear, mse loss"}};
          },
      },
      cfg);
}

RunReport run_protocol(const FeatureMatrix &matrix, const ClassifierConfig &cfg,
                       const ProtocolOptions &opts) {
  if (opts.seeds < 1)
    throw std::invalid_argument("protocol needs at least one seed");
  RunReport report;
  report.config = {matrix.extractor_id, extractor_family(matrix.extractor_id),
                   std::string(to_string(family_of(cfg))), kernel_name(cfg)};
  for (int s = 1; s <= opts.seeds; ++s)
    report.seeds.push_back(static_cast<std::uint64_t>(s));
  report.classes = classes_of(matrix);
  report.settings = describe(cfg);
  report.settings.insert(
      report.settings.end(),
      {{"folds", std::to_string(opts.folds)},
       {"normalization", "min-max fitted on training rows, clamped, constant features -> 0"},
       {"tie_break", "lowest index"},
       {"timing", "monotonic clock around train and predict calls only"},
       {"synthetic_samples", "balanced samples may appear in both training and test folds"}});

  std::vector<std::function<RunRecord()>> tasks;
  const FeatureMatrix &m = matrix;
  const ClassifierFamily family = family_of(cfg);

  if (family == ClassifierFamily::Mlp) {
    const MlpConfig base = std::get<MlpConfig>(cfg);
    for (const auto &arch : kMlpArchitectures)
      for (std::uint64_t s : report.seeds)
        for (std::uint64_t w : report.seeds) {
          MlpConfig c = base;
          c.architecture = arch;
          c.shuffle_seed = s;
          c.weight_seed = w;
          tasks.push_back([&m, c, s, w] {
            RunRecord r;
            r.seed = s;
            r.weight_seed = w;
            r.kernel = kernel_name(c);
            return evaluate_holdout(m, c, std::move(r));
          });
        }
  } else {
    std::vector<std::shared_ptr<const FoldPlan>> plans;
    for (std::uint64_t s : report.seeds)
      plans.push_back(std::make_shared<FoldPlan>(make_fold_plan(m.rows(), opts.folds, s)));
    const std::vector<std::uint64_t> weight_seeds =
        family == ClassifierFamily::Elm ? report.seeds : std::vector<std::uint64_t>{0};
    for (const auto &plan : plans)
      for (std::uint64_t w : weight_seeds) {
        ClassifierConfig c = cfg;
        if (auto *elm = std::get_if<ElmConfig>(&c))
          elm->weight_seed = w;
        for (int f = 0; f < opts.folds; ++f)
          tasks.push_back([&m, c, plan, w, f] {
            RunRecord r;
            r.seed = plan->permutation_seed;
            r.weight_seed = w;
            r.fold = f;
            r.kernel = kernel_name(c);
            return evaluate_split(m, c, plan->complement(f), plan->members(f), std::move(r));
          });
      }
  }
  report.runs = run_parallel(tasks, opts.jobs);
  return report;
}

} // namespace mammo
