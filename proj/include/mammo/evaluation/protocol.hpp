#pragma once

#include "mammo/classifiers/model.hpp"
#include "mammo/evaluation/folds.hpp"
#include "mammo/features.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mammo {

/// Rows = actual class, columns = predicted class (N, B, M).
using ConfusionCounts = Eigen::Matrix<int, kNumClasses, kNumClasses>;
using ConfusionMean = Eigen::Matrix<double, kNumClasses, kNumClasses>;

/// One train/test evaluation: a cross-validation fold, or one hold-out
/// split for the MLP.
struct RunRecord {
  std::uint64_t seed = 0;        ///< data-order seed
  std::uint64_t weight_seed = 0; ///< 0 for classifiers without random weights
  int fold = 0;
  std::string kernel;
  double train_accuracy = 0.0; ///< percent
  double test_accuracy = 0.0;  ///< percent
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  ConfusionCounts confusion = ConfusionCounts::Zero();
  std::string error; ///< non-empty for a degenerate run

  bool ok() const { return error.empty(); }
};

struct ConfigurationId {
  std::string extractor;  ///< feature extractor id
  std::string family;     ///< wavelet family or structuring element
  std::string classifier; ///< elm, svm, knn, tree, mlp
  std::string kernel;     ///< kernel or trainer

  std::string str() const;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0; ///< sample standard deviation
};

struct Aggregates {
  Summary train_accuracy, test_accuracy, train_seconds, test_seconds;
  ConfusionMean confusion_mean = ConfusionMean::Zero();
  ConfusionMean confusion_std = ConfusionMean::Zero();
  int runs = 0; ///< successful runs the aggregates cover
};

struct RunReport {
  static constexpr int kVersion = 1;
  ConfigurationId config;
  std::vector<std::uint64_t> seeds;
  std::vector<int> classes; ///< class ids present in the data
  /// Resolved hyperparameters and protocol decisions, in insertion order.
  std::vector<std::pair<std::string, std::string>> settings;
  std::vector<RunRecord> runs;

  Aggregates aggregates() const;
  std::vector<double> test_accuracies() const;
};

struct ProtocolOptions {
  int seeds = 30;
  int folds = kDefaultFolds;
  int jobs = 1;
};

/// Rows grouped by family: per training fold a min-max normalization is
/// fitted on the training rows, the classifier trained and timed, and
/// train/test accuracy plus test confusion recorded. A fold whose training
/// rows lack a class of the data set is recorded as a degenerate run.
std::vector<RunRecord> run_cv(const FeatureMatrix &matrix, const ClassifierConfig &cfg,
                              const FoldPlan &plan);

/// Full seeded protocol. SVM, tree and k-NN: seeds × folds runs. ELM:
/// seeds × seeds weight seeds × folds. MLP: the three architectures ×
/// seeds × seeds weight seeds hold-out runs (split 70/15/15 by the data-order
/// seed). Independent runs execute on `opts.jobs` threads; results do not
/// depend on the thread count.
RunReport run_protocol(const FeatureMatrix &matrix, const ClassifierConfig &cfg,
                       const ProtocolOptions &opts);

/// Resolved hyperparameters and decisions for the report metadata.
std::vector<std::pair<std::string, std::string>> describe(const ClassifierConfig &cfg);

/// Number of runs the protocol records for `cfg` with `seeds` seeds.
long expected_runs(const ClassifierConfig &cfg, int seeds, int folds = kDefaultFolds);

/// The wavelet family or structuring-element token of an extractor id.
std::string extractor_family(const std::string &extractor_id);

} // namespace mammo
