#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tweetmine/classify.hpp"
#include "tweetmine/corpus.hpp"
#include "tweetmine/embedding.hpp"
#include "tweetmine/features.hpp"

namespace tweetmine {

/// One of: mu | mu-sigma | nbsvm | ngrams:1 | ngrams:1,2 | ngrams:1,2,3.
struct FeatureSpec {
  enum class Kind { Mu, MuSigma, NbSvm, NGrams };
  Kind kind = Kind::NGrams;
  std::set<int> orders = {1};  // n-gram orders for NGrams and NbSvm

  static FeatureSpec parse(std::string_view text);
  std::string label() const;
  bool uses_embedding() const { return kind == Kind::Mu || kind == Kind::MuSigma; }
};

/// logistic | svm | ridge.
struct ClassifierSpec {
  enum class Kind { Logistic, Svm, Ridge };
  Kind kind = Kind::Logistic;
  LogisticConfig logistic;
  SvmConfig svm;
  double nbsvm_beta = 0.25;  // applied to SVM weights over nbsvm features

  static ClassifierSpec parse(std::string_view text);
  std::string label() const;
};

/// Feature extraction fitted on a training split: the n-gram registry and
/// NB ratios are learned there; embeddings are supplied from outside.
class FeaturePipeline {
 public:
  /// Fits on `docs` and returns their rows through `train_rows`. Embedding
  /// specs require `embedding`, which must outlive the pipeline.
  static FeaturePipeline fit(const FeatureSpec& spec, std::span<const std::vector<std::string>* const> docs,
                             std::span<const int> labels, const EmbeddingModel* embedding, Rows& train_rows);

  SparseVector transform(const std::vector<std::string>& tokens) const;
  std::size_t dim() const { return dim_; }
  const FeatureSpec& spec() const { return spec_; }

 private:
  FeatureSpec spec_;
  FeaturizerConfig ngram_config_;
  std::shared_ptr<FeatureRegistry> registry_;
  std::optional<NbSvmTransform> nb_;
  const EmbeddingModel* embedding_ = nullptr;
  std::size_t dim_ = 0;
};

/// Trains the classifier on fitted rows, applying the NB-SVM interpolation
/// when an SVM is trained on nbsvm features.
LinearModel train_classifier(const ClassifierSpec& classifier, const FeatureSpec& features, const Rows& X,
                             std::span<const int> y, std::size_t dim, std::uint64_t run_seed = 0);

/// Per-class shuffled round-robin assignment. Returns fold -> sorted indices;
/// folds are disjoint and cover 0..labels.size()-1.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t folds,
                                                       std::uint64_t seed);

struct CvConfig {
  std::size_t repetitions = 5;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  SkipGramConfig embedding;  // seed is replaced per repetition
  unsigned threads = 1;      // runs in flight within one repetition
  std::string dataset_label = "dataset";
};

struct RunResult {
  std::size_t repetition = 0;
  std::size_t fold = 0;
  bool ok = false;
  std::string failure;
  Metrics metrics;
  double featurize_s = 0.0;
  double train_s = 0.0;
  double predict_s = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for fewer than 2 values
};

struct CvReport {
  std::string dataset;
  std::string features;
  std::string classifier;
  std::vector<RunResult> runs;             // repetitions x folds, in run order
  std::vector<double> embedding_train_s;  // per repetition, empty for n-gram features
  std::size_t failed = 0;
  MeanStd accuracy, precision, recall, f1;
  MeanStd featurize_s, train_s, predict_s;
};

/// Labeled tweets only take part in the folds; embeddings are trained on
/// every tweet in the corpus once per repetition, before splitting. A run
/// whose training or test split lacks a class is recorded as failed and left
/// out of the aggregates.
CvReport cross_validate(const Corpus& corpus, const FeatureSpec& features, const ClassifierSpec& classifier,
                        const CvConfig& config);

/// Per-run rows; timing cells are written as "-" when `mask_timing` is set so
/// seeded reports can be compared byte for byte.
std::string format_cv_report(const CvReport& report, bool mask_timing = false);
void write_cv_report(const CvReport& report, const std::string& path, bool mask_timing = false);
/// metric, mean, std rows.
std::string format_cv_summary(const CvReport& report);

}  // namespace tweetmine
