#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tweetmine/classify.hpp"
#include "tweetmine/corpus.hpp"
#include "tweetmine/cv.hpp"
#include "tweetmine/embedding.hpp"

namespace tweetmine {

enum class Decider { Human, OracleSim };
std::string_view to_string(Decider decider);
Decider parse_decider(std::string_view text);

struct ReviewItem {
  std::string tweet_id;
  std::string text;
  double score = 0.0;
  Label current = Label::Negative;
  Label predicted = Label::Positive;
  std::size_t iteration = 0;
  std::optional<std::string> topic_annotation;
  std::vector<std::string> lexicon_hits;
};

struct ReviewDecision {
  std::string tweet_id;
  Label new_label = Label::Positive;
  Decider decider = Decider::Human;
  std::string timestamp;  // filled on application when empty
};

/// One line of the append-only audit log. Rejected decisions are logged too,
/// with `applied` false and the reason.
struct AuditEntry {
  std::size_t seq = 0;
  std::size_t iteration = 0;
  std::string tweet_id;
  Label old_label = Label::Unlabeled;
  Label new_label = Label::Unlabeled;
  Decider decider = Decider::Human;
  std::string timestamp;
  bool applied = false;
  std::string reason;
};

class AuditLog {
 public:
  AuditLog() = default;
  /// Loads existing entries from `path` (if present) and appends new ones to it.
  static AuditLog open(const std::string& path);
  static std::vector<AuditEntry> read(const std::string& path);

  void append(AuditEntry entry);
  const std::vector<AuditEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<AuditEntry> entries_;
  std::shared_ptr<std::ofstream> sink_;
};

std::string audit_to_json(const AuditEntry& entry);
AuditEntry audit_from_json(std::string_view line);

struct IterationStats {
  std::size_t iteration = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t queued = 0;
  std::size_t accepted = 0;         // flips to positive applied for this iteration
  std::size_t total_positives = 0;  // after application
};

/// Predicted-positive, labeled-negative tweets in descending score order
/// (corpus order on ties). With `include_false_negatives`, predicted-negative
/// positives follow, lowest score first.
std::vector<ReviewItem> rank_from_scores(const Corpus& corpus, const std::vector<double>& scores,
                                         std::size_t iteration, bool include_false_negatives = false);
/// Scores every tweet with `model` and ranks as above.
std::vector<ReviewItem> rank_false_positives(const LinearModel& model, const FeaturePipeline& pipeline,
                                             const Corpus& corpus, std::size_t iteration,
                                             bool include_false_negatives = false);

struct ApplyResult {
  std::size_t applied = 0;
  std::size_t rejected = 0;
  std::size_t accepted = 0;  // applied decisions that turned a non-positive label positive
};

/// Applies decisions in order; later decisions for the same tweet win. Ids
/// missing from the corpus, or (when `queued` is given) not in it, are
/// rejected. Everything is logged.
ApplyResult apply_decisions(Corpus& corpus, const std::vector<ReviewDecision>& decisions, std::size_t iteration,
                            AuditLog& log, const std::vector<ReviewItem>* queued = nullptr);

/// Reapplies every applied audit entry to a copy of `initial`.
Corpus replay(const Corpus& initial, const std::vector<AuditEntry>& log);

/// Logistic regression with class-balanced loss weights; the rare class
/// would otherwise never be predicted.
ClassifierSpec balanced_classifier(ClassifierSpec::Kind kind = ClassifierSpec::Kind::Logistic);

struct RelabelConfig {
  FeatureSpec features = FeatureSpec::parse("ngrams:1,2");
  ClassifierSpec classifier = balanced_classifier();
  SkipGramConfig embedding;
  // Out-of-fold scoring; values below 2 score with a model trained on everything.
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  bool include_false_negatives = false;
};

struct IterationResult {
  std::vector<ReviewItem> queue;
  IterationStats stats;
};

/// Retrains on the current labels of `corpus` and returns the review queue for
/// `iteration`. `embedding` must be set for embedding feature sets.
IterationResult compute_iteration(const Corpus& corpus, const RelabelConfig& config, std::size_t iteration,
                                  const EmbeddingModel* embedding);

struct RelabelState {
  Corpus corpus;
  RelabelConfig config;
  std::shared_ptr<const EmbeddingModel> embedding;
  std::size_t iteration = 0;  // number of completed retrains
  std::vector<ReviewItem> queue;
  std::vector<IterationStats> history;
  AuditLog log;

  /// Trains the embedding once when the feature set needs it.
  static RelabelState create(Corpus corpus, RelabelConfig config, AuditLog log = {});
};

/// Retrains, installs the new queue and appends a stats row.
IterationResult run_iteration(RelabelState& state);
/// Applies decisions against the current queue and updates the last stats row.
ApplyResult decide(RelabelState& state, const std::vector<ReviewDecision>& decisions);

/// Accepts queued tweets whose hidden label is positive and confirms the rest
/// as negative.
std::vector<ReviewDecision> oracle_decisions(const std::vector<ReviewItem>& queue,
                                             const std::map<std::string, Label>& truth);

/// Runs up to `max_iterations` retrain/review rounds with the oracle,
/// stopping early on an empty queue or a round that accepts nothing.
/// Returns the stats history.
std::vector<IterationStats> simulate(RelabelState& state, const std::map<std::string, Label>& truth,
                                     std::size_t max_iterations);

std::string utc_timestamp();

}  // namespace tweetmine
