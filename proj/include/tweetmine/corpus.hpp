#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tweetmine {

enum class Label { Unlabeled, Negative, Positive };

std::string_view to_string(Label label);
/// Accepts "positive", "negative", "unlabeled" (and "" as unlabeled).
Label parse_label(std::string_view text);

struct Tweet {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;  // empty until preprocessed
  Label label = Label::Unlabeled;
  std::string source;
};

/// Ordered, id-unique collection of tweets with a maintained per-label tally.
///
/// The only mutation paths are `add` (which rejects duplicate ids) and
/// `set_label`, so `class_counts()` always equals a recount over `tweets()`.
class Corpus {
 public:
  Corpus() = default;

  /// Appends a tweet. Returns false (and leaves the corpus untouched) if the
  /// id is already present.
  bool add(Tweet tweet);

  const std::vector<Tweet>& tweets() const { return tweets_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }
  const Tweet& operator[](std::size_t i) const { return tweets_[i]; }

  const std::map<Label, std::size_t>& class_counts() const { return counts_; }
  std::size_t count(Label label) const;

  std::optional<std::size_t> index_of(std::string_view id) const;
  bool contains(std::string_view id) const { return index_of(id).has_value(); }

  /// Relabels tweet `i`; returns the previous label.
  Label set_label(std::size_t i, Label label);

  /// Fills `tokens` for every tweet with `preprocess(raw_text)`.
  void preprocess_all();

 private:
  std::vector<Tweet> tweets_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<Label, std::size_t> counts_;
};

struct IngestResult {
  Corpus corpus;
  std::size_t skipped = 0;  // lines dropped by a stated skip rule (neutral rows)
  std::vector<std::string> warnings;
};

/// Reads the six-field quoted Sentiment140 CSV. Polarity 0 -> negative,
/// 4 -> positive, 2 -> skipped. Malformed lines are skipped with a warning.
IngestResult ingest_sentiment140(const std::string& path,
                                 std::optional<std::size_t> limit = {});

/// Reads `{"id","text","label"?}` records, one per line.
IngestResult ingest_jsonl(const std::string& path);

/// Writes `{"id","text","label","source"}` records, one per line.
void write_jsonl(const Corpus& corpus, const std::string& path);

/// Lowercased, whitespace-collapsed, trimmed form of `text`.
std::string dedup_key(std::string_view text);

/// Keeps the first tweet per dedup key, preserving order.
Corpus dedup(const Corpus& corpus);

/// Per-class uniform sample without replacement of round(fraction * count)
/// tweets. Output keeps the input order of the selected tweets.
Corpus stratified_subsample(const Corpus& corpus, double fraction,
                            std::uint64_t seed);

/// Splits one line of comma-separated, optionally double-quoted fields.
/// Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

}  // namespace tweetmine
