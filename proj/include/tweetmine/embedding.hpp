#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tweetmine/corpus.hpp"

namespace tweetmine {

using Sentences = std::vector<std::vector<std::string>>;

/// Token sequences of a preprocessed corpus (tokenizing raw text on the fly
/// for tweets whose tokens are still empty).
Sentences corpus_sentences(const Corpus& corpus);

/// Word -> dense index, ordered by descending count with lexicographic ties.
class Vocabulary {
 public:
  struct Entry {
    std::string word;
    std::uint64_t count = 0;
  };

  Vocabulary() = default;
  /// Throws DataError when there are no tokens at all.
  static Vocabulary build(const Sentences& sentences, std::uint64_t min_count);
  static Vocabulary build(const Corpus& corpus, std::uint64_t min_count);
  /// Entries are re-sorted into canonical order.
  static Vocabulary from_entries(std::vector<Entry> entries);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::optional<std::size_t> index(std::string_view word) const;
  std::uint64_t total_tokens() const { return total_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t total_ = 0;
};

struct SkipGramConfig {
  std::size_t dim = 100;
  int window = 5;
  int epochs = 5;
  double subsample_t = 1e-3;
  double learning_rate = 0.025;
  std::uint64_t min_count = 1;
  std::uint64_t seed = 1;
  /// > 1 shards sentences across threads with lock-free updates; results are
  /// then no longer bit-reproducible.
  int threads = 1;
};

/// Path from the root of the Huffman tree to a word's leaf.
struct HuffmanCode {
  std::vector<std::uint8_t> code;     // branch taken at each inner node
  std::vector<std::uint32_t> points;  // inner node indices, root first
};

/// Huffman coding over `counts` (V >= 2); inner nodes are numbered 0..V-2.
std::vector<HuffmanCode> build_huffman(std::span<const std::uint64_t> counts);

/// Probability that an input vector emits leaf `target` under hierarchical
/// softmax, with `inner` holding (V-1) x d row-major node vectors.
double hs_probability(const std::vector<HuffmanCode>& codes, std::span<const float> inner,
                      std::span<const float> input, std::size_t target);

/// (center, context) position pairs of a sentence for a fixed window radius.
std::vector<std::pair<std::size_t, std::size_t>> skipgram_pairs(std::size_t length, int window);

/// Chance of dropping a token whose corpus frequency fraction is `freq`.
double discard_probability(double freq, double t);

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Vocabulary vocab, std::size_t dim, std::vector<float> vectors,
                 SkipGramConfig config = {});

  const Vocabulary& vocab() const { return vocab_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const SkipGramConfig& config() const { return config_; }
  const std::vector<float>& data() const { return vectors_; }

  std::span<const float> row(std::size_t i) const { return {vectors_.data() + i * dim_, dim_}; }
  std::optional<std::span<const float>> vector(std::string_view word) const;

 private:
  Vocabulary vocab_;
  std::size_t dim_ = 0;
  std::vector<float> vectors_;
  SkipGramConfig config_;
};

/// Skip-gram with hierarchical softmax, frequent-word subsampling and a
/// linearly decaying learning rate. Throws DataError with < 2 distinct words.
EmbeddingModel train_skipgram(const Sentences& sentences, const SkipGramConfig& config);
EmbeddingModel train_skipgram(const Corpus& corpus, const SkipGramConfig& config);

double cosine(std::span<const float> a, std::span<const float> b);

/// Nearest words by cosine to the mean of the query vectors, query excluded.
/// Throws InvalidArgument naming any out-of-vocabulary query word.
std::vector<std::pair<std::string, double>> most_similar(const EmbeddingModel& model,
                                                         const std::vector<std::string>& query,
                                                         std::size_t k = 10);

/// Skips the most frequent 1% of ranks, then returns the next `n` words.
std::vector<std::string> select_medium_frequency(const Vocabulary& vocab, std::size_t n);

/// Text format: "V d" header, then "word f1 ... fd" with 6-decimal values.
void save_model(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_model(const std::string& path);

}  // namespace tweetmine
