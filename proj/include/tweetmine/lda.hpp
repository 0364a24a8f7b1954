#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tweetmine/corpus.hpp"

namespace tweetmine {

struct LdaConfig {
  std::size_t topics = 10;
  std::optional<double> alpha;  // 50 / K when unset
  double beta = 0.01;
  int sweeps = 1000;
  std::uint64_t seed = 0;
  // Average phi/theta over this many final sweeps; 0 or 1 reads the last sample.
  int average_last = 0;
  // Recount the caches from z after every sweep and throw on mismatch.
  bool verify_counts = false;
};

struct TopicModel {
  std::size_t K = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocab;                // word id -> word
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::uint32_t>> words;  // per doc, word ids in token order
  std::vector<std::vector<std::uint32_t>> z;      // per doc, topic of each token
  std::vector<std::vector<double>> phi;           // K x V
  std::vector<std::vector<double>> theta;         // D x K

  std::size_t V() const { return vocab.size(); }
  std::size_t D() const { return doc_ids.size(); }
  std::optional<std::size_t> doc_index(std::string_view id) const;
};

/// Unnormalized collapsed Gibbs weight for one topic, with every count
/// already excluding the token being resampled.
double gibbs_weight(double n_dk, double n_kw, double n_k, std::size_t V, double alpha, double beta);

/// Documents are token lists. Empty documents are kept and get a uniform theta.
/// Throws InvalidArgument when K is 0 or exceeds the token count, DataError
/// when there are no tokens at all.
TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& doc_ids,
                   const LdaConfig& config);
/// Uses tweet tokens as they are; stop words are not removed here.
TopicModel fit_lda(const Corpus& corpus, const LdaConfig& config);

/// Default topic counts, and the additional ones for large corpora.
std::vector<std::size_t> default_topic_counts(bool large_preset = false);

/// One model per K, returned in input order. `threads` > 1 fits several K at
/// once; each chain is seeded identically regardless.
std::vector<TopicModel> sweep_topic_counts(const Corpus& corpus, const std::vector<std::size_t>& topic_counts,
                                           const LdaConfig& base, unsigned threads = 1);

/// Highest-phi words, descending, ties lexicographic. Throws InvalidArgument
/// for topic >= K.
std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, std::size_t topic, std::size_t k);

struct TopicAnnotation {
  std::string tweet_id;
  std::vector<std::pair<std::string, std::uint32_t>> tokens;
};

/// Throws InvalidArgument for an id that was not in the training corpus.
TopicAnnotation annotate(const TopicModel& model, std::string_view tweet_id);
/// "word(k) word(k) ...".
std::string render(const TopicAnnotation& annotation);
/// Ids of documents in which `word` was assigned `topic`, in corpus order.
std::vector<std::string> search(const TopicModel& model, std::string_view word, std::uint32_t topic);

/// K, topic, rank (1-based), word, probability.
void write_topic_report(const std::vector<TopicModel>& models, std::size_t top_k, const std::string& path);
/// One `{"id","tokens":[[word,topic],...]}` record per document.
void write_annotations_jsonl(const TopicModel& model, const std::string& path);

}  // namespace tweetmine
