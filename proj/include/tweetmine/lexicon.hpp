#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tweetmine/corpus.hpp"

namespace tweetmine {

enum class AcceptedBy { Seed, Human, Auto };

struct TermProvenance {
  int round = 0;
  double score = 0.0;
  AcceptedBy accepted_by = AcceptedBy::Seed;
};

/// Keyword list grown over bootstrap rounds. Seeds sit at round 0.
class Lexicon {
 public:
  Lexicon() = default;
  static Lexicon from_seeds(const std::vector<std::string>& seeds);

  const std::map<std::string, TermProvenance>& entries() const { return entries_; }
  std::set<std::string> terms() const;
  bool contains(const std::string& term) const { return entries_.count(term) != 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  int round() const { return round_; }

  /// One provenance record per line: {"term","round","score","accepted_by"}.
  void save_jsonl(const std::string& path) const;
  static Lexicon load_jsonl(const std::string& path);

 private:
  friend struct LexiconAccess;
  std::map<std::string, TermProvenance> entries_;
  int round_ = 0;
};

struct CandidateTerm {
  std::string term;
  double score = 0.0;
  std::size_t matched_count = 0;
  std::size_t unmatched_count = 0;
};

/// Smoothed log-odds of a term between the matched and unmatched partitions.
double candidate_log_odds(std::size_t matched_count, std::size_t matched_total,
                          std::size_t unmatched_count, std::size_t unmatched_total);

/// Ids of preprocessed tweets containing at least one lexicon term.
std::set<std::string> match_tweets(const Corpus& corpus, const Lexicon& lexicon);

/// Terms seen in >= 2 matched tweets, minus lexicon and tag tokens, ranked by
/// descending log-odds (ties lexicographic), at most `top_k` of them.
std::vector<CandidateTerm> score_candidates(const Corpus& corpus,
                                            const std::set<std::string>& matched_ids,
                                            const Lexicon& lexicon, std::size_t top_k);

struct ExpandResult {
  Lexicon lexicon;
  std::vector<std::string> warnings;
};

/// Adds `accepted` terms (scores looked up in `candidates`) as the next round.
ExpandResult expand_round(const Lexicon& lexicon, const std::vector<std::string>& accepted,
                          const std::vector<CandidateTerm>& candidates,
                          AcceptedBy accepted_by = AcceptedBy::Human);

/// Candidates scoring at or above `threshold`, for unattended runs.
std::vector<std::string> auto_accept(const std::vector<CandidateTerm>& candidates, double threshold);

}  // namespace tweetmine
