#include "tweetmine/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "tweetmine/error.hpp"
#include "tweetmine/preprocess.hpp"

namespace tweetmine {

struct LexiconAccess {
  static auto& entries(Lexicon& l) { return l.entries_; }
  static int& round(Lexicon& l) { return l.round_; }
};

namespace {

std::string_view by_name(AcceptedBy a) {
  switch (a) {
    case AcceptedBy::Seed: return "seed";
    case AcceptedBy::Human: return "human";
    case AcceptedBy::Auto: return "auto";
  }
  return "seed";
}

AcceptedBy parse_by(const std::string& s) {
  if (s == "seed") return AcceptedBy::Seed;
  if (s == "human") return AcceptedBy::Human;
  if (s == "auto") return AcceptedBy::Auto;
  throw FormatError("unknown accepted_by '" + s + "'");
}

}  // namespace

Lexicon Lexicon::from_seeds(const std::vector<std::string>& seeds) {
  Lexicon lex;
  for (const auto& s : seeds) lex.entries_.emplace(s, TermProvenance{0, 0.0, AcceptedBy::Seed});
  return lex;
}

std::set<std::string> Lexicon::terms() const {
  std::set<std::string> out;
  for (const auto& [t, _] : entries_) out.insert(t);
  return out;
}

void Lexicon::save_jsonl(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& [term, p] : entries_) {
    nlohmann::json rec = {{"term", term}, {"round", p.round}, {"score", p.score},
                          {"accepted_by", by_name(p.accepted_by)}};
    out << rec.dump() << '\n';
  }
}

Lexicon Lexicon::load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      TermProvenance p{rec.at("round").get<int>(), rec.value("score", 0.0),
                       parse_by(rec.at("accepted_by").get<std::string>())};
      lex.round_ = std::max(lex.round_, p.round);
      lex.entries_[rec.at("term").get<std::string>()] = p;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ": " + e.what());
    }
  }
  return lex;
}

double candidate_log_odds(std::size_t matched_count, std::size_t matched_total,
                          std::size_t unmatched_count, std::size_t unmatched_total) {
  auto m = static_cast<double>(matched_count), mt = static_cast<double>(matched_total);
  auto u = static_cast<double>(unmatched_count), ut = static_cast<double>(unmatched_total);
  return std::log((m + 1.0) / (mt + 2.0)) - std::log((u + 1.0) / (ut + 2.0));
}

std::set<std::string> match_tweets(const Corpus& corpus, const Lexicon& lexicon) {
  if (lexicon.empty()) throw InvalidArgument("match_tweets: empty lexicon");
  std::set<std::string> ids;
  for (const auto& t : corpus.tweets()) {
    for (const auto& tok : t.tokens) {
      if (lexicon.contains(tok)) {
        ids.insert(t.id);
        break;
      }
    }
  }
  return ids;
}

std::vector<CandidateTerm> score_candidates(const Corpus& corpus,
                                            const std::set<std::string>& matched_ids,
                                            const Lexicon& lexicon, std::size_t top_k) {
  if (matched_ids.empty()) throw InvalidArgument("score_candidates: no matched tweets");
  for (const auto& id : matched_ids) {
    if (!corpus.contains(id)) throw InvalidArgument("score_candidates: unknown tweet id " + id);
  }
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> df;  // (matched, unmatched)
  std::size_t matched_total = 0, unmatched_total = 0;
  for (const auto& t : corpus.tweets()) {
    const bool matched = matched_ids.count(t.id) != 0;
    (matched ? matched_total : unmatched_total) += 1;
    std::unordered_set<std::string> seen(t.tokens.begin(), t.tokens.end());
    for (const auto& tok : seen) {
      auto& c = df[tok];
      (matched ? c.first : c.second) += 1;
    }
  }
  std::vector<CandidateTerm> out;
  for (const auto& [term, c] : df) {
    if (c.first < 2 || lexicon.contains(term) || is_tag_token(term)) continue;
    out.push_back({term, candidate_log_odds(c.first, matched_total, c.second, unmatched_total),
                   c.first, c.second});
  }
  std::sort(out.begin(), out.end(), [](const CandidateTerm& a, const CandidateTerm& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.term < b.term;
  });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

ExpandResult expand_round(const Lexicon& lexicon, const std::vector<std::string>& accepted,
                          const std::vector<CandidateTerm>& candidates, AcceptedBy accepted_by) {
  ExpandResult result{lexicon, {}};
  auto& entries = LexiconAccess::entries(result.lexicon);
  int& round = LexiconAccess::round(result.lexicon);
  ++round;
  for (const auto& term : accepted) {
    if (entries.count(term) != 0) {
      result.warnings.push_back("term '" + term + "' already in lexicon");
      continue;
    }
    auto it = std::find_if(candidates.begin(), candidates.end(),
                           [&](const CandidateTerm& c) { return c.term == term; });
    if (it == candidates.end()) {
      result.warnings.push_back("term '" + term + "' is not a scored candidate");
      continue;
    }
    entries.emplace(term, TermProvenance{round, it->score, accepted_by});
  }
  return result;
}

std::vector<std::string> auto_accept(const std::vector<CandidateTerm>& candidates, double threshold) {
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    if (c.score >= threshold) out.push_back(c.term);
  }
  return out;
}

}  // namespace tweetmine
