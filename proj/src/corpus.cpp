#include "tweetmine/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_set>

#include "json.hpp"
#include "tweetmine/error.hpp"
#include "tweetmine/preprocess.hpp"

namespace tweetmine {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Positive: return "positive";
    case Label::Negative: return "negative";
    case Label::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label parse_label(std::string_view text) {
  if (text == "positive") return Label::Positive;
  if (text == "negative") return Label::Negative;
  if (text == "unlabeled" || text.empty()) return Label::Unlabeled;
  throw InvalidArgument("unknown label '" + std::string(text) + "'");
}

bool Corpus::add(Tweet tweet) {
  if (index_.count(tweet.id) != 0) return false;
  index_.emplace(tweet.id, tweets_.size());
  ++counts_[tweet.label];
  tweets_.push_back(std::move(tweet));
  return true;
}

std::size_t Corpus::count(Label label) const {
  auto it = counts_.find(label);
  return it == counts_.end() ? 0 : it->second;
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Label Corpus::set_label(std::size_t i, Label label) {
  Label old = tweets_.at(i).label;
  if (old == label) return old;
  if (--counts_[old] == 0) counts_.erase(old);
  ++counts_[label];
  tweets_[i].label = label;
  return old;
}

void Corpus::preprocess_all() {
  for (auto& t : tweets_) t.tokens = preprocess(t.raw_text);
}

std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (true) {
    cur.clear();
    if (i < n && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < n) {
        if (line[i] == '"') {
          if (i + 1 < n && line[i + 1] == '"') {
            cur.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        cur.push_back(line[i++]);
      }
      if (!closed) return std::nullopt;
      // Anything between the closing quote and the next comma is kept verbatim.
      while (i < n && line[i] != ',') cur.push_back(line[i++]);
    } else {
      while (i < n && line[i] != ',') cur.push_back(line[i++]);
    }
    fields.push_back(cur);
    if (i >= n) break;
    ++i;  // comma
  }
  return fields;
}

IngestResult ingest_sentiment140(const std::string& path, std::optional<std::size_t> limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  IngestResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (limit && result.corpus.size() >= *limit) break;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!fields || fields->size() != 6) {
      result.warnings.push_back("line " + std::to_string(lineno) + ": expected 6 fields");
      continue;
    }
    const auto& polarity = (*fields)[0];
    Tweet t;
    if (polarity == "0") {
      t.label = Label::Negative;
    } else if (polarity == "4") {
      t.label = Label::Positive;
    } else if (polarity == "2") {
      ++result.skipped;
      continue;
    } else {
      result.warnings.push_back("line " + std::to_string(lineno) + ": bad polarity '" + polarity + "'");
      continue;
    }
    t.id = (*fields)[1];
    t.raw_text = (*fields)[5];
    t.source = "sentiment140";
    std::string id = t.id;
    if (!result.corpus.add(std::move(t))) {
      result.warnings.push_back("line " + std::to_string(lineno) + ": duplicate id " + id);
    }
  }
  return result;
}

IngestResult ingest_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  IngestResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = "line " + std::to_string(lineno) + ": ";
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      result.warnings.push_back(where + "invalid JSON");
      continue;
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("text") || !rec["text"].is_string()) {
      result.warnings.push_back(where + "missing id/text");
      continue;
    }
    Tweet t;
    t.id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
    t.raw_text = rec["text"].get<std::string>();
    if (rec.contains("label") && rec["label"].is_string()) {
      try {
        t.label = parse_label(rec["label"].get<std::string>());
      } catch (const InvalidArgument& e) {
        result.warnings.push_back(where + e.what());
        continue;
      }
    }
    t.source = rec.value("source", std::string{});
    std::string id = t.id;
    if (!result.corpus.add(std::move(t))) {
      result.warnings.push_back(where + "duplicate id " + id);
    }
  }
  return result;
}

void write_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& t : corpus.tweets()) {
    nlohmann::json rec = {{"id", t.id}, {"text", t.raw_text}, {"label", to_string(t.label)}};
    if (!t.source.empty()) rec["source"] = t.source;
    out << rec.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

std::string dedup_key(std::string_view text) {
  std::string key;
  bool pending_space = false;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !key.empty();
      continue;
    }
    if (pending_space) key.push_back(' ');
    pending_space = false;
    key.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
  }
  return key;
}

Corpus dedup(const Corpus& corpus) {
  Corpus out;
  std::unordered_set<std::string> seen;
  for (const auto& t : corpus.tweets()) {
    if (seen.insert(dedup_key(t.raw_text)).second) out.add(t);
  }
  return out;
}

Corpus stratified_subsample(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("fraction must lie in (0, 1]");
  }
  if (corpus.count(Label::Unlabeled) != 0) {
    throw InvalidArgument("stratified_subsample needs every tweet labeled");
  }
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < corpus.size(); ++i) by_class[corpus[i].label].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<char> keep(corpus.size(), 0);
  for (auto& [label, idx] : by_class) {
    auto want = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
    if (want == 0) {
      throw InvalidArgument("fraction selects no tweets of class " + std::string(to_string(label)));
    }
    // Partial Fisher-Yates: the first `want` slots become the sample.
    for (std::size_t j = 0; j < want; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, idx.size() - 1);
      std::swap(idx[j], idx[pick(rng)]);
      keep[idx[j]] = 1;
    }
  }
  Corpus out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (keep[i]) out.add(corpus[i]);
  }
  return out;
}

}  // namespace tweetmine
