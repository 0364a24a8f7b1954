#include "tweetmine/language.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>

#include "tweetmine/error.hpp"

namespace tweetmine {
namespace {

bool is_letter(unsigned char c) { return c >= 0x80 || std::isalpha(c) != 0; }

std::vector<std::string> letter_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_letter(c)) {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

void count_ngrams(const std::string& word, double weight, std::map<std::string, double>& counts) {
  const std::string padded = " " + word + " ";
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      auto gram = padded.substr(i, n);
      if (gram == " ") continue;
      counts[gram] += weight;
    }
  }
}

std::unordered_map<std::string, int> rank(const std::map<std::string, double>& counts,
                                          std::size_t max_size) {
  std::vector<std::pair<std::string, double>> items(counts.begin(), counts.end());
  // map iteration is lexicographic, so stable_sort keeps ties lexicographic.
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (items.size() > max_size) items.resize(max_size);
  std::unordered_map<std::string, int> ranks;
  for (std::size_t i = 0; i < items.size(); ++i) ranks.emplace(items[i].first, static_cast<int>(i + 1));
  return ranks;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (char ch : s) {
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace

LanguageProfile LanguageProfile::from_weighted_words(
    std::string lang_code, const std::vector<std::pair<std::string, double>>& words,
    std::size_t max_size) {
  std::map<std::string, double> counts;
  for (const auto& [w, weight] : words) {
    for (const auto& part : letter_words(w)) count_ngrams(part, weight, counts);
  }
  return {std::move(lang_code), rank(counts, max_size)};
}

LanguageProfile LanguageProfile::from_text(std::string lang_code, std::string_view text,
                                           std::size_t max_size) {
  std::map<std::string, double> counts;
  for (const auto& w : letter_words(text)) count_ngrams(w, 1.0, counts);
  return {std::move(lang_code), rank(counts, max_size)};
}

LanguageProfile LanguageProfile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  LanguageProfile p;
  if (!std::getline(in, p.lang_code) || p.lang_code.empty()) {
    throw FormatError(path + ": missing language code");
  }
  std::string line;
  int r = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), '_', ' ');
    if (!p.ngram_ranks.emplace(line, ++r).second) {
      throw FormatError(path + ": repeated n-gram '" + line + "'");
    }
  }
  return p;
}

void LanguageProfile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  std::vector<std::string> ordered(ngram_ranks.size());
  for (const auto& [g, r] : ngram_ranks) ordered.at(static_cast<std::size_t>(r - 1)) = g;
  out << lang_code << '\n';
  for (auto g : ordered) {
    std::replace(g.begin(), g.end(), ' ', '_');
    out << g << '\n';
  }
}

LanguageIdentifier::LanguageIdentifier(std::vector<LanguageProfile> profiles)
    : profiles_(std::move(profiles)) {}

void LanguageIdentifier::add(LanguageProfile profile) { profiles_.push_back(std::move(profile)); }

const LanguageIdentifier& LanguageIdentifier::builtin() {
  static const LanguageIdentifier instance = [] {
    std::vector<LanguageProfile> profiles;
    for (const auto& [code, words] : builtin_word_lists()) {
      std::vector<std::pair<std::string, double>> weighted;
      weighted.reserve(words.size());
      // Zipf weights stand in for corpus frequencies of a rank-ordered list.
      for (std::size_t i = 0; i < words.size(); ++i) {
        weighted.emplace_back(words[i], 1.0 / static_cast<double>(i + 1));
      }
      profiles.push_back(LanguageProfile::from_weighted_words(code, weighted));
    }
    return LanguageIdentifier(std::move(profiles));
  }();
  return instance;
}

LanguageGuess LanguageIdentifier::detect(std::string_view text) const {
  auto first = text.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) throw InvalidArgument("detect_language: empty text");
  auto last = text.find_last_not_of(" \t\r\n\f\v");
  auto stripped = text.substr(first, last - first + 1);
  if (utf8_length(stripped) < 3 || profiles_.empty()) return {"und", 0.0};

  std::map<std::string, double> counts;
  for (const auto& w : letter_words(stripped)) count_ngrams(w, 1.0, counts);
  if (counts.empty()) return {"und", 0.0};

  LanguageGuess best{"und", 0.0};
  double best_distance = -1.0;
  for (const auto& profile : profiles_) {
    const auto doc = rank(counts, profile.size());
    const double penalty = static_cast<double>(profile.size());
    double distance = 0.0;
    for (const auto& [gram, r] : doc) {
      auto it = profile.ngram_ranks.find(gram);
      distance += it == profile.ngram_ranks.end() ? penalty : std::abs(r - it->second);
    }
    const double max_distance = penalty * static_cast<double>(doc.size());
    if (best_distance < 0.0 || distance < best_distance) {
      best_distance = distance;
      best = {profile.lang_code, max_distance > 0.0 ? 1.0 - distance / max_distance : 0.0};
    }
  }
  return best;
}

LanguageGuess detect_language(std::string_view text) { return LanguageIdentifier::builtin().detect(text); }

}  // namespace tweetmine
