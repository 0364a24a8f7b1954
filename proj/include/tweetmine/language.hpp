#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tweetmine {

/// Rank-ordered character 1..3-gram profile of one language.
struct LanguageProfile {
  std::string lang_code;
  std::unordered_map<std::string, int> ngram_ranks;  // ranks 1..size()

  std::size_t size() const { return ngram_ranks.size(); }

  /// Builds a profile from (word, frequency) pairs, e.g. a frequency list.
  static LanguageProfile from_weighted_words(std::string lang_code,
                                             const std::vector<std::pair<std::string, double>>& words,
                                             std::size_t max_size = 300);
  /// Builds a profile from running text.
  static LanguageProfile from_text(std::string lang_code, std::string_view text,
                                   std::size_t max_size = 300);

  /// Text format: first line is the language code, then one n-gram per line
  /// in rank order. Spaces inside n-grams are written as '_'.
  static LanguageProfile load(const std::string& path);
  void save(const std::string& path) const;
};

struct LanguageGuess {
  std::string lang_code;
  double score = 0.0;  // 1 = document profile matches the language profile exactly
};

/// Nearest-profile classifier using the out-of-place rank distance.
class LanguageIdentifier {
 public:
  explicit LanguageIdentifier(std::vector<LanguageProfile> profiles);

  /// Profiles compiled into the library (en, sw, fr, es, de).
  static const LanguageIdentifier& builtin();

  void add(LanguageProfile profile);
  const std::vector<LanguageProfile>& profiles() const { return profiles_; }

  /// Throws InvalidArgument on text that is empty after whitespace strip.
  /// Fewer than 3 characters yields ("und", 0).
  LanguageGuess detect(std::string_view text) const;

 private:
  std::vector<LanguageProfile> profiles_;
};

LanguageGuess detect_language(std::string_view text);

/// Built-in frequency lists used to build the shipped profiles.
const std::vector<std::pair<std::string, std::vector<std::string>>>& builtin_word_lists();

}  // namespace tweetmine
