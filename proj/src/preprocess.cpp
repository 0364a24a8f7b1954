#include "tweetmine/preprocess.hpp"

#include <array>
#include <cctype>

namespace tweetmine {
namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

bool is_word_char(unsigned char c) {
  return c >= 0x80 || std::isalnum(c) != 0 || c == '_';
}

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    auto c = static_cast<unsigned char>(text[pos + i]);
    if (std::tolower(c) != prefix[i]) return false;
  }
  return true;
}

bool url_at(std::string_view text, std::size_t pos) {
  static constexpr std::array<std::string_view, 3> kPrefixes = {"http://", "https://", "www."};
  for (auto p : kPrefixes) {
    if (starts_with_ci(text, pos, p)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> preprocess(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto at = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };

  while (i < n) {
    if (is_space(at(i))) {
      ++i;
      continue;
    }
    if (url_at(text, i)) {
      while (i < n && !is_space(at(i))) ++i;
      out.emplace_back(kUrlTag);
      continue;
    }
    if (text[i] == '@' && i + 1 < n && is_word_char(at(i + 1))) {
      ++i;
      while (i < n && is_word_char(at(i))) ++i;
      out.emplace_back(kUserTag);
      continue;
    }
    if (text[i] == '#' && i + 1 < n && is_word_char(at(i + 1))) ++i;
    if (is_word_char(at(i))) {
      std::string word;
      while (i < n && is_word_char(at(i))) {
        auto c = at(i);
        word.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
        ++i;
      }
      out.push_back(std::move(word));
      continue;
    }
    out.emplace_back(1, text[i]);
    ++i;
  }
  return out;
}

bool is_tag_token(std::string_view token) { return token == kUrlTag || token == kUserTag; }

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace tweetmine
