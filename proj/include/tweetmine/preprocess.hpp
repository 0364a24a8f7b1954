#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tweetmine {

inline constexpr std::string_view kUrlTag = "URL";
inline constexpr std::string_view kUserTag = "USER";

/// Tokenizes a raw tweet.
///
/// URLs become the tag `URL`, @mentions the tag `USER`, a hashtag loses its
/// leading `#`, every ASCII punctuation character is emitted as a token of
/// its own, and everything except the two tags is lowercased. Bytes >= 0x80
/// are treated as word characters so UTF-8 text passes through unchanged.
std::vector<std::string> preprocess(std::string_view raw_text);

bool is_tag_token(std::string_view token);

/// Joins tokens with single spaces.
std::string detokenize(const std::vector<std::string>& tokens);

}  // namespace tweetmine
