#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hare::text {

// Lowercased runs of ASCII letters/digits. Bytes >= 0x80 are kept inside
// tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view s);

bool is_stopword(std::string_view token);

// tokenize() minus stopwords.
std::vector<std::string> content_tokens(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace hare::text
