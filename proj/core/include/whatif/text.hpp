#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace whatif::text {

/// Lowercases, splits on whitespace and strips leading/trailing punctuation
/// from every token. Inner hyphens and apostrophes survive ("north-west").
/// Throws ParseError("empty description") when no token remains.
std::vector<std::string> tokenize(std::string_view text);

/// Same as tokenize but returns an empty list instead of throwing.
std::vector<std::string> words(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace whatif::text
