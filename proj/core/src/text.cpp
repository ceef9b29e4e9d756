#include "whatif/text.hpp"

#include "whatif/error.hpp"

#include <cctype>

namespace whatif::text {

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i, e = j;
    while (b < e && std::ispunct(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) {
      std::string token(text.substr(b, e - b));
      for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(token));
    }
    i = j;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  auto out = words(text);
  if (out.empty()) throw ParseError("empty description");
  return out;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace whatif::text
