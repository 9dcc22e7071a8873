#include <cctype>

#include "dw/tagger.hpp"

namespace dw::tagger {

namespace {

bool is_split_punct(char c) { return c == '.' || c == ',' || c == '?' || c == '!'; }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (is_split_punct(c)) {
      // 2.5 stays one token
      const bool decimal = c == '.' && !cur.empty() && is_digit(cur.back()) && i + 1 < text.size() &&
                           is_digit(text[i + 1]);
      if (decimal) {
        cur.push_back(c);
      } else {
        flush();
        out.emplace_back(1, c);
      }
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  if (out.empty()) throw TaggerError("cannot tokenize empty text");
  return out;
}

int count_sentences(std::span<const std::string> tokens) {
  int n = 0;
  bool open = false;
  for (const auto& t : tokens) {
    if (t == "." || t == "?" || t == "!") {
      if (open) ++n;
      open = false;
    } else {
      open = true;
    }
  }
  return n + (open ? 1 : 0);
}

}  // namespace dw::tagger
