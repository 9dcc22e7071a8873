#include <algorithm>
#include <cctype>

#include "dw/tagger.hpp"

namespace dw::tagger {

namespace {

constexpr std::string_view kBegin = "<s>";
constexpr std::string_view kEnd = "</s>";
constexpr int kLeftWindow = 6;
constexpr int kRightWindow = 3;

std::string shape_of(std::string_view w) {
  std::string s;
  s.reserve(w.size());
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      s.push_back('d');
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      s.push_back('x');
    } else {
      s.push_back(c);
    }
  }
  return s;
}

bool is_noun(std::string_view w) {
  return w == "stud" || w == "panel" || w == "drywall" || w == "piece" || w == "it" || w == "one" || w == "its";
}

bool is_direction(std::string_view w) {
  return w == "left" || w == "right" || w == "leftmost" || w == "rightmost" || w == "middle" || w == "center" ||
         w == "far";
}

bool is_boundary(std::string_view w) { return w == "." || w == "?" || w == "!"; }

bool all_digits(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::vector<std::string> extract_features(std::span<const std::string> tokens, std::size_t position) {
  const auto n = static_cast<long>(tokens.size());
  const auto i = static_cast<long>(position);
  auto word_at = [&](long k) -> std::string_view {
    if (k < 0) return kBegin;
    if (k >= n) return kEnd;
    return tokens[static_cast<std::size_t>(k)];
  };
  const std::string_view w = tokens[position];

  std::vector<std::string> f;
  f.reserve(40);
  f.emplace_back("bias");
  f.push_back("w=" + std::string(w));
  f.push_back("shape=" + shape_of(w));
  if (all_digits(w)) {
    f.emplace_back("num");
    if (w.size() == 6) f.emplace_back("six_digit");
  }
  for (std::size_t k = 1; k <= 4 && k <= w.size(); ++k) {
    f.push_back("p" + std::to_string(k) + "=" + std::string(w.substr(0, k)));
  }
  for (std::size_t k = 1; k <= 3 && k <= w.size(); ++k) {
    f.push_back("s" + std::to_string(k) + "=" + std::string(w.substr(w.size() - k)));
  }
  f.push_back("w-1=" + std::string(word_at(i - 1)));
  f.push_back("w-2=" + std::string(word_at(i - 2)));
  f.push_back("w+1=" + std::string(word_at(i + 1)));
  f.push_back("w+2=" + std::string(word_at(i + 2)));
  f.push_back("w-1|w=" + std::string(word_at(i - 1)) + "|" + std::string(w));
  f.push_back("w|w+1=" + std::string(w) + "|" + std::string(word_at(i + 1)));
  f.push_back("w-2|w-1=" + std::string(word_at(i - 2)) + "|" + std::string(word_at(i - 1)));
  f.push_back("w+1|w+2=" + std::string(word_at(i + 1)) + "|" + std::string(word_at(i + 2)));
  for (long k = std::max(0L, i - kLeftWindow); k < i; ++k) f.push_back("L=" + std::string(word_at(k)));
  for (long k = i + 1; k <= std::min(n - 1, i + kRightWindow); ++k) f.push_back("R=" + std::string(word_at(k)));

  // Nearest anchoring noun on each side and nearest direction word to the
  // left, within the sentence. These separate e.g. "left to the stud 500103"
  // (reference) from "to the stud 500103" (destination id).
  auto nearest = [&](long from, long step, int limit, auto pred) -> std::string_view {
    for (long k = from, taken = 0; k >= 0 && k < n && taken < limit; k += step, ++taken) {
      const std::string_view x = tokens[static_cast<std::size_t>(k)];
      if (is_boundary(x)) break;
      if (pred(x)) return x;
    }
    return "-";
  };
  const auto lnoun = nearest(i - 1, -1, 8, is_noun);
  const auto rnoun = nearest(i + 1, 1, 5, is_noun);
  // Only a plain step direction can introduce a reference; "far right" and
  // "middle" name a position on their own.
  std::string_view ldir = "-";
  for (long k = i - 1; k >= 0 && k >= i - 5; --k) {
    const std::string_view x = tokens[static_cast<std::size_t>(k)];
    if (is_boundary(x)) break;
    if (is_direction(x)) {
      const bool step = (x == "left" || x == "right") && !(k > 0 && tokens[static_cast<std::size_t>(k - 1)] == "far");
      ldir = step ? x : "ext";
      break;
    }
  }
  const std::string cls = all_digits(w) ? "id" : is_direction(w) ? "dir" : "w";
  f.push_back("lnoun=" + std::string(lnoun));
  f.push_back("rnoun=" + std::string(rnoun));
  f.push_back("ldir=" + std::string(ldir));
  f.push_back(cls + "|lnoun=" + std::string(lnoun));
  f.push_back(cls + "|rnoun=" + std::string(rnoun));
  f.push_back(cls + "|ldir=" + std::string(ldir));
  // bag features repeat when a word recurs in the window; keep one copy
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

}  // namespace dw::tagger
