#pragma once

#include <ostream>
#include <string>

#include "dw/datagen.hpp"
#include "dw/tagger.hpp"
#include "dw/tags.hpp"

namespace dw::testing {

// "word/Tag word word/Tag": untagged words are O.
inline TagSequence tagged(const std::string& line) {
  TagSequence s;
  std::size_t start = 0;
  while (start < line.size()) {
    auto stop = line.find(' ', start);
    if (stop == std::string::npos) stop = line.size();
    const std::string item = line.substr(start, stop - start);
    const auto slash = item.find('/');
    s.tokens.push_back(item.substr(0, slash));
    s.tags.push_back(slash == std::string::npos ? Tag::O : *tag_from_string(item.substr(slash + 1)));
    start = stop + 1;
  }
  return s;
}

// Tagger trained once per test binary on the seed-7 training split.
inline const tagger::TaggerModel& trained_model() {
  static const tagger::TaggerModel model = [] {
    const auto corpus = datagen::generate_dataset(default_fixture(), 1584, 7);
    const auto split = datagen::split_dataset(corpus, 7);
    return tagger::train(datagen::sequences(split.train));
  }();
  return model;
}

}  // namespace dw::testing

namespace dw {

// Readable gtest failure output.
inline void PrintTo(const TagSequence& s, std::ostream* os) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    *os << s.tokens[i];
    if (i < s.tags.size() && s.tags[i] != Tag::O) *os << "/" << to_string(s.tags[i]);
    *os << " ";
  }
}

}  // namespace dw
