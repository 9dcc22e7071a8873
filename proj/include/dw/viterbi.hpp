#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dw::tagger {

// Exact first-order decode. `emissions` is row-major positions x tags,
// `transitions` is from-major tags x tags. Among equal-scoring paths the one
// that is lexicographically smallest in tag indices, compared from the end of
// the sequence backwards, wins.
std::vector<std::size_t> viterbi(std::span<const double> emissions, std::span<const double> transitions,
                                 std::size_t num_tags);

double path_score(std::span<const double> emissions, std::span<const double> transitions, std::size_t num_tags,
                  std::span<const std::size_t> path);

}  // namespace dw::tagger
