#include "dw/viterbi.hpp"

#include <cassert>
#include <limits>

namespace dw::tagger {

std::vector<std::size_t> viterbi(std::span<const double> emissions, std::span<const double> transitions,
                                 std::size_t num_tags) {
  const std::size_t n = num_tags ? emissions.size() / num_tags : 0;
  assert(transitions.size() == num_tags * num_tags);
  if (n == 0) return {};

  std::vector<double> delta(n * num_tags);
  std::vector<std::size_t> back(n * num_tags, 0);
  for (std::size_t t = 0; t < num_tags; ++t) delta[t] = emissions[t];

  for (std::size_t i = 1; i < n; ++i) {
    const double* prev = &delta[(i - 1) * num_tags];
    for (std::size_t t = 0; t < num_tags; ++t) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t p = 0; p < num_tags; ++p) {
        const double s = prev[p] + transitions[p * num_tags + t];
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      delta[i * num_tags + t] = best + emissions[i * num_tags + t];
      back[i * num_tags + t] = arg;
    }
  }

  std::vector<std::size_t> path(n);
  const double* last = &delta[(n - 1) * num_tags];
  std::size_t arg = 0;
  for (std::size_t t = 1; t < num_tags; ++t) {
    if (last[t] > last[arg]) arg = t;
  }
  path[n - 1] = arg;
  for (std::size_t i = n - 1; i > 0; --i) path[i - 1] = back[i * num_tags + path[i]];
  return path;
}

double path_score(std::span<const double> emissions, std::span<const double> transitions, std::size_t num_tags,
                  std::span<const std::size_t> path) {
  double s = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    s += emissions[i * num_tags + path[i]];
    if (i > 0) s += transitions[path[i - 1] * num_tags + path[i]];
  }
  return s;
}

}  // namespace dw::tagger
