#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dw/tagger.hpp"

namespace dw::tagger {

namespace {

AblationTrial run_trial(std::span<const TagSequence> train_data, std::span<const TagSequence> validation,
                        double fraction, std::uint64_t seed, int epochs) {
  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(train_data.size()))));
  std::vector<TagSequence> subset;
  subset.reserve(keep);
  for (std::size_t i = 0; i < keep && i < order.size(); ++i) subset.push_back(train_data[order[i]]);

  TrainOptions opts;
  opts.epochs = epochs;
  opts.seed = seed;
  const auto model = train(subset, opts);
  EvalOptions eval_opts;
  eval_opts.measure_latency = false;
  eval_opts.parallel = false;

  AblationTrial trial;
  trial.fraction = fraction;
  trial.seed = seed;
  trial.train_size = subset.size();
  trial.report = evaluate(model, validation, eval_opts);
  return trial;
}

}  // namespace

std::vector<AblationTrial> run_ablation(std::span<const TagSequence> train_data,
                                        std::span<const TagSequence> validation, const AblationOptions& options) {
  if (train_data.empty() || validation.empty()) throw TaggerError("ablation needs training and validation data");
  for (double f : options.fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw TaggerError("ablation fractions must lie in (0, 1]");
  }
  const std::size_t nf = options.fractions.size();
  const std::size_t ns = options.seeds.size();
  std::vector<AblationTrial> trials(nf * ns);
  const long n = static_cast<long>(trials.size());
  if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      trials[i] = run_trial(train_data, validation, options.fractions[i / ns], options.seeds[i % ns], options.epochs);
    }
  } else {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      trials[i] = run_trial(train_data, validation, options.fractions[i / ns], options.seeds[i % ns], options.epochs);
    }
  }
  return trials;
}

std::map<double, double> mean_acc_inst(std::span<const AblationTrial> trials) {
  std::map<double, std::pair<double, int>> acc;
  for (const auto& t : trials) {
    acc[t.fraction].first += t.report.acc_inst;
    acc[t.fraction].second += 1;
  }
  std::map<double, double> out;
  for (const auto& [f, s] : acc) out[f] = s.first / s.second;
  return out;
}

}  // namespace dw::tagger
