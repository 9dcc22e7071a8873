#include <algorithm>
#include <numeric>
#include <random>

#include "dw/tagger.hpp"
#include "dw/viterbi.hpp"

namespace dw::tagger {

namespace {

struct Instance {
  std::vector<std::vector<std::uint32_t>> features;  // per token
  std::vector<std::size_t> gold;
};

TagSet choose_tag_set(std::span<const TagSequence> data, const TrainOptions& options) {
  if (options.tag_set) return *options.tag_set;
  for (const auto& s : data) {
    for (Tag t : s.tags) {
      if (t == Tag::Trg || t == Tag::Dst) return TagSet::coreference();
    }
  }
  return TagSet::base();
}

}  // namespace

TaggerModel train(std::span<const TagSequence> data, const TrainOptions& options) {
  if (data.empty()) throw TaggerError("training set is empty");
  if (options.epochs < 1) throw TaggerError("epochs must be >= 1");

  const TagSet tag_set = choose_tag_set(data, options);
  const std::size_t nt = tag_set.size();

  std::unordered_map<std::string, std::uint32_t> feature_ids;
  std::vector<std::string> feature_names;
  std::vector<Instance> instances;
  instances.reserve(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& seq = data[k];
    if (seq.tokens.size() != seq.tags.size()) {
      throw TaggerError("training sequence " + std::to_string(k) + ": tokens and tags differ in length");
    }
    Instance inst;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      auto idx = tag_set.index_of(seq.tags[i]);
      if (!idx) {
        throw TaggerError("training sequence " + std::to_string(k) + " uses tag " +
                          std::string(to_string(seq.tags[i])) + " outside the tag set");
      }
      inst.gold.push_back(*idx);
      std::vector<std::uint32_t> ids;
      for (auto& f : extract_features(seq.tokens, i)) {
        auto [it, inserted] = feature_ids.try_emplace(std::move(f), static_cast<std::uint32_t>(feature_names.size()));
        if (inserted) feature_names.push_back(it->first);
        ids.push_back(it->second);
      }
      inst.features.push_back(std::move(ids));
    }
    instances.push_back(std::move(inst));
  }

  const std::size_t nf = feature_names.size();
  // Averaging: keep the running weights and a step-weighted sum of updates;
  // the average is weights - sum / step.
  std::vector<double> weights(nf * nt, 0.0), weight_sums(nf * nt, 0.0);
  std::vector<double> trans(nt * nt, 0.0), trans_sums(nt * nt, 0.0);
  double step = 1.0;

  auto bump_feature = [&](std::uint32_t f, std::size_t t, double delta) {
    weights[f * nt + t] += delta;
    weight_sums[f * nt + t] += step * delta;
  };
  auto bump_transition = [&](std::size_t a, std::size_t b, double delta) {
    trans[a * nt + b] += delta;
    trans_sums[a * nt + b] += step * delta;
  };

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> epoch_accuracy;
  std::vector<double> em;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t correct = 0, total = 0;
    for (std::size_t k : order) {
      const Instance& inst = instances[k];
      const std::size_t n = inst.gold.size();
      if (n == 0) {
        step += 1;
        continue;
      }
      em.assign(n * nt, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto f : inst.features[i]) {
          const double* w = &weights[f * nt];
          for (std::size_t t = 0; t < nt; ++t) em[i * nt + t] += w[t];
        }
      }
      const auto pred = viterbi(em, trans, nt);
      for (std::size_t i = 0; i < n; ++i) correct += pred[i] == inst.gold[i];
      total += n;
      if (pred != inst.gold) {
        for (std::size_t i = 0; i < n; ++i) {
          if (pred[i] != inst.gold[i]) {
            for (auto f : inst.features[i]) {
              bump_feature(f, inst.gold[i], 1.0);
              bump_feature(f, pred[i], -1.0);
            }
          }
          if (i > 0 && (pred[i] != inst.gold[i] || pred[i - 1] != inst.gold[i - 1])) {
            bump_transition(inst.gold[i - 1], inst.gold[i], 1.0);
            bump_transition(pred[i - 1], pred[i], -1.0);
          }
        }
      }
      step += 1;
    }
    const double acc = total ? static_cast<double>(correct) / static_cast<double>(total) : 1.0;
    epoch_accuracy.push_back(acc);
    if (options.on_epoch) options.on_epoch(epoch + 1, acc);
  }

  TaggerModel model(tag_set);
  std::vector<double> row(nt);
  for (std::size_t f = 0; f < nf; ++f) {
    bool nonzero = false;
    for (std::size_t t = 0; t < nt; ++t) {
      row[t] = weights[f * nt + t] - weight_sums[f * nt + t] / step;
      nonzero = nonzero || row[t] != 0.0;
    }
    if (nonzero) model.set_feature_weights(feature_names[f], row);
  }
  for (std::size_t a = 0; a < nt; ++a) {
    for (std::size_t b = 0; b < nt; ++b) model.set_transition(a, b, trans[a * nt + b] - trans_sums[a * nt + b] / step);
  }
  TrainingMeta meta;
  meta.seed = options.seed;
  meta.epochs = options.epochs;
  meta.train_size = data.size();
  meta.epoch_accuracy = std::move(epoch_accuracy);
  model.set_meta(std::move(meta));
  return model;
}

}  // namespace dw::tagger
