#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dw/tagger.hpp"

namespace dw::tagger {

std::vector<TagSequence> predict_batch_serial(const TaggerModel& model,
                                              std::span<const std::vector<std::string>> inputs) {
  std::vector<TagSequence> out;
  out.reserve(inputs.size());
  for (const auto& tokens : inputs) out.push_back(model.predict(tokens));
  return out;
}

std::vector<TagSequence> predict_batch(const TaggerModel& model, std::span<const std::vector<std::string>> inputs) {
  std::vector<TagSequence> out(inputs.size());
  const long n = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = model.predict(inputs[static_cast<std::size_t>(i)]);
  }
  return out;
}

double percent_2dp(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

EvalReport make_report(std::size_t total_words, std::size_t n_w, std::size_t total_instructions, std::size_t n_l) {
  EvalReport r;
  r.total_words = total_words;
  r.total_instructions = total_instructions;
  r.n_w = n_w;
  r.n_l = n_l;
  r.acc_word = total_words ? static_cast<double>(total_words - n_w) / static_cast<double>(total_words) : 1.0;
  r.acc_inst =
      total_instructions ? static_cast<double>(total_instructions - n_l) / static_cast<double>(total_instructions) : 1.0;
  return r;
}

EvalReport evaluate_predictions(std::span<const TagSequence> gold, std::span<const TagSequence> predicted) {
  if (gold.size() != predicted.size()) {
    throw TaggerError("evaluation: " + std::to_string(gold.size()) + " gold sequences but " +
                      std::to_string(predicted.size()) + " predictions");
  }
  std::size_t words = 0, n_w = 0, n_l = 0;
  std::map<Tag, std::size_t> gold_counts, errors;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& g = gold[k];
    const auto& p = predicted[k];
    if (g.tags.size() != p.tags.size() || g.tokens.size() != g.tags.size()) {
      throw TaggerError("evaluation: sequence " + std::to_string(k) + " has mismatched lengths");
    }
    bool wrong = false;
    for (std::size_t i = 0; i < g.tags.size(); ++i) {
      ++gold_counts[g.tags[i]];
      if (g.tags[i] != p.tags[i]) {
        ++errors[g.tags[i]];
        ++n_w;
        wrong = true;
      }
    }
    words += g.tags.size();
    n_l += wrong;
  }
  EvalReport r = make_report(words, n_w, gold.size(), n_l);
  r.gold_counts = std::move(gold_counts);
  r.per_tag_errors = std::move(errors);
  for (const auto& g : gold) ++r.instructions_by_sentence_count[count_sentences(g.tokens)];
  return r;
}

EvalReport evaluate(const TaggerModel& model, std::span<const TagSequence> gold, const EvalOptions& options) {
  if (gold.empty()) throw TaggerError("evaluation set is empty");
  std::vector<std::vector<std::string>> inputs;
  inputs.reserve(gold.size());
  for (std::size_t k = 0; k < gold.size(); ++k) {
    for (Tag t : gold[k].tags) {
      if (!model.tag_set().contains(t)) {
        throw TaggerError("tag-set mismatch: sequence " + std::to_string(k) + " uses " + std::string(to_string(t)) +
                          ", which the model does not predict");
      }
    }
    inputs.push_back(gold[k].tokens);
  }
  const auto predicted = options.parallel ? predict_batch(model, inputs) : predict_batch_serial(model, inputs);
  EvalReport r = evaluate_predictions(gold, predicted);

  if (options.measure_latency) {
    using clock = std::chrono::steady_clock;
    for (const auto& tokens : inputs) (void)model.predict(tokens);  // warm-up
    std::map<int, double> sum;
    double total = 0;
    for (const auto& tokens : inputs) {
      const auto t0 = clock::now();
      auto seq = model.predict(tokens);
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      (void)seq;
      total += dt;
      sum[count_sentences(tokens)] += dt;
    }
    r.mean_latency = total / static_cast<double>(inputs.size());
    for (const auto& [k, s] : sum) {
      r.latency_by_sentence_count[k] = s / static_cast<double>(r.instructions_by_sentence_count[k]);
    }
  }
  return r;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["total_words"] = r.total_words;
  j["total_instructions"] = r.total_instructions;
  j["n_w"] = r.n_w;
  j["n_l"] = r.n_l;
  j["acc_word"] = percent_2dp(r.acc_word);
  j["acc_inst"] = percent_2dp(r.acc_inst);
  auto tags = nlohmann::json::array();
  for (const auto& [tag, count] : r.gold_counts) {
    auto it = r.per_tag_errors.find(tag);
    tags.push_back({{"tag", to_string(tag)},
                    {"gold_words", count},
                    {"errors", it == r.per_tag_errors.end() ? 0 : it->second}});
  }
  j["per_tag"] = tags;
  j["mean_latency_s"] = r.mean_latency;
  auto lat = nlohmann::json::array();
  for (const auto& [k, n] : r.instructions_by_sentence_count) {
    auto it = r.latency_by_sentence_count.find(k);
    lat.push_back({{"sentences", k},
                   {"instructions", n},
                   {"mean_latency_s", it == r.latency_by_sentence_count.end() ? 0.0 : it->second}});
  }
  j["latency_by_sentence_count"] = lat;
  return j;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "N_w  Acc_word   N_l  Acc_inst\n";
  out << std::left << std::setw(5) << r.n_w << percent_2dp(r.acc_word) << "%    " << std::setw(5) << r.n_l
      << percent_2dp(r.acc_inst) << "%\n";
  out << "Acc_word = (" << r.total_words << " - N_w) / " << r.total_words << ", Acc_inst = (" << r.total_instructions
      << " - N_l) / " << r.total_instructions << "\n\n";
  out << "Tag       Gold words  Incorrect\n";
  std::size_t total_gold = 0, total_err = 0;
  for (const auto& [tag, count] : r.gold_counts) {
    auto it = r.per_tag_errors.find(tag);
    const std::size_t err = it == r.per_tag_errors.end() ? 0 : it->second;
    total_gold += count;
    total_err += err;
    out << std::setw(10) << to_string(tag) << std::setw(12) << count << (err ? std::to_string(err) : "-") << '\n';
  }
  out << std::setw(10) << "TOTAL" << std::setw(12) << total_gold << total_err << "\n";
  if (!r.latency_by_sentence_count.empty()) {
    out << "\nSentences  Instructions  Mean latency (s)\n";
    out << std::setprecision(6);
    for (const auto& [k, n] : r.instructions_by_sentence_count) {
      out << std::setw(11) << k << std::setw(14) << n << r.latency_by_sentence_count.at(k) << '\n';
    }
    out << "all        " << std::setw(14) << r.total_instructions << r.mean_latency << '\n';
  }
  return out.str();
}

}  // namespace dw::tagger
