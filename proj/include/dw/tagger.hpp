#pragma once

// Slot filling: a first-order linear-chain tagger trained as an averaged
// structured perceptron and decoded exactly with Viterbi.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dw/error.hpp"
#include "dw/tags.hpp"

namespace dw::tagger {

class TaggerError : public Error {
 public:
  using Error::Error;
};

// Lowercased word tokens. `. , ? !` become their own tokens; hyphenated
// compounds, digit strings and decimals stay whole. Throws TaggerError on
// empty or whitespace-only text.
std::vector<std::string> tokenize(std::string_view text);

// Number of sentences, counting a trailing unterminated fragment.
int count_sentences(std::span<const std::string> tokens);

inline constexpr int kFeatureTemplateVersion = 2;

// Feature keys for the token at `position`. Pure.
std::vector<std::string> extract_features(std::span<const std::string> tokens, std::size_t position);

struct TrainingMeta {
  std::uint64_t seed = 0;
  int epochs = 0;
  int feature_version = kFeatureTemplateVersion;
  std::size_t train_size = 0;
  std::vector<double> epoch_accuracy;  // online token accuracy per epoch

  bool operator==(const TrainingMeta&) const = default;
};

class TaggerModel {
 public:
  explicit TaggerModel(TagSet tags);

  const TagSet& tag_set() const { return tags_; }
  const TrainingMeta& meta() const { return meta_; }
  void set_meta(TrainingMeta meta) { meta_ = std::move(meta); }

  std::size_t feature_count() const { return names_.size(); }
  // Per-tag weights of a feature; empty span for unknown features.
  std::span<const double> feature_weights(std::string_view feature) const;
  void set_feature_weights(const std::string& feature, std::span<const double> weights);

  double transition(std::size_t from, std::size_t to) const { return transitions_[from * tags_.size() + to]; }
  void set_transition(std::size_t from, std::size_t to, double w) { transitions_[from * tags_.size() + to] = w; }

  // Row-major tokens x tags emission scores.
  std::vector<double> emissions(std::span<const std::string> tokens) const;

  // Highest scoring tag path; ties go to the earlier tag in TagSet order.
  TagSequence predict(std::span<const std::string> tokens) const;

  // Sum of emission and transition weights along `tags`.
  double score(std::span<const std::string> tokens, std::span<const Tag> tags) const;

  nlohmann::json to_json() const;
  static TaggerModel from_json(const nlohmann::json& doc);
  void save(const std::filesystem::path& path) const;
  static TaggerModel load(const std::filesystem::path& path);

  bool operator==(const TaggerModel& o) const;

 private:
  TagSet tags_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
  std::vector<double> weights_;      // feature-major, one row of tags_.size()
  std::vector<double> transitions_;  // from-major tags x tags
  TrainingMeta meta_;
};

struct TrainOptions {
  int epochs = 10;
  std::uint64_t seed = 1;
  // Defaults to the 13-tag set, or the co-reference set when the data uses Trg/Dst.
  std::optional<TagSet> tag_set;
  std::function<void(int epoch, double token_accuracy)> on_epoch;
};

// Throws TaggerError on empty data, epochs < 1, or a tag outside the tag set.
TaggerModel train(std::span<const TagSequence> data, const TrainOptions& options = {});

// Batch decoding. The OpenMP kernel and the serial reference must agree
// sequence for sequence.
std::vector<TagSequence> predict_batch(const TaggerModel& model, std::span<const std::vector<std::string>> inputs);
std::vector<TagSequence> predict_batch_serial(const TaggerModel& model,
                                              std::span<const std::vector<std::string>> inputs);

struct EvalReport {
  std::size_t total_words = 0;
  std::size_t total_instructions = 0;
  std::size_t n_w = 0;  // incorrectly predicted words
  std::size_t n_l = 0;  // instructions with at least one wrong word
  double acc_word = 0;  // fractions in [0, 1]; percent_2dp for display
  double acc_inst = 0;
  std::map<Tag, std::size_t> gold_counts;     // words per gold tag
  std::map<Tag, std::size_t> per_tag_errors;  // wrong words per gold tag
  double mean_latency = 0;                    // seconds per instruction
  std::map<int, double> latency_by_sentence_count;
  std::map<int, std::size_t> instructions_by_sentence_count;
};

// Fills acc_word/acc_inst from the counts.
EvalReport make_report(std::size_t total_words, std::size_t n_w, std::size_t total_instructions, std::size_t n_l);

// Percentage rounded to two decimals: 0.99948 -> 99.95.
double percent_2dp(double fraction);

// Compares gold and predicted sequences; no timing.
EvalReport evaluate_predictions(std::span<const TagSequence> gold, std::span<const TagSequence> predicted);

struct EvalOptions {
  bool measure_latency = true;
  bool parallel = true;
};

// Decodes every gold sequence and scores it. Latency is measured per
// instruction, serially, after one warm-up pass. Throws TaggerError when the
// data uses tags outside the model's tag set.
EvalReport evaluate(const TaggerModel& model, std::span<const TagSequence> gold, const EvalOptions& options = {});

nlohmann::json to_json(const EvalReport& report);
// Plain-text tables: accuracy summary, per-tag errors, latency by sentence count.
std::string format_report(const EvalReport& report);

struct AblationTrial {
  double fraction = 0;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  EvalReport report;
};

struct AblationOptions {
  std::vector<double> fractions{0.2, 0.5, 1.0};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int epochs = 10;
  bool parallel = true;
};

// Trains on a seeded subsample of `train_data` for every (fraction, seed)
// pair and evaluates on `validation`. Trials come back fraction-major.
std::vector<AblationTrial> run_ablation(std::span<const TagSequence> train_data,
                                        std::span<const TagSequence> validation, const AblationOptions& options);

// Mean acc_inst per fraction.
std::map<double, double> mean_acc_inst(std::span<const AblationTrial> trials);

}  // namespace dw::tagger
