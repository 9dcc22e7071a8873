// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dw/datagen.hpp"
#include "dw/grounding.hpp"
#include "dw/pipeline.hpp"
#include "dw/simulator.hpp"
#include "dw/tagger.hpp"

#ifndef DW_DATA_DIR
#define DW_DATA_DIR "data"
#endif

namespace {

using namespace dw;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr std::size_t kCorpusSize = 1584;
constexpr std::uint64_t kCorpusSeed = 7;
constexpr std::uint64_t kTrainSeed = 1;
constexpr double kOracleSeconds = 5.0;
constexpr double kMinAccWord = 99.5;
constexpr double kMinAccInst = 98.0;
constexpr double kTrainEvalSeconds = 60.0;
constexpr double kLayoutSeconds = 1.0;
constexpr double kMaxLatencyMs = 25.0;
constexpr int kViterbiCases = 200;
constexpr double kCorefMaxGap = 2.0;
constexpr double kMetricTolerance = 1e-9;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

TagSequence tagged(const std::string& line) {
  // "word/Tag word word/Tag": untagged words are O
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

}  // namespace

int main() {
  const auto tables = default_fixture();

  // Generator and grounder agree on every instruction.
  std::vector<datagen::AnnotatedInstruction> corpus;
  {
    const auto t0 = Clock::now();
    corpus = datagen::generate_dataset(tables, kCorpusSize, kCorpusSeed);
    std::size_t agree = 0;
    for (const auto& d : corpus) {
      try {
        if (ground(d.sequence(), tables, d.context).command == d.gold_command) ++agree;
      } catch (const Error&) {
      }
    }
    const double secs = seconds_since(t0);
    report("grounding_oracle", agree == corpus.size() && corpus.size() == kCorpusSize && secs < kOracleSeconds,
           std::to_string(agree) + "/" + std::to_string(corpus.size()) + " agree in " + fmt("%.3f s", secs));
  }

  const auto split = datagen::split_dataset(corpus, kCorpusSeed);
  const auto train_seqs = datagen::sequences(split.train);
  const auto val_seqs = datagen::sequences(split.validation);
  const auto test_seqs = datagen::sequences(split.test);

  // Tagger accuracy on the held-out test split.
  tagger::TrainOptions train_opts;
  train_opts.seed = kTrainSeed;
  const auto t_train = Clock::now();
  const auto model = tagger::train(train_seqs, train_opts);
  tagger::EvalOptions eval_opts;
  eval_opts.measure_latency = false;
  const auto test_report = tagger::evaluate(model, test_seqs, eval_opts);
  {
    const double secs = seconds_since(t_train);
    const bool pass = split.train.size() == 1268 && split.test.size() == 158 && tagger::percent_2dp(test_report.acc_word) >= kMinAccWord &&
                      tagger::percent_2dp(test_report.acc_inst) >= kMinAccInst && secs < kTrainEvalSeconds;
    report("tagger_accuracy", pass,
           "acc_word " + fmt("%.2f", tagger::percent_2dp(test_report.acc_word)) + " acc_inst " +
               fmt("%.2f", tagger::percent_2dp(test_report.acc_inst)) +
               " (train " + std::to_string(split.train.size()) + ", test " + std::to_string(split.test.size()) +
               ") in " + fmt("%.2f s", secs));
  }

  // More training data helps.
  {
    tagger::AblationOptions opts;
    opts.fractions = {0.2, 1.0};
    opts.seeds = {1, 2, 3};
    const auto trials = tagger::run_ablation(train_seqs, val_seqs, opts);
    const auto means = tagger::mean_acc_inst(trials);
    const double lo = means.at(0.2), hi = means.at(1.0);
    report("ablation_trend", lo < hi, "mean acc_inst 20%: " + fmt("%.2f", 100 * lo) + "  100%: " + fmt("%.2f", 100 * hi));
  }

  // Accuracy formulas reproduce the published figures.
  {
    const auto r = tagger::make_report(3895, 2, 158, 1);
    const double word = tagger::percent_2dp(r.acc_word), inst = tagger::percent_2dp(r.acc_inst);
    const bool pass = std::abs(word - 99.95) < kMetricTolerance && std::abs(inst - 99.37) < kMetricTolerance;
    report("metric_identities", pass, "acc_word " + fmt("%.2f", word) + " acc_inst " + fmt("%.2f", inst));
  }

  // Relative stud descriptions.
  {
    const auto a = resolve_stud(
        tagged("place the panel/ID_wall on the stud second/St_loc1 left/St_loc1 to the stud 500103/St_loc2"), tables);
    const auto b = resolve_stud(tagged("install it on the stud right/St_loc1 to the stud 500100/St_loc2"), tables);
    report("stud_resolution", a.id == StudId{500101} && b.id == StudId{500101},
           "second left of 500103 -> " + to_string(a.id) + ", right of 500100 -> " + to_string(b.id));
  }

  // Scripted layouts.
  for (int layout = 1; layout <= 3; ++layout) {
    const auto lines = sim::read_script(std::string(DW_DATA_DIR) + "/layouts/layout" + std::to_string(layout) + ".txt");
    std::string detail;
    bool pass = true;
    std::string svg[2];
    double worst = 0;
    for (int run = 0; run < 2; ++run) {
      const auto t0 = Clock::now();
      try {
        const auto state = replay(model, sim::initial_state(tables), lines);
        const auto check = sim::verify_layout(state, layout);
        svg[run] = sim::render_svg(state);
        if (!check.pass) {
          pass = false;
          for (const auto& d : check.diffs) detail += d + "; ";
        }
      } catch (const StageError& e) {
        pass = false;
        detail = "[" + e.stage() + "] " + e.what();
      }
      worst = std::max(worst, seconds_since(t0));
    }
    pass = pass && svg[0] == svg[1] && !svg[0].empty() && worst < kLayoutSeconds;
    if (detail.empty()) {
      detail = std::to_string(lines.size()) + " placements, identical SVG " + (svg[0] == svg[1] ? "yes" : "no") +
               ", " + fmt("%.4f s", worst);
    }
    report(("layout_" + std::to_string(layout)).c_str(), pass, detail);
  }

  // Warm end-to-end latency over the test split.
  {
    auto pass_once = [&](bool timed) {
      double total = 0;
      for (const auto& d : split.test) {
        const auto t0 = Clock::now();
        const auto tokens = tagger::tokenize(d.text);
        const auto tags = model.predict(tokens);
        try {
          (void)ground(tags, tables, d.context);
        } catch (const GroundingError&) {
        }
        if (timed) total += seconds_since(t0);
      }
      return total / static_cast<double>(split.test.size());
    };
    pass_once(false);
    const double ms = pass_once(true) * 1000.0;
    report("latency", ms <= kMaxLatencyMs, "mean " + fmt("%.4f ms", ms) + " per instruction");
  }

  // Viterbi against exhaustive search, integer weights so scores compare exactly.
  {
    std::mt19937_64 rng(2024);
    const std::vector<std::string> vocab{"the", "stud", "500101", "left", "middle", "panel", "to", "line"};
    int agree = 0;
    for (int c = 0; c < kViterbiCases; ++c) {
      std::vector<Tag> tags;
      for (std::size_t i = 0; i < kAllTagCount; ++i) tags.push_back(static_cast<Tag>(i));
      std::shuffle(tags.begin(), tags.end(), rng);
      tags.resize(std::uniform_int_distribution<std::size_t>(2, 5)(rng));
      std::sort(tags.begin(), tags.end());
      tagger::TaggerModel m{TagSet(tags)};
      std::uniform_int_distribution<int> w(-3, 3);
      const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
      std::vector<std::string> tokens;
      for (std::size_t i = 0; i < len; ++i) tokens.push_back(vocab[rng() % vocab.size()]);
      for (std::size_t i = 0; i < len; ++i) {
        for (const auto& f : tagger::extract_features(tokens, i)) {
          if (!m.feature_weights(f).empty()) continue;
          std::vector<double> ws(tags.size());
          for (auto& x : ws) x = w(rng);
          m.set_feature_weights(f, ws);
        }
      }
      for (std::size_t a = 0; a < tags.size(); ++a)
        for (std::size_t b = 0; b < tags.size(); ++b) m.set_transition(a, b, w(rng));

      double best = -1e300;
      std::vector<std::size_t> idx(len, 0);
      std::vector<Tag> path(len);
      for (;;) {
        for (std::size_t i = 0; i < len; ++i) path[i] = tags[idx[i]];
        best = std::max(best, m.score(tokens, path));
        std::size_t k = 0;
        while (k < len && ++idx[k] == tags.size()) idx[k++] = 0;
        if (k == len) break;
      }
      const auto decoded = m.predict(tokens);
      if (m.score(tokens, decoded.tags) == best) ++agree;
    }
    report("viterbi_bruteforce", agree == kViterbiCases,
           std::to_string(agree) + "/" + std::to_string(kViterbiCases) + " optimal");
  }

  // Co-reference tags cost little accuracy.
  {
    const auto coref = datagen::generate_dataset(tables, kCorpusSize, kCorpusSeed, true);
    const auto csplit = datagen::split_dataset(coref, kCorpusSeed);
    bool matched = csplit.test.size() == split.test.size();
    for (std::size_t i = 0; matched && i < split.test.size(); ++i) matched = csplit.test[i].text == split.test[i].text;
    const auto cmodel = tagger::train(datagen::sequences(csplit.train), train_opts);
    const auto crep = tagger::evaluate(cmodel, datagen::sequences(csplit.test), eval_opts);
    const double base = tagger::percent_2dp(test_report.acc_inst), co = tagger::percent_2dp(crep.acc_inst);
    const double gap = std::abs(co - base);
    report("coreference_gap", matched && cmodel.tag_set().size() == 15 && gap <= kCorefMaxGap,
           "acc_inst 15-tag " + fmt("%.2f", co) + " vs 13-tag " + fmt("%.2f", base) +
               " (gap " + fmt("%.2f", gap) + " pp)");
  }

  std::printf("%s: %d failing\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
