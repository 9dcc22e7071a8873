#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "dw/datagen.hpp"
#include "dw/tagger.hpp"
#include "dw/viterbi.hpp"
#include "support.hpp"

namespace dw::tagger {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Pick up the full-size drywall to the stud 500107"),
            (Tokens{"pick", "up", "the", "full-size", "drywall", "to", "the", "stud", "500107"}));
  EXPECT_EQ(tokenize("Place it vertically."), (Tokens{"place", "it", "vertically", "."}));
  EXPECT_EQ(tokenize("Is it 2.5 ft, or 32?"), (Tokens{"is", "it", "2.5", "ft", ",", "or", "32", "?"}));
}

TEST(Tokenize, IdempotentOnJoinedTokens) {
  const auto once = tokenize("Can you hang the panel in the middle to the leftmost stud? Place it to the top part.");
  std::string joined;
  for (const auto& t : once) joined += t + " ";
  EXPECT_EQ(tokenize(joined), once);
}

TEST(Tokenize, RejectsBlank) {
  EXPECT_THROW(tokenize(""), TaggerError);
  EXPECT_THROW(tokenize(" \t\n"), TaggerError);
}

TEST(Tokenize, SentenceCount) {
  EXPECT_EQ(count_sentences(tokenize("Pick it up. Put it down")), 2);
  EXPECT_EQ(count_sentences(tokenize("Pick it up. Put it down.")), 2);
  EXPECT_EQ(count_sentences(tokenize("Pick it up")), 1);
}

TEST(Features, PureAndBoundaryAware) {
  const Tokens t{"install", "it", "on", "500101"};
  EXPECT_EQ(extract_features(t, 3), extract_features(t, 3));
  const auto f = extract_features(t, 3);
  EXPECT_NE(std::find(f.begin(), f.end(), "six_digit"), f.end());
  EXPECT_NE(std::find(f.begin(), f.end(), "w+1=</s>"), f.end());
  const auto g = extract_features(t, 0);
  EXPECT_NE(std::find(g.begin(), g.end(), "w-1=<s>"), g.end());
}

// Exhaustive search over every path of a small lattice.
TEST(Viterbi, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> w(-4, 4);
  for (int c = 0; c < 300; ++c) {
    const std::size_t k = 1 + rng() % 4, n = 1 + rng() % 5;
    std::vector<double> em(n * k), tr(k * k);
    for (auto& x : em) x = w(rng);
    for (auto& x : tr) x = w(rng);
    double best = -1e300;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      best = std::max(best, path_score(em, tr, k, idx));
      std::size_t i = 0;
      while (i < n && ++idx[i] == k) idx[i++] = 0;
      if (i == n) break;
    }
    const auto path = viterbi(em, tr, k);
    ASSERT_EQ(path.size(), n);
    EXPECT_EQ(path_score(em, tr, k, path), best);
  }
}

TEST(Viterbi, TiesGoToLowestIndex) {
  const std::vector<double> em(3 * 4, 0.0), tr(4 * 4, 0.0);
  EXPECT_EQ(viterbi(em, tr, 4), (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Train, MemorizesSingleInstruction) {
  const auto s = testing::tagged("pick up the full-size/dim drywall to the stud 500107/ID_stud");
  const std::vector<TagSequence> data{s};
  const auto m = train(data);
  EXPECT_EQ(m.predict(s.tokens), s);
}

TEST(Train, DeterministicAndSaveLoad) {
  const auto corpus = datagen::generate_dataset(default_fixture(), 200, 3);
  const auto data = datagen::sequences(corpus);
  TrainOptions o;
  o.epochs = 3;
  o.seed = 5;
  const auto a = train(data, o), b = train(data, o);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(a.meta().epoch_accuracy.size(), 3u);

  const auto path = std::filesystem::temp_directory_path() / "dw_test_model.json";
  a.save(path);
  EXPECT_TRUE(TaggerModel::load(path) == a);
  std::filesystem::remove(path);
}

TEST(Train, RejectsBadInput) {
  const std::vector<TagSequence> none;
  EXPECT_THROW(train(none), TaggerError);
  const std::vector<TagSequence> one{testing::tagged("hang/O it/Trg")};
  TrainOptions o;
  o.tag_set = TagSet::base();
  EXPECT_THROW(train(one, o), TaggerError);
  o.tag_set.reset();
  o.epochs = 0;
  EXPECT_THROW(train(one, o), TaggerError);
}

TEST(Train, FitsItsTrainingSplit) {
  const auto corpus = datagen::generate_dataset(default_fixture(), 1584, 7);
  const auto train_seqs = datagen::sequences(datagen::split_dataset(corpus, 7).train);
  EvalOptions o;
  o.measure_latency = false;
  const auto r = evaluate(testing::trained_model(), train_seqs, o);
  EXPECT_GE(r.acc_word, 0.999);
}

TEST(Predict, ParagraphExample) {
  const auto t = testing::trained_model().predict(
      tokenize("Can you install the piece 500310 vertically in the stud? The stud is laying third to the left from "
               "the stud 500105. Please hang the panel into the middle line."));
  auto tag_of = [&](const std::string& w) {
    for (std::size_t i = 0; i < t.tokens.size(); ++i)
      if (t.tokens[i] == w) return t.tags[i];
    return Tag::O;
  };
  EXPECT_EQ(tag_of("500310"), Tag::ID_wall);
  EXPECT_EQ(tag_of("third"), Tag::St_loc1);
  EXPECT_EQ(tag_of("500105"), Tag::St_loc2);
  EXPECT_EQ(tag_of("middle"), Tag::Vr_md);
}

TEST(Predict, SlotExamples) {
  const auto& m = testing::trained_model();
  const auto a = m.predict(tokenize("Pick up the full-size drywall to the stud 500107"));
  EXPECT_EQ(a, testing::tagged("pick up the full-size/dim drywall to the stud 500107/ID_stud"));
  const auto b = m.predict(
      tokenize("Can you hang the panel in the middle to the leftmost stud? Place it to the top part."));
  EXPECT_EQ(b, testing::tagged("can you hang the panel in the middle/Dw_loc1 to the leftmost/St_loc1 stud ? place it "
                               "to the top/Hr_top part/Hr_top ."));
}

TEST(Predict, NoEntitiesGivesAllO) {
  const auto t = testing::trained_model().predict(tokenize("hello world"));
  for (auto tag : t.tags) EXPECT_EQ(tag, Tag::O);
}

TEST(Predict, BatchMatchesSerial) {
  const auto corpus = datagen::generate_dataset(default_fixture(), 300, 9);
  std::vector<std::vector<std::string>> inputs;
  for (const auto& d : corpus) inputs.push_back(d.tokens);
  const auto& m = testing::trained_model();
  EXPECT_EQ(predict_batch(m, inputs), predict_batch_serial(m, inputs));
}

TEST(Metrics, PublishedIdentities) {
  auto r = make_report(3895, 2, 158, 1);
  EXPECT_DOUBLE_EQ(percent_2dp(r.acc_word), 99.95);
  EXPECT_DOUBLE_EQ(percent_2dp(r.acc_inst), 99.37);
  r = make_report(100, 0, 10, 0);
  EXPECT_DOUBLE_EQ(r.acc_word, 1.0);
  EXPECT_DOUBLE_EQ(r.acc_inst, 1.0);
}

TEST(Metrics, EvaluatePredictionsCounts) {
  const std::vector<TagSequence> gold{testing::tagged("to/O the/O stud/O 500107/ID_stud"),
                                      testing::tagged("the/O 500300/ID_wall")};
  auto pred = gold;
  EXPECT_DOUBLE_EQ(evaluate_predictions(gold, pred).acc_inst, 1.0);
  pred[1].tags[1] = Tag::ID_stud;
  const auto r = evaluate_predictions(gold, pred);
  EXPECT_EQ(r.n_w, 1u);
  EXPECT_EQ(r.n_l, 1u);
  EXPECT_EQ(r.total_words, 6u);
  EXPECT_EQ(r.per_tag_errors.at(Tag::ID_wall), 1u);
  EXPECT_DOUBLE_EQ(r.acc_inst, 0.5);
}

TEST(Evaluate, RejectsForeignTags) {
  const std::vector<TagSequence> gold{testing::tagged("hang/O it/Trg")};
  EXPECT_THROW(evaluate(testing::trained_model(), gold), TaggerError);
}

TEST(Ablation, ParallelMatchesSerialAndIsFractionMajor) {
  const auto corpus = datagen::generate_dataset(default_fixture(), 120, 4);
  const auto split = datagen::split_dataset(corpus, 4);
  const auto tr = datagen::sequences(split.train), va = datagen::sequences(split.validation);
  AblationOptions o;
  o.fractions = {0.5, 1.0};
  o.seeds = {1, 2};
  o.epochs = 2;
  const auto par = run_ablation(tr, va, o);
  o.parallel = false;
  const auto ser = run_ablation(tr, va, o);
  ASSERT_EQ(par.size(), 4u);
  for (std::size_t i = 0; i < par.size(); ++i) {
    EXPECT_EQ(par[i].fraction, ser[i].fraction);
    EXPECT_EQ(par[i].train_size, ser[i].train_size);
    EXPECT_EQ(par[i].report.n_w, ser[i].report.n_w);
  }
  EXPECT_EQ(par[0].fraction, 0.5);
  EXPECT_EQ(par[3].fraction, 1.0);
  EXPECT_EQ(mean_acc_inst(par).size(), 2u);
}

}  // namespace
}  // namespace dw::tagger
