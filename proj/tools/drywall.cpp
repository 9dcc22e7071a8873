// drywall: command-line front end for dataset generation, tagger training and
// evaluation, grounding, layout demos and the session server.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "dw/annotations.hpp"
#include "dw/datagen.hpp"
#include "dw/http_server.hpp"
#include "dw/pipeline.hpp"
#include "dw/service.hpp"
#include "dw/simulator.hpp"
#include "dw/tagger.hpp"

#ifndef DW_DATA_DIR
#define DW_DATA_DIR "data"
#endif

namespace {

using namespace dw;

constexpr std::size_t kCorpusSize = 1584;
constexpr std::uint64_t kCorpusSeed = 7;

ComponentTables load_tables(const std::string& fixture) {
  return fixture.empty() ? default_fixture() : load_components_file(fixture);
}

tagger::TaggerModel default_model(const ComponentTables& tables) {
  std::cerr << "no model given; training on the default generated corpus (seed " << kCorpusSeed << ")\n";
  const auto data = datagen::generate_dataset(tables, kCorpusSize, kCorpusSeed);
  const auto split = datagen::split_dataset(data, kCorpusSeed);
  return tagger::train(datagen::sequences(split.train));
}

tagger::TaggerModel load_or_train(const std::string& model_path, const ComponentTables& tables) {
  return model_path.empty() ? default_model(tables) : tagger::TaggerModel::load(model_path);
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

void print_tags(const TagSequence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i) std::cout << s.tokens[i] << '\t' << to_string(s.tags[i]) << '\n';
}

std::vector<TagSequence> read_sequences(const std::string& path) {
  return datagen::sequences(datagen::read_annotations_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drywall instruction grounding: generate, train, evaluate, ground, simulate, serve"};
  app.require_subcommand(1);

  // datagen
  std::size_t dg_count = kCorpusSize;
  std::uint64_t dg_seed = kCorpusSeed;
  std::string dg_out, dg_fixture;
  bool dg_coref = false, dg_split = false;
  auto* datagen_cmd = app.add_subcommand("datagen", "Generate an annotated instruction corpus");
  datagen_cmd->add_option("--count", dg_count, "Number of instructions")->check(CLI::PositiveNumber);
  datagen_cmd->add_option("--seed", dg_seed, "Generator seed");
  datagen_cmd->add_option("--out", dg_out, "Output file (or directory with --split)")->required();
  datagen_cmd->add_option("--fixture", dg_fixture, "Component-table JSON (default fixture if omitted)");
  datagen_cmd->add_flag("--coref", dg_coref, "Add Trg/Dst co-reference tags");
  datagen_cmd->add_flag("--split", dg_split, "Write train/validation/test files into --out");

  // train
  std::string tr_data, tr_out;
  int tr_epochs = 10;
  std::uint64_t tr_seed = 1;
  auto* train_cmd = app.add_subcommand("train", "Train the tagger on an annotation file");
  train_cmd->add_option("--data", tr_data, "Annotation file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--epochs", tr_epochs, "Training epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", tr_seed, "Shuffle seed");
  train_cmd->add_option("--out", tr_out, "Model file")->required();

  // eval
  std::string ev_model, ev_data, ev_report, ev_predictions;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model (or external predictions) against gold tags");
  eval_cmd->add_option("--model", ev_model, "Model file")->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", ev_data, "Gold annotation file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--report", ev_report, "Write the report as JSON");
  eval_cmd->add_option("--predictions", ev_predictions, "Externally produced tags, same format")
      ->check(CLI::ExistingFile);

  // ablate
  std::string ab_data, ab_dev, ab_out;
  std::vector<double> ab_fractions{0.2, 0.5, 1.0};
  int ab_seeds = 3, ab_epochs = 10;
  auto* ablate_cmd = app.add_subcommand("ablate", "Accuracy versus training-set fraction");
  ablate_cmd->add_option("--data", ab_data, "Training annotations (default: generated corpus train split)");
  ablate_cmd->add_option("--dev", ab_dev, "Validation annotations (default: generated corpus validation split)");
  ablate_cmd->add_option("--fractions", ab_fractions, "Training fractions")->delimiter(',');
  ablate_cmd->add_option("--seeds", ab_seeds, "Number of seeds (1..N)")->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--epochs", ab_epochs, "Training epochs")->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--report", ab_out, "Write trials as JSON");

  // tag
  std::string tg_model, tg_text;
  auto* tag_cmd = app.add_subcommand("tag", "Tag one instruction");
  tag_cmd->add_option("--model", tg_model, "Model file")->required()->check(CLI::ExistingFile);
  tag_cmd->add_option("--text", tg_text, "Instruction text")->required();

  // ground
  std::string gr_model, gr_text, gr_fixture, gr_history;
  auto* ground_cmd = app.add_subcommand("ground", "Tag and ground one instruction");
  ground_cmd->add_option("--model", gr_model, "Model file")->required()->check(CLI::ExistingFile);
  ground_cmd->add_option("--text", gr_text, "Instruction text")->required();
  ground_cmd->add_option("--fixture", gr_fixture, "Component-table JSON (default fixture if omitted)");
  ground_cmd->add_option("--history", gr_history, "Action history JSON");

  // demo
  int dm_layout = 1;
  std::string dm_svg, dm_model, dm_script, dm_fixture;
  auto* demo_cmd = app.add_subcommand("demo", "Replay a layout script, verify it and render the wall");
  demo_cmd->add_option("--layout", dm_layout, "Layout id")->check(CLI::Range(1, 3));
  demo_cmd->add_option("--out-svg", dm_svg, "SVG output path");
  demo_cmd->add_option("--model", dm_model, "Model file (trains the default model if omitted)");
  demo_cmd->add_option("--script", dm_script, "Instruction script (default: bundled layout script)");
  demo_cmd->add_option("--fixture", dm_fixture, "Component-table JSON (default fixture if omitted)");

  // serve
  int sv_port = std::stoi(env_or("DW_PORT", "8080"));
  std::string sv_model = env_or("DW_MODEL", ""), sv_host = "127.0.0.1", sv_static, sv_journal, sv_fixture;
  auto* serve_cmd = app.add_subcommand("serve", "Run the session server");
  serve_cmd->add_option("--port", sv_port, "TCP port (env DW_PORT)");
  serve_cmd->add_option("--model", sv_model, "Model file (env DW_MODEL; trains the default model if omitted)");
  serve_cmd->add_option("--host", sv_host, "Bind address");
  serve_cmd->add_option("--static-dir", sv_static, "Serve files from this directory at /");
  serve_cmd->add_option("--journal-dir", sv_journal, "Journal sessions here and recover them at startup");
  serve_cmd->add_option("--fixture", sv_fixture, "Default component-table JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*datagen_cmd) {
      const auto tables = load_tables(dg_fixture);
      const auto data = datagen::generate_dataset(tables, dg_count, dg_seed, dg_coref);
      if (dg_split) {
        const auto split = datagen::split_dataset(data, dg_seed);
        std::filesystem::create_directories(dg_out);
        const std::filesystem::path dir(dg_out);
        datagen::write_annotations_file(dir / "train.conll", split.train);
        datagen::write_annotations_file(dir / "validation.conll", split.validation);
        datagen::write_annotations_file(dir / "test.conll", split.test);
        std::cout << "wrote " << split.train.size() << " / " << split.validation.size() << " / " << split.test.size()
                  << " instructions to " << dg_out << '\n';
      } else {
        datagen::write_annotations_file(dg_out, data);
        std::cout << "wrote " << data.size() << " instructions to " << dg_out << '\n';
      }
    } else if (*train_cmd) {
      const auto data = read_sequences(tr_data);
      tagger::TrainOptions opts;
      opts.epochs = tr_epochs;
      opts.seed = tr_seed;
      opts.on_epoch = [](int epoch, double acc) {
        std::cout << "epoch " << epoch << "  token accuracy " << tagger::percent_2dp(acc) << "%\n";
      };
      const auto model = tagger::train(data, opts);
      model.save(tr_out);
      std::cout << "saved " << model.feature_count() << " features, " << model.tag_set().size() << " tags to "
                << tr_out << '\n';
    } else if (*eval_cmd) {
      const auto gold = read_sequences(ev_data);
      tagger::EvalReport report;
      if (!ev_predictions.empty()) {
        report = tagger::evaluate_predictions(gold, read_external_tags_file(ev_predictions));
      } else {
        if (ev_model.empty()) throw Error("eval needs --model or --predictions");
        report = tagger::evaluate(tagger::TaggerModel::load(ev_model), gold);
      }
      std::cout << tagger::format_report(report);
      if (!ev_report.empty()) {
        std::ofstream(ev_report) << tagger::to_json(report).dump(2) << '\n';
      }
    } else if (*ablate_cmd) {
      std::vector<TagSequence> train_data, dev;
      if (ab_data.empty() != ab_dev.empty()) throw Error("ablate needs both --data and --dev, or neither");
      if (ab_data.empty()) {
        const auto split = datagen::split_dataset(
            datagen::generate_dataset(default_fixture(), kCorpusSize, kCorpusSeed), kCorpusSeed);
        train_data = datagen::sequences(split.train);
        dev = datagen::sequences(split.validation);
      } else {
        train_data = read_sequences(ab_data);
        dev = read_sequences(ab_dev);
      }
      tagger::AblationOptions opts;
      opts.fractions = ab_fractions;
      opts.seeds.clear();
      for (int s = 1; s <= ab_seeds; ++s) opts.seeds.push_back(static_cast<std::uint64_t>(s));
      opts.epochs = ab_epochs;
      const auto trials = tagger::run_ablation(train_data, dev, opts);
      nlohmann::json out = nlohmann::json::array();
      std::cout << "fraction  seed  train  acc_word  acc_inst\n";
      for (const auto& t : trials) {
        std::cout << std::left << std::setw(10) << t.fraction << std::setw(6) << t.seed << std::setw(7) << t.train_size
                  << std::setw(10) << t.report.acc_word << t.report.acc_inst << '\n';
        out.push_back({{"fraction", t.fraction},
                       {"seed", t.seed},
                       {"train_size", t.train_size},
                       {"acc_word", t.report.acc_word},
                       {"acc_inst", t.report.acc_inst}});
      }
      std::cout << "\nmean acc_inst by fraction\n";
      for (const auto& [f, m] : tagger::mean_acc_inst(trials)) std::cout << "  " << f << "  " << m << '\n';
      if (!ab_out.empty()) std::ofstream(ab_out) << out.dump(2) << '\n';
    } else if (*tag_cmd) {
      const auto model = tagger::TaggerModel::load(tg_model);
      print_tags(model.predict(tagger::tokenize(tg_text)));
    } else if (*ground_cmd) {
      const auto model = tagger::TaggerModel::load(gr_model);
      const auto tables = load_tables(gr_fixture);
      ActionHistory history;
      if (!gr_history.empty()) {
        std::ifstream in(gr_history);
        if (!in) throw Error("cannot open " + gr_history);
        history = action_history_from_json(nlohmann::json::parse(in));
      }
      const auto tagged = model.predict(tagger::tokenize(gr_text));
      print_tags(tagged);
      const auto g = ground(tagged, tables, history);
      std::cout << "\ncommand: " << to_json(g.command).dump() << '\n';
      std::cout << kActionHistoryHeader << '\n';
      const auto fields = csv_fields(g.record);
      for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "," : "") << fields[i];
      std::cout << '\n';
    } else if (*demo_cmd) {
      const auto tables = load_tables(dm_fixture);
      const auto model = load_or_train(dm_model, tables);
      const std::string script = dm_script.empty() ? std::string(DW_DATA_DIR) + "/layouts/layout" +
                                                         std::to_string(dm_layout) + ".txt"
                                                   : dm_script;
      const auto lines = sim::read_script(script);
      auto state = sim::initial_state(tables);
      for (const auto& line : lines) {
        const auto r = run_instruction(model, state, line);
        state = r.state;
        std::cout << line << "\n  -> " << describe(r.grounding.command) << "  x " << format_number(r.grounding.record.installed_x_left)
                  << ".." << format_number(r.grounding.record.installed_x_right) << '\n';
      }
      std::cout << '\n' << to_csv(state.history);
      const auto report = sim::verify_layout(state, dm_layout);
      std::cout << "\nlayout " << dm_layout << ": " << (report.pass ? "PASS" : "FAIL") << '\n';
      for (const auto& d : report.diffs) std::cout << "  " << d << '\n';
      if (!dm_svg.empty()) {
        std::ofstream(dm_svg) << sim::render_svg(state);
        std::cout << "wrote " << dm_svg << '\n';
      }
      return report.pass ? 0 : 1;
    } else if (*serve_cmd) {
      const auto tables = load_tables(sv_fixture);
      auto model = std::make_shared<const tagger::TaggerModel>(load_or_train(sv_model, tables));
      std::optional<std::filesystem::path> journal;
      if (!sv_journal.empty()) journal = sv_journal;
      service::SessionManager sessions(model, tables, journal);
      if (journal) std::cout << "recovered " << sessions.recover() << " sessions\n";
      httplib::Server server;
      std::optional<std::filesystem::path> static_dir;
      if (!sv_static.empty()) static_dir = sv_static;
      service::install_routes(server, sessions, static_dir);
      std::cout << "listening on http://" << sv_host << ':' << sv_port << std::endl;
      if (!server.listen(sv_host, sv_port)) throw Error("cannot listen on " + sv_host + ":" + std::to_string(sv_port));
    }
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what();
    if (!e.phrase().empty()) std::cerr << " (\"" << e.phrase() << "\")";
    std::cerr << '\n';
    return 1;
  } catch (const GroundingError& e) {
    std::cerr << "error [ground/" << to_string(e.kind()) << "]: " << e.what();
    if (!e.phrase().empty()) std::cerr << " (\"" << e.phrase() << "\")";
    std::cerr << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
