#include "dw/service.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "dw/pipeline.hpp"

namespace dw::service {

namespace {

std::string iso_time(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Journal lines are single-line; instruction text is whitespace-insensitive.
std::string one_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
  return s;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

}  // namespace

nlohmann::json ServiceError::to_json() const {
  return {{"stage", stage_}, {"message", what()}, {"offending_phrase", phrase_}};
}

SessionManager::SessionManager(std::shared_ptr<const tagger::TaggerModel> model, ComponentTables default_tables,
                               std::optional<std::filesystem::path> journal_dir)
    : model_(std::move(model)), default_tables_(std::move(default_tables)), journal_dir_(std::move(journal_dir)) {
  if (!model_) throw Error("session manager needs a tagger model");
  validate(default_tables_);
  if (journal_dir_) std::filesystem::create_directories(*journal_dir_);
  std::random_device rd;
  id_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string SessionManager::new_id() {
  std::lock_guard lock(id_mutex_);
  std::mt19937_64 rng(id_state_++);
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << rng();
  return out.str();
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "request", "unknown session '" + id + "'");
  return it->second;
}

void SessionManager::journal(const Session& s, const std::string& line) const {
  if (!journal_dir_) return;
  std::ofstream out(*journal_dir_ / (s.id + ".log"), std::ios::app);
  out << one_line(line) << '\n';
}

std::string SessionManager::create_session(const std::optional<nlohmann::json>& fixture) {
  ComponentTables tables = default_tables_;
  if (fixture) {
    try {
      tables = load_components(*fixture);
    } catch (const Error& e) {
      throw ServiceError(400, "request", std::string("invalid fixture: ") + e.what());
    }
  }
  auto s = std::make_shared<Session>();
  s->initial = sim::initial_state(std::move(tables));
  s->state = s->initial;
  if (fixture) s->fixture = fixture->dump();
  s->created_at = s->updated_at = std::chrono::system_clock::now();
  {
    std::unique_lock lock(sessions_mutex_);
    do {
      s->id = new_id();
    } while (sessions_.count(s->id));
    sessions_[s->id] = s;
  }
  if (s->fixture) journal(*s, "F " + *s->fixture);
  else journal(*s, "N");
  return s->id;
}

nlohmann::json SessionManager::state_doc(const Session& s) const {
  auto doc = sim::to_json(s.state);
  doc["session_id"] = s.id;
  doc["created_at"] = iso_time(s.created_at);
  doc["updated_at"] = iso_time(s.updated_at);
  doc["instructions"] = s.log;
  return doc;
}

nlohmann::json SessionManager::submit(const std::string& id, const std::string& text) {
  if (blank(text)) throw ServiceError(400, "request", "instruction text is empty");
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  InstructionResult r;
  try {
    r = run_instruction(*model_, s->state, text);
  } catch (const StageError& e) {
    throw ServiceError(422, e.stage(), e.what(), e.phrase());
  }
  s->state = r.state;
  s->log.push_back(text);
  s->updated_at = std::chrono::system_clock::now();
  journal(*s, "I " + text);

  nlohmann::json tags = nlohmann::json::array();
  for (Tag t : r.tagged.tags) tags.push_back(to_string(t));
  const auto& placed = r.state.placed.back();
  const auto& rec = r.grounding.record;
  nlohmann::json delta = {
      {"placed",
       {{"panel_id", placed.panel_id.value},
        {"x_left", placed.rect.x_left},
        {"x_right", placed.rect.x_right},
        {"y_bottom", placed.rect.y_bottom},
        {"y_top", placed.rect.y_top}}},
      {"history_row",
       {rec.stud_id.value, rec.installed_x_left, rec.installed_x_right, to_string(rec.left_cent), to_string(rec.ver_hor),
        to_string(rec.top_btm), rec.drywall_id.value, rec.w, rec.l}},
      {"installed_panel", placed.panel_id.value}};
  return {{"tokens", r.tagged.tokens},
          {"tags", std::move(tags)},
          {"command", to_json(r.grounding.command)},
          {"action_record", to_json(rec)},
          {"state_delta", std::move(delta)}};
}

nlohmann::json SessionManager::state(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return state_doc(*s);
}

sim::WallState SessionManager::snapshot(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->state;
}

nlohmann::json SessionManager::undo(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  try {
    s->state = sim::undo_last(s->state);
  } catch (const sim::SimulationError& e) {
    throw ServiceError(409, "request", e.what());
  }
  if (!s->log.empty()) s->log.pop_back();
  s->updated_at = std::chrono::system_clock::now();
  journal(*s, "U");
  return state_doc(*s);
}

nlohmann::json SessionManager::reset(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  s->state = s->initial;
  s->log.clear();
  s->updated_at = std::chrono::system_clock::now();
  journal(*s, "R");
  return state_doc(*s);
}

std::vector<std::string> SessionManager::instruction_log(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->log;
}

std::vector<std::string> SessionManager::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) ids.push_back(id);
  return ids;
}

std::size_t SessionManager::recover() {
  if (!journal_dir_) return 0;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(*journal_dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".log") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t restored = 0;
  for (const auto& path : files) {
    auto s = std::make_shared<Session>();
    s->id = path.stem().string();
    s->created_at = s->updated_at = std::chrono::time_point_cast<std::chrono::system_clock::duration>(
        std::chrono::file_clock::to_sys(std::filesystem::last_write_time(path)));
    try {
      std::ifstream in(path);
      ComponentTables tables = default_tables_;
      std::string line;
      bool started = false;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char op = line[0];
        const std::string arg = line.size() > 2 ? line.substr(2) : std::string();
        if (!started) {
          if (op == 'F') {
            s->fixture = arg;
            tables = load_components(nlohmann::json::parse(arg));
          }
          s->initial = sim::initial_state(tables);
          s->state = s->initial;
          started = true;
          if (op == 'F' || op == 'N') continue;
        }
        if (op == 'I') {
          s->state = run_instruction(*model_, s->state, arg).state;
          s->log.push_back(arg);
        } else if (op == 'U') {
          s->state = sim::undo_last(s->state);
          if (!s->log.empty()) s->log.pop_back();
        } else if (op == 'R') {
          s->state = s->initial;
          s->log.clear();
        }
      }
      if (!started) {
        s->initial = sim::initial_state(tables);
        s->state = s->initial;
      }
    } catch (const std::exception& e) {
      std::cerr << "skipping journal " << path << ": " << e.what() << '\n';
      continue;
    }
    std::unique_lock lock(sessions_mutex_);
    sessions_[s->id] = s;
    ++restored;
  }
  return restored;
}

}  // namespace dw::service
