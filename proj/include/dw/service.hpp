#pragma once

// Interactive sessions over the instruction pipeline. Each session owns a
// wall state; instructions, undo and reset are serialized per session while
// different sessions proceed in parallel. With a journal directory every
// session is logged as an append-only instruction log and recovered by
// replaying it.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dw/components.hpp"
#include "dw/error.hpp"
#include "dw/simulator.hpp"
#include "dw/tagger.hpp"

namespace dw::service {

// Carries the HTTP status the server answers with.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string stage, const std::string& message, std::string phrase = {})
      : Error(message), status_(status), stage_(std::move(stage)), phrase_(std::move(phrase)) {}

  int status() const { return status_; }
  const std::string& stage() const { return stage_; }
  const std::string& phrase() const { return phrase_; }

  // {stage, message, offending_phrase}
  nlohmann::json to_json() const;

 private:
  int status_;
  std::string stage_;
  std::string phrase_;
};

class SessionManager {
 public:
  SessionManager(std::shared_ptr<const tagger::TaggerModel> model, ComponentTables default_tables,
                 std::optional<std::filesystem::path> journal_dir = std::nullopt);

  // Throws ServiceError(400) for an invalid fixture; no session is created then.
  std::string create_session(const std::optional<nlohmann::json>& fixture = std::nullopt);

  // {tokens, tags, command, action_record, state_delta}. Pipeline failures
  // throw ServiceError(422) and leave the session unchanged.
  nlohmann::json submit(const std::string& id, const std::string& text);

  nlohmann::json state(const std::string& id) const;
  sim::WallState snapshot(const std::string& id) const;
  nlohmann::json undo(const std::string& id);
  nlohmann::json reset(const std::string& id);

  // Accepted instruction texts, in order, since the last reset.
  std::vector<std::string> instruction_log(const std::string& id) const;

  nlohmann::json components() const { return dw::to_json(default_tables_); }
  std::vector<std::string> session_ids() const;

  // Replays every journal in the journal directory; returns the number of
  // sessions restored.
  std::size_t recover();

 private:
  struct Session {
    std::string id;
    sim::WallState initial;
    sim::WallState state;
    std::vector<std::string> log;
    std::optional<std::string> fixture;
    std::chrono::system_clock::time_point created_at;
    std::chrono::system_clock::time_point updated_at;
    mutable std::mutex mutex;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string new_id();
  void journal(const Session& s, const std::string& line) const;
  nlohmann::json state_doc(const Session& s) const;

  std::shared_ptr<const tagger::TaggerModel> model_;
  ComponentTables default_tables_;
  std::optional<std::filesystem::path> journal_dir_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex id_mutex_;
  std::uint64_t id_state_;
};

}  // namespace dw::service
