#pragma once

// JSON-over-HTTP front end for SessionManager.
//
//   POST /sessions                      -> 201 {session_id, state}
//   GET  /sessions/{id}/state
//   POST /sessions/{id}/instructions    {"text": ...}
//   POST /sessions/{id}/undo
//   POST /sessions/{id}/reset
//   GET  /components
//   GET  /healthz
//
// Errors answer {stage, message, offending_phrase}: 400 bad request, 404
// unknown session, 409 nothing to undo, 422 pipeline failure.

#include <filesystem>
#include <optional>

#include <httplib.h>

#include "dw/service.hpp"

namespace dw::service {

void install_routes(httplib::Server& server, SessionManager& sessions,
                    const std::optional<std::filesystem::path>& static_dir = std::nullopt);

}  // namespace dw::service
