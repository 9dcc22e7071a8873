#include "dw/http_server.hpp"

namespace dw::service {

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const ServiceError& e) { send(res, e.status(), e.to_json()); }

nlohmann::json parse_body(const httplib::Request& req, bool required) {
  if (req.body.empty()) {
    if (required) throw ServiceError(400, "request", "request body must be a JSON object");
    return nlohmann::json::object();
  }
  try {
    auto j = nlohmann::json::parse(req.body);
    if (!j.is_object()) throw ServiceError(400, "request", "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ServiceError(400, "request", std::string("malformed JSON: ") + e.what());
  }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send(res, 500, ServiceError(500, "internal", e.what()).to_json());
    }
  };
}

}  // namespace

void install_routes(httplib::Server& server, SessionManager& sessions,
                    const std::optional<std::filesystem::path>& static_dir) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { send(res, 200, {{"status", "ok"}}); });

  server.Get("/components", guarded([&sessions](const httplib::Request&, httplib::Response& res) {
               send(res, 200, sessions.components());
             }));

  server.Post("/sessions", guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req, false);
                std::optional<nlohmann::json> fixture;
                if (body.contains("fixture")) fixture = body.at("fixture");
                const auto id = sessions.create_session(fixture);
                send(res, 201, {{"session_id", id}, {"state", sessions.state(id)}});
              }));

  server.Get(R"(/sessions/([0-9A-Za-z]+)/state)",
             guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, sessions.state(req.matches[1]));
             }));

  server.Post(R"(/sessions/([0-9A-Za-z]+)/instructions)",
              guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req, true);
                if (!body.contains("text") || !body.at("text").is_string()) {
                  throw ServiceError(400, "request", "body needs a string field \"text\"");
                }
                send(res, 200, sessions.submit(req.matches[1], body.at("text").get<std::string>()));
              }));

  server.Post(R"(/sessions/([0-9A-Za-z]+)/undo)",
              guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, sessions.undo(req.matches[1]));
              }));

  server.Post(R"(/sessions/([0-9A-Za-z]+)/reset)",
              guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, sessions.reset(req.matches[1]));
              }));

  if (static_dir) server.set_mount_point("/", static_dir->string());
}

}  // namespace dw::service
