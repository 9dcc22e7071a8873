#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "dw/http_server.hpp"
#include "dw/service.hpp"
#include "support.hpp"

namespace dw::service {
namespace {

constexpr const char* kFirst = "Pick up the drywall 500320 and install it on the leftmost stud.";
constexpr const char* kSecond = "Can you move the full-size panel to the stud 500101? Place it on the center line of the stud.";

std::shared_ptr<const tagger::TaggerModel> model() {
  static const auto m = std::make_shared<const tagger::TaggerModel>(testing::trained_model());
  return m;
}

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e.status();
  }
  return 0;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dw_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(Sessions, CreateDefaultAndDistinct) {
  SessionManager m(model(), default_fixture());
  const auto a = m.create_session(), b = m.create_session();
  EXPECT_NE(a, b);
  EXPECT_EQ(a.size(), 16u);
  const auto st = m.state(a);
  EXPECT_EQ(st.at("studs").size(), 13u);
  EXPECT_EQ(st.at("panels").size(), 9u);
  EXPECT_TRUE(st.at("history").at("rows").empty());
  EXPECT_EQ(m.session_ids().size(), 2u);
}

TEST(Sessions, InvalidFixtureCreatesNothing) {
  SessionManager m(model(), default_fixture());
  auto bad = to_json(default_fixture());
  bad["studs"][3]["id"] = 500102;
  EXPECT_EQ(status_of([&] { m.create_session(bad); }), 400);
  EXPECT_TRUE(m.session_ids().empty());
  auto custom = to_json(default_fixture());
  custom["panels"].erase(8);
  EXPECT_EQ(m.state(m.create_session(custom)).at("panels").size(), 8u);
}

TEST(Sessions, SubmitFirstInstruction) {
  SessionManager m(model(), default_fixture());
  const auto id = m.create_session();
  const auto r = m.submit(id, kFirst);
  EXPECT_EQ(robot_command_from_json(r.at("command")), (RobotCommand{PanelId{500320}, StudId{500100}, {}}));
  EXPECT_EQ(r.at("tokens").size(), r.at("tags").size());
  EXPECT_EQ(r.at("state_delta").at("installed_panel"), 500320);
  EXPECT_EQ(r.at("state_delta").at("history_row").size(), 9u);
  EXPECT_EQ(m.state(id).at("history").at("rows").size(), 1u);
}

TEST(Sessions, FailuresLeaveStateUnchanged) {
  SessionManager m(model(), default_fixture());
  const auto id = m.create_session();
  m.submit(id, kFirst);
  const auto before = m.snapshot(id);
  try {
    m.submit(id, "hello world");
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status(), 422);
    EXPECT_EQ(e.stage(), "tag");
    EXPECT_NE(std::string(e.what()).find("no target"), std::string::npos);
  }
  try {
    m.submit(id, kFirst);
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.status(), 422);
    EXPECT_NE(std::string(e.what()).find("already_installed"), std::string::npos) << e.what();
  }
  EXPECT_EQ(m.snapshot(id), before);
  EXPECT_EQ(m.instruction_log(id).size(), 1u);
  EXPECT_EQ(status_of([&] { m.submit(id, "  "); }), 400);
  EXPECT_EQ(status_of([&] { m.submit("nope", kFirst); }), 404);
}

TEST(Sessions, UndoAndReset) {
  SessionManager m(model(), default_fixture());
  const auto id = m.create_session();
  EXPECT_EQ(status_of([&] { m.undo(id); }), 409);
  const auto fresh = m.snapshot(id);
  m.submit(id, kFirst);
  const auto one = m.snapshot(id);
  m.submit(id, kSecond);
  m.undo(id);
  EXPECT_EQ(m.snapshot(id), one);
  m.reset(id);
  EXPECT_EQ(m.snapshot(id), fresh);
  EXPECT_TRUE(m.instruction_log(id).empty());
}

TEST(Sessions, ConcurrentSessionsAreIsolated) {
  SessionManager m(model(), default_fixture());
  std::vector<std::string> ids;
  for (int i = 0; i < 6; ++i) ids.push_back(m.create_session());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    workers.emplace_back([&, i] {
      m.submit(ids[i], kFirst);
      if (i % 2) m.submit(ids[i], kSecond);
    });
  }
  for (auto& t : workers) t.join();
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(m.snapshot(ids[i]).history.size(), i % 2 ? 2u : 1u);
}

// Many threads race on one session; each instruction lands at most once.
TEST(Sessions, SameSessionSubmissionsSerialize) {
  SessionManager m(model(), default_fixture());
  const auto id = m.create_session();
  std::atomic<int> accepted{0};
  std::vector<std::thread> workers;
  for (int i = 0; i < 8; ++i) {
    workers.emplace_back([&] {
      try {
        m.submit(id, kFirst);
        ++accepted;
      } catch (const ServiceError&) {
      }
    });
  }
  for (auto& t : workers) t.join();
  EXPECT_EQ(accepted.load(), 1);
  EXPECT_EQ(m.snapshot(id).placed.size(), 1u);
}

TEST(Journal, RecoveryReplaysLog) {
  const auto dir = scratch_dir("journal");
  std::string id;
  sim::WallState expected;
  {
    SessionManager m(model(), default_fixture(), dir);
    id = m.create_session();
    m.submit(id, kFirst);
    m.submit(id, kSecond);
    m.undo(id);
    m.submit(id, kSecond);
    expected = m.snapshot(id);
  }
  SessionManager restored(model(), default_fixture(), dir);
  EXPECT_EQ(restored.recover(), 1u);
  EXPECT_EQ(restored.snapshot(id), expected);
  EXPECT_EQ(restored.instruction_log(id), (std::vector<std::string>{kFirst, kSecond}));
  std::filesystem::remove_all(dir);
}

class HttpApi : public ::testing::Test {
 protected:
  void SetUp() override {
    install_routes(server_, manager_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  SessionManager manager_{model(), default_fixture()};
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpApi, SessionLifecycle) {
  auto c = client();
  auto res = c.Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);

  res = c.Post("/sessions", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  const auto id = nlohmann::json::parse(res->body).at("session_id").get<std::string>();
  const std::string base = "/sessions/" + id;

  res = c.Post(base + "/instructions", nlohmann::json{{"text", kFirst}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(nlohmann::json::parse(res->body).at("command").at("target_panel_id"), 500320);

  res = c.Post(base + "/instructions", nlohmann::json{{"text", "hello world"}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  const auto err = nlohmann::json::parse(res->body);
  EXPECT_EQ(err.at("stage"), "tag");
  EXPECT_TRUE(err.contains("offending_phrase"));

  res = c.Get(base + "/state");
  ASSERT_TRUE(res);
  EXPECT_EQ(nlohmann::json::parse(res->body).at("history").at("rows").size(), 1u);

  res = c.Post(base + "/undo", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = c.Post(base + "/undo", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  res = c.Post(base + "/reset", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST_F(HttpApi, BadRequests) {
  auto c = client();
  auto res = c.Get("/sessions/0123456789abcdef/state");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  res = c.Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  const auto id = manager_.create_session();
  res = c.Post("/sessions/" + id + "/instructions", "{\"txt\": 1}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = c.Get("/components");
  ASSERT_TRUE(res);
  EXPECT_EQ(nlohmann::json::parse(res->body).at("studs").size(), 13u);
}

}  // namespace
}  // namespace dw::service
