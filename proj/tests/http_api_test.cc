// Copyright 2026 The Designsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "designsearch/http_api.h"

#include <gtest/gtest.h>
#include <httplib.h>

#include <memory>
#include <sstream>
#include <string>
#include <thread>

#include "test_util.h"

namespace designsearch::service {
namespace {

using nlohmann::json;

// A live server on an ephemeral loopback port.
class HttpApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    service_ = std::make_unique<TaskService>(ServiceOptions{});
    RegisterRoutes(server_, *service_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Result PostJson(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  std::string CreateTask(int population, int iterations, bool launch) {
    auto res = PostJson("/tasks", {{"name", "cover"},
                                   {"spec_html", testing::CoverSpec()},
                                   {"population_size", population},
                                   {"iterations", iterations},
                                   {"seed", 3},
                                   {"launch", launch}});
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body)["task_id"];
  }

  // Rates every remaining pair with fresh raters.
  void RateAll(const std::string& task_id) {
    for (int i = 0;; ++i) {
      const std::string rater = "h" + std::to_string(i);
      auto res = client_->Post("/tasks/" + task_id + "/assignments?rater=" +
                                   rater,
                               "", "application/json");
      if (res->status == 204) return;
      ASSERT_EQ(res->status, 200);
      const json body = json::parse(res->body);
      auto choice = PostJson(
          "/assignments/" + body["assignment"]["assignment_id"].get<std::string>() +
              "/choice",
          {{"rater", rater}, {"side", "left"}});
      ASSERT_EQ(choice->status, 200);
    }
  }

  std::unique_ptr<TaskService> service_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(HttpApiTest, HealthAndCors) {
  auto res = client_->Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["status"], "ok");
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(HttpApiTest, CreateReturnsIdAndCostEstimate) {
  auto res = PostJson("/tasks", {{"spec_html", testing::CoverSpec()},
                                 {"iterations", 10}});
  ASSERT_EQ(res->status, 201);
  const json body = json::parse(res->body);
  EXPECT_EQ(body["task_id"], "t1");
  EXPECT_DOUBLE_EQ(body["cost_estimate"]["amount"].get<double>(), 25.0);
  EXPECT_EQ(body["cost_estimate"]["currency"], "USD");
  const json list = json::parse(client_->Get("/tasks")->body);
  EXPECT_EQ(list["tasks"], json({"t1"}));
  const json info = json::parse(client_->Get("/tasks/t1")->body);
  EXPECT_EQ(info["state"], "created");
  EXPECT_EQ(info["space_size"], "972");
  EXPECT_EQ(info["attribute_count"], 6);
}

TEST_F(HttpApiTest, ErrorStatusesAndBodies) {
  auto missing = PostJson("/tasks", {{"name", "x"}});
  EXPECT_EQ(missing->status, 400);
  EXPECT_EQ(json::parse(missing->body)["error"], "InvalidArgument");

  auto arity = PostJson(
      "/tasks", {{"spec_html", "<p explore-a-and-b=\"1;2 3\">x</p>"}});
  EXPECT_EQ(arity->status, 422);
  EXPECT_EQ(json::parse(arity->body)["error"], "JointArityMismatch");

  auto bad_json = client_->Post("/tasks", "{nope", "application/json");
  EXPECT_EQ(bad_json->status, 400);

  auto unknown = client_->Get("/tasks/t77/progress");
  EXPECT_EQ(unknown->status, 404);
  const json body = json::parse(unknown->body);
  EXPECT_EQ(body["error"], "UnknownTask");
  EXPECT_EQ(body["subject"], "t77");

  const std::string id = CreateTask(4, 1, false);
  auto early = client_->Post("/tasks/" + id + "/assignments?rater=a", "",
                             "application/json");
  EXPECT_EQ(early->status, 409);
  auto not_ready = client_->Get("/tasks/" + id + "/export?k=5");
  EXPECT_EQ(not_ready->status, 409);
  EXPECT_EQ(json::parse(not_ready->body)["error"], "NotReady");
  auto bad_k = client_->Get("/tasks/" + id + "/export?k=zero");
  EXPECT_EQ(bad_k->status, 400);
}

TEST_F(HttpApiTest, StatusMappingCoversEveryCode) {
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUnknownAssignment), 404);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kValidationFailed), 422);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kInvalidConfig), 400);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kAlreadySubmitted), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kNotLeaseHolder), 403);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kLeaseExpired), 410);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kStorage), 500);
}

TEST_F(HttpApiTest, AssignmentChoiceFlow) {
  const std::string id = CreateTask(4, 2, true);
  auto res = client_->Post("/tasks/" + id + "/assignments?rater=ann", "",
                           "application/json");
  ASSERT_EQ(res->status, 200);
  const json body = json::parse(res->body);
  EXPECT_EQ(body["status"], "assigned");
  const json& a = body["assignment"];
  EXPECT_EQ(a["task_id"], id);
  EXPECT_EQ(a["generation"], 0);
  const std::string left_url = a["left"]["url"];
  EXPECT_EQ(left_url, "/tasks/" + id + "/designs/" +
                          std::to_string(a["left"]["individual_id"].get<int>()));
  EXPECT_TRUE(a["lease_expires_ms"].is_number());

  auto design = client_->Get(left_url);
  ASSERT_EQ(design->status, 200);
  EXPECT_NE(design->get_header_value("Content-Type").find("text/html"),
            std::string::npos);
  EXPECT_EQ(design->body.find("explore-"), std::string::npos);

  const std::string choice_path =
      "/assignments/" + a["assignment_id"].get<std::string>() + "/choice";
  EXPECT_EQ(PostJson(choice_path, {{"rater", "bob"}, {"side", "left"}})->status,
            403);
  EXPECT_EQ(PostJson(choice_path, {{"rater", "ann"}, {"side", "up"}})->status,
            400);
  auto ok = PostJson(choice_path, {{"rater", "ann"}, {"side", "right"}});
  ASSERT_EQ(ok->status, 200);
  EXPECT_EQ(json::parse(ok->body)["status"], "recorded");
  EXPECT_EQ(PostJson(choice_path, {{"rater", "ann"}, {"side", "left"}})->status,
            409);
  EXPECT_EQ(PostJson("/assignments/t1.0.9/choice",
                     {{"rater", "ann"}, {"side", "left"}})
                ->status,
            404);

  const json progress =
      json::parse(client_->Get("/tasks/" + id + "/progress")->body);
  EXPECT_EQ(progress["state"], "running");
  EXPECT_EQ(progress["pairs"]["total"], 2);
  EXPECT_EQ(progress["pairs"]["rated"], 1);
  EXPECT_EQ(progress["pairs"]["pending"], 1);
  EXPECT_EQ(progress["design_urls"].size(), 4u);
}

TEST_F(HttpApiTest, NoWorkAndQuotaStatuses) {
  auto res = PostJson("/tasks", {{"spec_html", testing::CoverSpec()},
                                 {"population_size", 4},
                                 {"iterations", 2},
                                 {"worker_count", 2},
                                 {"per_worker_quota", 1},
                                 {"launch", true}});
  const std::string id = json::parse(res->body)["task_id"];
  auto a = client_->Post("/tasks/" + id + "/assignments?rater=a", "",
                         "application/json");
  auto b = client_->Post("/tasks/" + id + "/assignments?rater=b", "",
                         "application/json");
  ASSERT_EQ(b->status, 200);
  EXPECT_EQ(client_->Post("/tasks/" + id + "/assignments?rater=c", "",
                          "application/json")
                ->status,
            204);
  const std::string aid = json::parse(a->body)["assignment"]["assignment_id"];
  PostJson("/assignments/" + aid + "/choice", {{"rater", "a"}, {"side", "left"}});
  auto quota = client_->Post("/tasks/" + id + "/assignments?rater=a", "",
                             "application/json");
  EXPECT_EQ(quota->status, 429);
  EXPECT_EQ(json::parse(quota->body)["status"], "quota_exhausted");
}

TEST_F(HttpApiTest, RaterMayComeFromBody) {
  const std::string id = CreateTask(4, 1, true);
  auto res = PostJson("/tasks/" + id + "/assignments", {{"rater", "zed"}});
  EXPECT_EQ(res->status, 200);
  auto none = client_->Post("/tasks/" + id + "/assignments", "",
                            "application/json");
  EXPECT_EQ(none->status, 400);
}

TEST_F(HttpApiTest, ExportGenerationsAndRelaunch) {
  const std::string id = CreateTask(10, 2, false);
  EXPECT_EQ(client_->Post("/tasks/" + id + "/launch", "", "application/json")
                ->status,
            200);
  EXPECT_EQ(client_->Post("/tasks/" + id + "/relaunch?k=2", "",
                          "application/json")
                ->status,
            409);
  RateAll(id);
  const json progress =
      json::parse(client_->Get("/tasks/" + id + "/progress")->body);
  EXPECT_EQ(progress["state"], "completed");
  EXPECT_EQ(progress["generation"], 2);
  EXPECT_EQ(progress["top_ids"].size(), 5u);

  auto exported = client_->Get("/tasks/" + id + "/export?k=5");
  ASSERT_EQ(exported->status, 200);
  const json archive = json::parse(exported->body);
  EXPECT_EQ(archive["files"].size(), 5u);
  EXPECT_EQ(archive["manifest"]["designs"].size(), 5u);
  for (const auto& [name, html] : archive["files"].items()) {
    EXPECT_EQ(html.get<std::string>().find("explore-"), std::string::npos)
        << name;
  }
  EXPECT_EQ(json::parse(client_->Get("/tasks/" + id + "/export?k=1")->body)
                ["files"]
                    .size(),
            1u);

  auto generations = client_->Get("/tasks/" + id + "/generations");
  ASSERT_EQ(generations->status, 200);
  std::istringstream lines(generations->body);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const json record = json::parse(line);
    EXPECT_EQ(record["generation"], count++);
    EXPECT_EQ(record["individuals"].size(), 10u);
    EXPECT_EQ(record["results"].size(), 5u);
  }
  EXPECT_EQ(count, 2);

  auto relaunched = client_->Post("/tasks/" + id + "/relaunch?k=2", "",
                                  "application/json");
  ASSERT_EQ(relaunched->status, 201);
  const std::string child = json::parse(relaunched->body)["task_id"];
  const json info = json::parse(client_->Get("/tasks/" + child)->body);
  EXPECT_EQ(info["parent_task"], id);
  EXPECT_EQ(info["seeded_designs"], 2);
}

TEST_F(HttpApiTest, UnknownDesignIs404) {
  const std::string id = CreateTask(4, 1, false);
  auto res = client_->Get("/tasks/" + id + "/designs/12345");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(json::parse(res->body)["error"], "UnknownDesign");
}

TEST(HttpJsonTest, TaskRequestDefaults) {
  const TaskRequest request = TaskRequestFromJson({{"spec_html", "<p></p>"}});
  EXPECT_EQ(request.ga.population_size, 50);
  EXPECT_EQ(request.ga.iterations, 10);
  EXPECT_EQ(request.budget.worker_count, 50);
  EXPECT_EQ(request.budget.per_worker_quota, 5);
  EXPECT_THROW(TaskRequestFromJson(json::object()), Error);
  EXPECT_THROW(TaskRequestFromJson({{"spec_html", 4}}), Error);
}

}  // namespace
}  // namespace designsearch::service
