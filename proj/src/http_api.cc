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

#include <httplib.h>

#include <string>

namespace designsearch::service {

using nlohmann::json;

namespace {

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, const Error& error) {
  SendJson(res, HttpStatusFor(error.code()),
           {{"error", ErrorCodeName(error.code())},
            {"message", error.what()},
            {"subject", error.subject()}});
}

int QueryInt(const httplib::Request& req, const std::string& key,
             int fallback) {
  if (!req.has_param(key)) return fallback;
  try {
    return std::stoi(req.get_param_value(key));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, key + " must be an integer");
  }
}

json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "body must be a JSON object");
  }
  return body;
}

// Runs `handler`, mapping library and JSON errors to error responses.
template <typename Handler>
httplib::Server::Handler Guard(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    try {
      handler(req, res);
    } catch (const Error& e) {
      SendError(res, e);
    } catch (const json::exception& e) {
      SendError(res, Error(ErrorCode::kInvalidArgument, e.what()));
    }
  };
}

}  // namespace

json ToJson(const ProgressSnapshot& p) {
  return {{"task_id", p.task_id},
          {"name", p.name},
          {"state", TaskStateName(p.state)},
          {"generation", p.generation},
          {"iterations", p.iterations},
          {"worker_count", p.worker_count},
          {"pairs", {{"total", p.total_pairs},
                     {"rated", p.rated},
                     {"leased", p.leased},
                     {"pending", p.pending}}},
          {"results_total", p.results_total},
          {"population_ids", p.population_ids},
          {"design_urls", p.design_urls},
          {"top_ids", p.top_ids}};
}

json ToJson(const AssignmentView& a) {
  return {{"assignment_id", a.assignment_id},
          {"task_id", a.task_id},
          {"generation", a.generation},
          {"left", {{"individual_id", a.left_id}, {"url", a.left_url}}},
          {"right", {{"individual_id", a.right_id}, {"url", a.right_url}}},
          {"lease_expires_ms", a.lease_expiry_ms}};
}

json ToJson(const ExportArchive& archive) {
  json files = json::object();
  for (const ExportedDesign& design : archive.files) {
    files[design.filename] = design.html;
  }
  return {{"manifest", archive.manifest}, {"files", files}};
}

TaskRequest TaskRequestFromJson(const json& body,
                                const TaskRequest& defaults) {
  if (!body.contains("spec_html") || !body.at("spec_html").is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "spec_html is required");
  }
  TaskRequest request = defaults;
  request.spec_html = body.at("spec_html").get<std::string>();
  request.name = body.value(
      "name", defaults.name.empty() ? std::string("untitled") : defaults.name);
  request.ga.population_size =
      body.value("population_size", request.ga.population_size);
  request.ga.iterations = body.value("iterations", request.ga.iterations);
  request.ga.mutation_rate =
      body.value("mutation_rate", request.ga.mutation_rate);
  request.ga.rng_seed = body.value("seed", request.ga.rng_seed);
  request.budget.worker_count =
      body.value("worker_count", request.budget.worker_count);
  request.budget.per_worker_quota =
      body.value("per_worker_quota", request.budget.per_worker_quota);
  request.budget.unit_pay = body.value("unit_pay", request.budget.unit_pay);
  request.budget.currency = body.value("currency", request.budget.currency);
  return request;
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownTask:
    case ErrorCode::kUnknownAssignment:
      return 404;
    case ErrorCode::kMalformedMarkup:
    case ErrorCode::kUnknownChildId:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kJointArityMismatch:
    case ErrorCode::kValidationFailed:
      return 422;
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kOddPopulation:
    case ErrorCode::kInvalidSequence:
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kInvalidState:
    case ErrorCode::kNotReady:
    case ErrorCode::kAlreadySubmitted:
      return 409;
    case ErrorCode::kNotLeaseHolder:
      return 403;
    case ErrorCode::kLeaseExpired:
      return 410;
    case ErrorCode::kEmptyWinnerPool:
    case ErrorCode::kStorage:
      return 500;
  }
  return 500;
}

void RegisterRoutes(httplib::Server& server, TaskService& service,
                    TaskRequest defaults) {
  server.Get("/health", Guard([](const httplib::Request&,
                                 httplib::Response& res) {
               SendJson(res, 200, {{"status", "ok"}});
             }));

  server.Get("/tasks", Guard([&service](const httplib::Request&,
                                        httplib::Response& res) {
               SendJson(res, 200, {{"tasks", service.TaskIds()}});
             }));

  server.Post("/tasks", Guard([&service, defaults](
                                  const httplib::Request& req,
                                  httplib::Response& res) {
                const json body = ParseBody(req);
                const auto created =
                    service.CreateTask(TaskRequestFromJson(body, defaults));
                if (body.value("launch", false)) {
                  service.Launch(created.task_id);
                }
                SendJson(res, 201,
                         {{"task_id", created.task_id},
                          {"cost_estimate",
                           {{"amount", created.cost.amount},
                            {"currency", created.cost.currency}}}});
              }));

  server.Get(R"(/tasks/([^/]+))",
             Guard([&service](const httplib::Request& req,
                              httplib::Response& res) {
               SendJson(res, 200, service.TaskInfo(req.matches[1]));
             }));

  server.Post(R"(/tasks/([^/]+)/launch)",
              Guard([&service](const httplib::Request& req,
                               httplib::Response& res) {
                service.Launch(req.matches[1]);
                SendJson(res, 200, service.TaskInfo(req.matches[1]));
              }));

  server.Get(R"(/tasks/([^/]+)/progress)",
             Guard([&service](const httplib::Request& req,
                              httplib::Response& res) {
               SendJson(res, 200, ToJson(service.Progress(req.matches[1])));
             }));

  server.Get(R"(/tasks/([^/]+)/designs/(\d+))",
             Guard([&service](const httplib::Request& req,
                              httplib::Response& res) {
               uint64_t id = 0;
               try {
                 id = std::stoull(req.matches[2]);
               } catch (const std::exception&) {
                 throw Error(ErrorCode::kInvalidArgument, "bad design id");
               }
               try {
                 res.set_content(service.RenderDesign(req.matches[1], id),
                                 "text/html; charset=utf-8");
               } catch (const Error& e) {
                 if (e.code() != ErrorCode::kInvalidArgument) throw;
                 SendJson(res, 404,
                          {{"error", "UnknownDesign"},
                           {"message", e.what()},
                           {"subject", e.subject()}});
               }
             }));

  server.Post(R"(/tasks/([^/]+)/assignments)",
              Guard([&service](const httplib::Request& req,
                               httplib::Response& res) {
                std::string rater = req.get_param_value("rater");
                if (rater.empty()) {
                  rater = ParseBody(req).value("rater", std::string());
                }
                const RequestOutcome outcome =
                    service.RequestAssignment(req.matches[1], rater);
                switch (outcome.status) {
                  case RequestStatus::kAssigned:
                    SendJson(res, 200,
                             {{"status", "assigned"},
                              {"assignment", ToJson(*outcome.assignment)}});
                    break;
                  case RequestStatus::kNoWork:
                    res.status = 204;
                    break;
                  case RequestStatus::kQuotaExhausted:
                    SendJson(res, 429, {{"status", "quota_exhausted"}});
                    break;
                }
              }));

  server.Post(R"(/assignments/([^/]+)/choice)",
              Guard([&service](const httplib::Request& req,
                               httplib::Response& res) {
                const json body = ParseBody(req);
                const std::string side = body.value("side", std::string());
                if (side != "left" && side != "right") {
                  throw Error(ErrorCode::kInvalidArgument,
                              "side must be \"left\" or \"right\"");
                }
                service.SubmitChoice(
                    req.matches[1], body.value("rater", std::string()),
                    side == "left" ? ChoiceSide::kLeft : ChoiceSide::kRight);
                SendJson(res, 200, {{"status", "recorded"}});
              }));

  server.Get(R"(/tasks/([^/]+)/generations)",
             Guard([&service](const httplib::Request& req,
                              httplib::Response& res) {
               std::string body;
               for (const json& record : service.GenerationLog(req.matches[1])) {
                 body += record.dump();
                 body += '\n';
               }
               res.set_content(body, "application/x-ndjson");
             }));

  server.Get(R"(/tasks/([^/]+)/export)",
             Guard([&service](const httplib::Request& req,
                              httplib::Response& res) {
               const int k = QueryInt(req, "k", kDefaultTopK);
               SendJson(res, 200, ToJson(service.Export(req.matches[1], k)));
             }));

  server.Post(R"(/tasks/([^/]+)/relaunch)",
              Guard([&service](const httplib::Request& req,
                               httplib::Response& res) {
                const int k = QueryInt(req, "k", kDefaultTopK);
                const auto created = service.Relaunch(req.matches[1], k);
                SendJson(res, 201,
                         {{"task_id", created.task_id},
                          {"cost_estimate",
                           {{"amount", created.cost.amount},
                            {"currency", created.cost.currency}}}});
              }));
}

}  // namespace designsearch::service
