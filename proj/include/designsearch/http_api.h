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

// JSON-over-HTTP front of TaskService.
//
//   GET  /health
//   POST /tasks                              create (optionally launch)
//   GET  /tasks                              list ids
//   GET  /tasks/{id}                         task info
//   POST /tasks/{id}/launch
//   GET  /tasks/{id}/progress
//   GET  /tasks/{id}/designs/{individual}    rendered design, text/html
//   POST /tasks/{id}/assignments?rater=R     200 assigned, 204 no work,
//                                            429 quota exhausted
//   POST /assignments/{id}/choice            {"rater": R, "side": "left"}
//   GET  /tasks/{id}/generations             one JSON record per line
//   GET  /tasks/{id}/export?k=5              {"manifest": ..., "files": ...}
//   POST /tasks/{id}/relaunch?k=5
//
// Errors are {"error": <code name>, "message": ..., "subject": ...}.

#ifndef DESIGNSEARCH_HTTP_API_H_
#define DESIGNSEARCH_HTTP_API_H_

#include <nlohmann/json.hpp>

#include "designsearch/error.h"
#include "designsearch/scheduler.h"

namespace httplib {
class Server;
}

namespace designsearch::service {

nlohmann::json ToJson(const ProgressSnapshot& progress);
nlohmann::json ToJson(const AssignmentView& assignment);
nlohmann::json ToJson(const ExportArchive& archive);

// Request body of POST /tasks. Missing fields are taken from `defaults`.
// Throws kInvalidArgument on wrong types or a missing spec_html.
TaskRequest TaskRequestFromJson(const nlohmann::json& body,
                                const TaskRequest& defaults = {});

int HttpStatusFor(ErrorCode code);

void RegisterRoutes(httplib::Server& server, TaskService& service,
                    TaskRequest defaults = {});

}  // namespace designsearch::service

#endif  // DESIGNSEARCH_HTTP_API_H_
