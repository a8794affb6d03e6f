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

// Independent invariant checker over a task service event log. It rebuilds
// lease and result state from the raw events alone and reports every
// violation it finds.

#ifndef DESIGNSEARCH_TESTS_EVENT_AUDIT_H_
#define DESIGNSEARCH_TESTS_EVENT_AUDIT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace designsearch::testing {

struct AuditSummary {
  std::vector<std::string> violations;
  std::map<std::string, int> choices_by_task;
  std::map<std::string, int> advances_by_task;
  std::map<std::string, bool> completed_by_task;
};

inline AuditSummary AuditEvents(const std::vector<nlohmann::json>& events) {
  struct HeldLease {
    std::string rater;
    int64_t expiry = 0;
  };
  struct TaskAudit {
    int pairs = 0;
    int iterations = 0;
    int quota = 0;
    int generation = 0;
    int choices_this_round = 0;
    bool completed = false;
    std::map<std::string, std::optional<HeldLease>> leases;
    std::map<std::string, bool> rated;
    std::map<std::string, int> per_rater;
  };
  AuditSummary out;
  std::map<std::string, TaskAudit> tasks;
  auto fail = [&](const std::string& what) { out.violations.push_back(what); };
  auto generation_of = [](const std::string& assignment_id) {
    const size_t first = assignment_id.find('.');
    const size_t second = assignment_id.find('.', first + 1);
    return std::stoi(assignment_id.substr(first + 1, second - first - 1));
  };

  uint64_t expected_seq = 1;
  for (const nlohmann::json& e : events) {
    if (e.at("seq").get<uint64_t>() != expected_seq++) fail("seq gap");
    const std::string type = e.at("type");
    const std::string task_id = e.at("task_id");
    if (type == "task_created") {
      TaskAudit& t = tasks[task_id];
      t.pairs = e["ga"]["population_size"].get<int>() / 2;
      t.iterations = e["ga"]["iterations"].get<int>();
      t.quota = e["budget"]["per_worker_quota"].get<int>();
      continue;
    }
    if (!tasks.contains(task_id)) {
      fail("event for unknown task " + task_id);
      continue;
    }
    TaskAudit& t = tasks[task_id];
    if (type == "task_launched") continue;
    if (type == "lease" || type == "choice") {
      const std::string id = e.at("assignment_id");
      const std::string rater = e.at("rater");
      const int64_t now = e.at("time_ms");
      if (t.completed) fail(type + " after completion on " + id);
      if (generation_of(id) != t.generation) fail(type + " off-round " + id);
      if (t.rated[id]) fail(type + " on rated pair " + id);
      auto& held = t.leases[id];
      if (type == "lease") {
        if (held && now < held->expiry && held->rater != rater) {
          fail("double lease on " + id);
        }
        held = HeldLease{rater, e.at("expiry_ms").get<int64_t>()};
      } else {
        if (!held || held->rater != rater) fail("choice by non-holder " + id);
        if (held && now >= held->expiry) fail("choice after expiry " + id);
        t.rated[id] = true;
        held.reset();
        ++t.choices_this_round;
        ++out.choices_by_task[task_id];
        if (++t.per_rater[rater] > t.quota) {
          fail("quota exceeded by " + rater);
        }
      }
      continue;
    }
    if (type == "generation_advanced" || type == "task_completed") {
      if (t.choices_this_round != t.pairs) {
        fail("round closed with " + std::to_string(t.choices_this_round) +
             " results on " + task_id);
      }
      ++t.generation;
      if (e.at("generation").get<int>() != t.generation) {
        fail("generation counter skew on " + task_id);
      }
      t.choices_this_round = 0;
      t.leases.clear();
      ++out.advances_by_task[task_id];
      if (type == "task_completed") {
        if (t.generation != t.iterations) fail("early completion");
        t.completed = true;
        out.completed_by_task[task_id] = true;
      } else if (t.generation >= t.iterations) {
        fail("advance past final iteration");
      }
      continue;
    }
    fail("unknown event type " + type);
  }
  for (const auto& [task_id, t] : tasks) {
    if (t.choices_this_round > t.pairs) fail("overfull round on " + task_id);
  }
  return out;
}

}  // namespace designsearch::testing

#endif  // DESIGNSEARCH_TESTS_EVENT_AUDIT_H_
