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

// Exploration task service: hands comparison pairs to raters under leases and
// per-rater quotas, records choices, and advances the genetic search exactly
// once per completed round.
//
// Every state change is an event appended to `<store>/events.jsonl` before it
// is applied; on start-up the log is replayed, so a restart resumes the same
// state mid-generation. All operations on one task are serialized by that
// task's mutex, which makes request/submit linearizable per task.

#ifndef DESIGNSEARCH_SCHEDULER_H_
#define DESIGNSEARCH_SCHEDULER_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "designsearch/ga.h"
#include "designsearch/genome.h"
#include "designsearch/markup.h"

namespace designsearch::service {

// Milliseconds since an arbitrary epoch.
using Clock = std::function<int64_t()>;
int64_t SystemClockMillis();

inline constexpr int64_t kDefaultLeaseMillis = 10 * 60 * 1000;
inline constexpr int kDefaultTopK = 5;

struct Budget {
  int worker_count = 50;
  int per_worker_quota = 5;
  double unit_pay = 0.5;
  std::string currency = "USD";
};

struct CostEstimate {
  double amount = 0.0;
  std::string currency;
};

// Pay per worker times workers; nothing is ever charged.
CostEstimate EstimateCost(const Budget& budget);

enum class TaskState { kCreated, kRunning, kBetweenGenerations, kCompleted };
std::string_view TaskStateName(TaskState state);

struct TaskRequest {
  std::string name;
  std::string spec_html;
  GaConfig ga;
  Budget budget;
};

struct Lease {
  std::string rater_id;
  int64_t expiry_ms = 0;
};

struct Assignment {
  std::string assignment_id;
  std::string task_id;
  int generation = 0;
  IdPair pair;
  std::optional<Lease> lease;
  std::optional<ComparisonResult> result;
  // When set, the right-hand design is pair.first.
  bool swapped = false;
  int lease_count = 0;
};

enum class RequestStatus { kAssigned, kNoWork, kQuotaExhausted };

struct AssignmentView {
  std::string assignment_id;
  std::string task_id;
  int generation = 0;
  uint64_t left_id = 0;
  uint64_t right_id = 0;
  std::string left_url;
  std::string right_url;
  int64_t lease_expiry_ms = 0;
};

struct RequestOutcome {
  RequestStatus status = RequestStatus::kNoWork;
  std::optional<AssignmentView> assignment;
};

enum class ChoiceSide { kLeft, kRight };

struct ProgressSnapshot {
  std::string task_id;
  std::string name;
  TaskState state = TaskState::kCreated;
  int generation = 0;
  int iterations = 0;
  int worker_count = 0;
  int total_pairs = 0;
  int rated = 0;
  int leased = 0;
  int pending = 0;
  int results_total = 0;
  std::vector<uint64_t> population_ids;
  std::vector<std::string> design_urls;
  // Filled once at least one round has completed.
  std::vector<uint64_t> top_ids;
};

struct ExportedDesign {
  std::string filename;
  uint64_t individual_id = 0;
  int generation = 0;
  int rank = 0;
  Sequence sequence;
  std::string html;
};

struct ExportArchive {
  std::vector<ExportedDesign> files;
  nlohmann::json manifest;
};

// Writes each design plus manifest.json into `dir` (created if missing).
void WriteArchive(const ExportArchive& archive,
                  const std::filesystem::path& dir);

std::string DesignUrl(const std::string& task_id, uint64_t individual_id);

struct ServiceOptions {
  // Empty keeps everything in memory.
  std::filesystem::path store_dir;
  int64_t lease_millis = kDefaultLeaseMillis;
  Clock clock;
};

class TaskService {
 public:
  explicit TaskService(ServiceOptions options);
  ~TaskService();

  TaskService(const TaskService&) = delete;
  TaskService& operator=(const TaskService&) = delete;

  struct Created {
    std::string task_id;
    CostEstimate cost;
  };

  // Parses and validates the spec. Throws the parser's Error, or
  // kValidationFailed with the first diagnostic, or kInvalidArgument when
  // the budget cannot cover one round of pairs.
  Created CreateTask(const TaskRequest& request);
  void Launch(const std::string& task_id);

  RequestOutcome RequestAssignment(const std::string& task_id,
                                   const std::string& rater_id);

  // Throws kUnknownAssignment, kAlreadySubmitted, kNotLeaseHolder or
  // kLeaseExpired without changing state.
  void SubmitChoice(const std::string& assignment_id,
                    const std::string& rater_id, ChoiceSide side);

  ProgressSnapshot Progress(const std::string& task_id) const;
  nlohmann::json TaskInfo(const std::string& task_id) const;
  std::string RenderDesign(const std::string& task_id,
                           uint64_t individual_id) const;

  // Top-k of the most recently completed round. Throws kNotReady before the
  // first round completes.
  ExportArchive Export(const std::string& task_id, int k) const;

  // New task from a completed one, seeded with its top-k designs.
  Created Relaunch(const std::string& task_id, int k);

  std::vector<std::string> TaskIds() const;

  // One record per completed round: sequences, masks, pairs and results.
  std::vector<nlohmann::json> GenerationLog(const std::string& task_id) const;

  // Snapshot of the event log (in memory mirror of the store).
  std::vector<nlohmann::json> Events() const;

 private:
  struct Task;

  Task& FindTask(const std::string& task_id) const;
  void Append(nlohmann::json event);
  void Replay();
  void ApplyEvent(const nlohmann::json& event, bool replaying);
  void ApplyCreate(const nlohmann::json& event);
  // Returns true when the choice completed the round.
  bool ApplyChoice(Task& task, const nlohmann::json& event);
  void OpenRound(Task& task);
  int64_t Now() const { return options_.clock(); }

  ServiceOptions options_;
  mutable std::mutex tasks_mu_;
  std::map<std::string, std::unique_ptr<Task>> tasks_;
  int next_task_ = 1;

  mutable std::mutex log_mu_;
  std::ofstream log_;
  std::vector<nlohmann::json> events_;
  uint64_t next_seq_ = 1;
};

}  // namespace designsearch::service

#endif  // DESIGNSEARCH_SCHEDULER_H_
