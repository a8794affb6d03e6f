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

#include "designsearch/scheduler.h"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "designsearch/error.h"
#include "designsearch/random.h"

namespace designsearch::service {

using nlohmann::json;

namespace {

constexpr char kLogName[] = "events.jsonl";

uint64_t Fnv1a(std::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

json GaToJson(const GaConfig& ga) {
  return {{"population_size", ga.population_size},
          {"iterations", ga.iterations},
          {"mutation_rate", ga.mutation_rate},
          {"seed", ga.rng_seed}};
}

GaConfig GaFromJson(const json& j) {
  GaConfig ga;
  ga.population_size = j.at("population_size").get<int>();
  ga.iterations = j.at("iterations").get<int>();
  ga.mutation_rate = j.at("mutation_rate").get<double>();
  ga.rng_seed = j.at("seed").get<uint64_t>();
  return ga;
}

json BudgetToJson(const Budget& budget) {
  return {{"worker_count", budget.worker_count},
          {"per_worker_quota", budget.per_worker_quota},
          {"unit_pay", budget.unit_pay},
          {"currency", budget.currency}};
}

Budget BudgetFromJson(const json& j) {
  Budget budget;
  budget.worker_count = j.at("worker_count").get<int>();
  budget.per_worker_quota = j.at("per_worker_quota").get<int>();
  budget.unit_pay = j.at("unit_pay").get<double>();
  budget.currency = j.at("currency").get<std::string>();
  return budget;
}

std::string JoinSegments(const OptionValue& value) {
  std::string out;
  for (size_t i = 0; i < value.segments.size(); ++i) {
    if (i > 0) out += ';';
    out += value.segments[i];
  }
  return out;
}

// "t3.2.17" -> "t3"
std::string TaskOfAssignment(const std::string& assignment_id) {
  return assignment_id.substr(0, assignment_id.find('.'));
}

}  // namespace

int64_t SystemClockMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

CostEstimate EstimateCost(const Budget& budget) {
  return {budget.worker_count * budget.unit_pay, budget.currency};
}

std::string_view TaskStateName(TaskState state) {
  switch (state) {
    case TaskState::kCreated:
      return "created";
    case TaskState::kRunning:
      return "running";
    case TaskState::kBetweenGenerations:
      return "between_generations";
    case TaskState::kCompleted:
      return "completed";
  }
  return "unknown";
}

std::string DesignUrl(const std::string& task_id, uint64_t individual_id) {
  return "/tasks/" + task_id + "/designs/" + std::to_string(individual_id);
}

void WriteArchive(const ExportArchive& archive,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kStorage,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  auto write = [&](const std::filesystem::path& path,
                   const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error(ErrorCode::kStorage, "cannot write " + path.string());
  };
  for (const ExportedDesign& design : archive.files) {
    write(dir / design.filename, design.html);
  }
  write(dir / "manifest.json", archive.manifest.dump(2) + "\n");
}

struct TaskService::Task {
  mutable std::mutex mu;
  std::string id;
  std::string name;
  std::string spec_html;
  std::optional<std::string> parent_task;
  DesignSpec spec;
  GeneSchema schema;
  GaConfig ga;
  Budget budget;
  std::vector<Sequence> seeds;
  std::unique_ptr<Evolution> evolution;
  TaskState state = TaskState::kCreated;
  std::vector<Assignment> assignments;
  std::map<std::string, int> completed_by_rater;
  int results_total = 0;

  bool SwapBit(const Assignment& a) const {
    const uint64_t base = DeriveSeed(ga.rng_seed, 0x5eedULL);
    return DeriveSeed(base ^ Fnv1a(a.assignment_id), a.lease_count) & 1;
  }

  Assignment* FindAssignment(const std::string& assignment_id) {
    // "<task>.<generation>.<index>"
    const size_t first = assignment_id.find('.');
    const size_t second = assignment_id.find('.', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      return nullptr;
    }
    int generation = 0;
    size_t index = 0;
    try {
      generation = std::stoi(assignment_id.substr(first + 1, second - first));
      index = std::stoul(assignment_id.substr(second + 1));
    } catch (const std::exception&) {
      return nullptr;
    }
    if (generation != evolution->generation() ||
        index >= assignments.size() ||
        assignments[index].assignment_id != assignment_id) {
      return nullptr;
    }
    return &assignments[index];
  }

  AssignmentView View(const Assignment& a) const {
    AssignmentView view;
    view.assignment_id = a.assignment_id;
    view.task_id = id;
    view.generation = a.generation;
    view.left_id = a.swapped ? a.pair.second : a.pair.first;
    view.right_id = a.swapped ? a.pair.first : a.pair.second;
    view.left_url = DesignUrl(id, view.left_id);
    view.right_url = DesignUrl(id, view.right_id);
    view.lease_expiry_ms = a.lease ? a.lease->expiry_ms : 0;
    return view;
  }
};

TaskService::TaskService(ServiceOptions options)
    : options_(std::move(options)) {
  if (!options_.clock) options_.clock = SystemClockMillis;
  if (options_.lease_millis <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "lease duration must be positive");
  }
  if (options_.store_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(options_.store_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kStorage, "cannot create store " +
                                         options_.store_dir.string() + ": " +
                                         ec.message());
  }
  Replay();
  log_.open(options_.store_dir / kLogName, std::ios::binary | std::ios::app);
  if (!log_) {
    throw Error(ErrorCode::kStorage,
                "cannot open event log in " + options_.store_dir.string());
  }
}

TaskService::~TaskService() = default;

void TaskService::Replay() {
  const std::filesystem::path path = options_.store_dir / kLogName;
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::streamoff good_bytes = 0;
  std::vector<json> parsed;
  bool torn = false;
  while (std::getline(in, line)) {
    const bool has_newline = !in.eof();
    if (line.empty()) {
      good_bytes += 1;
      continue;
    }
    json event = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (event.is_discarded() || !has_newline) {
      if (in.peek() != std::char_traits<char>::eof() && has_newline) {
        throw Error(ErrorCode::kStorage,
                    "corrupt event log line in " + path.string());
      }
      // A write torn by a crash; drop it.
      torn = true;
      break;
    }
    parsed.push_back(std::move(event));
    good_bytes += static_cast<std::streamoff>(line.size()) + 1;
  }
  in.close();
  if (torn) std::filesystem::resize_file(path, good_bytes);
  for (const json& event : parsed) {
    try {
      ApplyEvent(event, /*replaying=*/true);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kStorage,
                  std::string("malformed event in log: ") + e.what());
    }
    next_seq_ = event.at("seq").get<uint64_t>() + 1;
    events_.push_back(event);
  }
}

void TaskService::Append(json event) {
  std::lock_guard<std::mutex> lock(log_mu_);
  event["seq"] = next_seq_;
  if (log_.is_open()) {
    log_ << event.dump() << '\n';
    log_.flush();
    if (!log_) throw Error(ErrorCode::kStorage, "event log write failed");
  }
  ++next_seq_;
  events_.push_back(std::move(event));
}

std::vector<json> TaskService::Events() const {
  std::lock_guard<std::mutex> lock(log_mu_);
  return events_;
}

TaskService::Task& TaskService::FindTask(const std::string& task_id) const {
  std::lock_guard<std::mutex> lock(tasks_mu_);
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) {
    throw Error(ErrorCode::kUnknownTask, "unknown task " + task_id, task_id);
  }
  return *it->second;
}

std::vector<std::string> TaskService::TaskIds() const {
  std::lock_guard<std::mutex> lock(tasks_mu_);
  std::vector<std::string> ids;
  for (const auto& [id, task] : tasks_) ids.push_back(id);
  return ids;
}

void TaskService::ApplyEvent(const json& event, bool replaying) {
  const std::string type = event.at("type").get<std::string>();
  if (type == "task_created") {
    ApplyCreate(event);
    return;
  }
  Task& task = FindTask(event.at("task_id").get<std::string>());
  if (type == "task_launched") {
    task.state = TaskState::kRunning;
    OpenRound(task);
  } else if (type == "lease") {
    Assignment* a =
        task.FindAssignment(event.at("assignment_id").get<std::string>());
    if (a == nullptr) throw Error(ErrorCode::kStorage, "lease on unknown pair");
    a->lease = Lease{event.at("rater").get<std::string>(),
                     event.at("expiry_ms").get<int64_t>()};
    a->swapped = event.at("swapped").get<bool>();
    ++a->lease_count;
  } else if (type == "choice") {
    ApplyChoice(task, event);
  } else if (type == "generation_advanced" || type == "task_completed") {
    const int generation = event.at("generation").get<int>();
    if (replaying && generation != task.evolution->generation()) {
      throw Error(ErrorCode::kStorage,
                  "event log disagrees with replayed generation for " +
                      task.id);
    }
  } else {
    throw Error(ErrorCode::kStorage, "unknown event type " + type);
  }
}

void TaskService::ApplyCreate(const json& event) {
  auto task = std::make_unique<Task>();
  task->id = event.at("task_id").get<std::string>();
  task->name = event.at("name").get<std::string>();
  task->spec_html = event.at("spec_html").get<std::string>();
  if (event.contains("parent_task")) {
    task->parent_task = event.at("parent_task").get<std::string>();
  }
  task->ga = GaFromJson(event.at("ga"));
  task->budget = BudgetFromJson(event.at("budget"));
  task->seeds = event.at("seeds").get<std::vector<Sequence>>();
  task->spec = Parse(task->spec_html);
  task->schema = BuildSchema(task->spec);
  task->evolution =
      std::make_unique<Evolution>(task->schema, task->ga, task->seeds);
  const int number = std::stoi(task->id.substr(1));
  next_task_ = std::max(next_task_, number + 1);
  tasks_[task->id] = std::move(task);
}

void TaskService::OpenRound(Task& task) {
  const int generation = task.evolution->generation();
  task.assignments.clear();
  const auto& pairs = task.evolution->pairs();
  for (size_t i = 0; i < pairs.size(); ++i) {
    Assignment a;
    a.assignment_id = task.id + "." + std::to_string(generation) + "." +
                      std::to_string(i);
    a.task_id = task.id;
    a.generation = generation;
    a.pair = pairs[i];
    task.assignments.push_back(std::move(a));
  }
}

bool TaskService::ApplyChoice(Task& task, const json& event) {
  Assignment* a =
      task.FindAssignment(event.at("assignment_id").get<std::string>());
  if (a == nullptr || a->result) {
    throw Error(ErrorCode::kStorage, "choice on unknown or rated pair");
  }
  const std::string rater = event.at("rater").get<std::string>();
  const bool left = event.at("side").get<std::string>() == "left";
  // The left slot shows pair.first unless swapped.
  const bool first_wins = left != a->swapped;
  a->result = ComparisonResult{a->pair.first, a->pair.second,
                               first_wins ? Side::kA : Side::kB, rater};
  a->lease.reset();
  ++task.completed_by_rater[rater];
  ++task.results_total;

  for (const Assignment& other : task.assignments) {
    if (!other.result) return false;
  }
  task.state = TaskState::kBetweenGenerations;
  std::vector<ComparisonResult> results;
  results.reserve(task.assignments.size());
  for (const Assignment& done : task.assignments) {
    results.push_back(*done.result);
  }
  task.evolution->CompleteRound(results);
  if (task.evolution->finished()) {
    task.state = TaskState::kCompleted;
  } else {
    OpenRound(task);
    task.state = TaskState::kRunning;
  }
  return true;
}

TaskService::Created TaskService::CreateTask(const TaskRequest& request) {
  request.ga.Validate();
  const Budget& budget = request.budget;
  if (budget.worker_count < 1 || budget.per_worker_quota < 1 ||
      !(budget.unit_pay >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "worker_count and per_worker_quota must be positive and "
                "unit_pay non-negative");
  }
  const int pairs = request.ga.population_size / 2;
  if (static_cast<int64_t>(budget.worker_count) * budget.per_worker_quota <
      pairs) {
    throw Error(ErrorCode::kInvalidArgument,
                "budget covers fewer comparisons than one generation needs (" +
                    std::to_string(pairs) + ")");
  }
  const DesignSpec spec = Parse(request.spec_html);
  if (auto diagnostics = Validate(spec); !diagnostics.empty()) {
    throw Error(ErrorCode::kValidationFailed, diagnostics.front().message,
                diagnostics.front().element_id);
  }

  std::lock_guard<std::mutex> lock(tasks_mu_);
  const std::string task_id = "t" + std::to_string(next_task_);
  json event = {{"type", "task_created"},
                {"task_id", task_id},
                {"time_ms", Now()},
                {"name", request.name},
                {"spec_html", request.spec_html},
                {"ga", GaToJson(request.ga)},
                {"budget", BudgetToJson(budget)},
                {"seeds", json::array()}};
  Append(event);
  ApplyCreate(event);
  return {task_id, EstimateCost(budget)};
}

void TaskService::Launch(const std::string& task_id) {
  Task& task = FindTask(task_id);
  std::lock_guard<std::mutex> lock(task.mu);
  if (task.state != TaskState::kCreated) {
    throw Error(ErrorCode::kInvalidState,
                "task " + task_id + " is already " +
                    std::string(TaskStateName(task.state)),
                task_id);
  }
  json event = {{"type", "task_launched"},
                {"task_id", task_id},
                {"time_ms", Now()}};
  Append(event);
  ApplyEvent(event, false);
}

RequestOutcome TaskService::RequestAssignment(const std::string& task_id,
                                              const std::string& rater_id) {
  if (rater_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rater id is required");
  }
  Task& task = FindTask(task_id);
  std::lock_guard<std::mutex> lock(task.mu);
  if (task.state == TaskState::kCreated) {
    throw Error(ErrorCode::kInvalidState,
                "task " + task_id + " has not been launched", task_id);
  }
  RequestOutcome outcome;
  if (task.state == TaskState::kCompleted) return outcome;
  if (task.completed_by_rater[rater_id] >= task.budget.per_worker_quota) {
    outcome.status = RequestStatus::kQuotaExhausted;
    return outcome;
  }
  const int64_t now = Now();
  Assignment* open = nullptr;
  for (Assignment& a : task.assignments) {
    if (a.result) continue;
    const bool live = a.lease && now < a.lease->expiry_ms;
    if (live && a.lease->rater_id == rater_id) {
      outcome.status = RequestStatus::kAssigned;
      outcome.assignment = task.View(a);
      return outcome;
    }
    if (!live && open == nullptr) open = &a;
  }
  if (open == nullptr) return outcome;

  json event = {{"type", "lease"},
                {"task_id", task_id},
                {"assignment_id", open->assignment_id},
                {"rater", rater_id},
                {"time_ms", now},
                {"expiry_ms", now + options_.lease_millis},
                {"swapped", task.SwapBit(*open)}};
  Append(event);
  ApplyEvent(event, false);
  outcome.status = RequestStatus::kAssigned;
  outcome.assignment = task.View(*open);
  return outcome;
}

void TaskService::SubmitChoice(const std::string& assignment_id,
                               const std::string& rater_id, ChoiceSide side) {
  Task* task_ptr = nullptr;
  try {
    task_ptr = &FindTask(TaskOfAssignment(assignment_id));
  } catch (const Error&) {
    throw Error(ErrorCode::kUnknownAssignment,
                "unknown assignment " + assignment_id, assignment_id);
  }
  Task& task = *task_ptr;
  std::lock_guard<std::mutex> lock(task.mu);
  if (task.state == TaskState::kCreated) {
    throw Error(ErrorCode::kUnknownAssignment,
                "unknown assignment " + assignment_id, assignment_id);
  }
  Assignment* a = task.FindAssignment(assignment_id);
  if (a == nullptr) {
    // Ids from earlier rounds were all rated before the round closed.
    const size_t first = assignment_id.find('.');
    const size_t second = assignment_id.find('.', first + 1);
    if (first != std::string::npos && second != std::string::npos) {
      try {
        const int generation =
            std::stoi(assignment_id.substr(first + 1, second - first));
        const size_t index = std::stoul(assignment_id.substr(second + 1));
        if (generation >= 0 && generation < task.evolution->generation() &&
            index < task.evolution->history()[generation].pairs.size()) {
          throw Error(ErrorCode::kAlreadySubmitted,
                      "assignment " + assignment_id + " was already rated",
                      assignment_id);
        }
      } catch (const std::logic_error&) {
      }
    }
    throw Error(ErrorCode::kUnknownAssignment,
                "unknown assignment " + assignment_id, assignment_id);
  }
  if (a->result) {
    throw Error(ErrorCode::kAlreadySubmitted,
                "assignment " + assignment_id + " was already rated",
                assignment_id);
  }
  if (!a->lease || a->lease->rater_id != rater_id) {
    throw Error(ErrorCode::kNotLeaseHolder,
                "rater " + rater_id + " does not hold " + assignment_id,
                assignment_id);
  }
  const int64_t now = Now();
  if (now >= a->lease->expiry_ms) {
    throw Error(ErrorCode::kLeaseExpired,
                "lease on " + assignment_id + " expired", assignment_id);
  }
  json event = {{"type", "choice"},
                {"task_id", task.id},
                {"assignment_id", assignment_id},
                {"rater", rater_id},
                {"time_ms", now},
                {"side", side == ChoiceSide::kLeft ? "left" : "right"}};
  Append(event);
  if (!ApplyChoice(task, event)) return;
  const bool done = task.state == TaskState::kCompleted;
  json marker = {{"type", done ? "task_completed" : "generation_advanced"},
                 {"task_id", task.id},
                 {"time_ms", now},
                 {"generation", task.evolution->generation()}};
  Append(marker);
}

ProgressSnapshot TaskService::Progress(const std::string& task_id) const {
  Task& task = FindTask(task_id);
  std::lock_guard<std::mutex> lock(task.mu);
  ProgressSnapshot p;
  p.task_id = task.id;
  p.name = task.name;
  p.state = task.state;
  p.generation = task.evolution->generation();
  p.iterations = task.ga.iterations;
  p.worker_count = task.budget.worker_count;
  p.total_pairs = static_cast<int>(task.evolution->pairs().size());
  p.results_total = task.results_total;
  const int64_t now = Now();
  if (task.state == TaskState::kCompleted) {
    p.rated = p.total_pairs;
  } else {
    for (const Assignment& a : task.assignments) {
      if (a.result) {
        ++p.rated;
      } else if (a.lease && now < a.lease->expiry_ms) {
        ++p.leased;
      }
    }
  }
  p.pending = p.total_pairs - p.rated - p.leased;
  for (const Individual& individual : task.evolution->population()) {
    p.population_ids.push_back(individual.id);
    p.design_urls.push_back(DesignUrl(task.id, individual.id));
  }
  for (const Individual& top : task.evolution->Top(kDefaultTopK)) {
    p.top_ids.push_back(top.id);
  }
  return p;
}

std::vector<json> TaskService::GenerationLog(const std::string& task_id) const {
  Task& task = FindTask(task_id);
  std::lock_guard<std::mutex> lock(task.mu);
  std::vector<json> records;
  for (const GenerationRecord& record : task.evolution->history()) {
    records.push_back(ToJson(record));
  }
  return records;
}

json TaskService::TaskInfo(const std::string& task_id) const {
  Task& task = FindTask(task_id);
  std::lock_guard<std::mutex> lock(task.mu);
  const CostEstimate cost = EstimateCost(task.budget);
  json info = {
      {"task_id", task.id},
      {"name", task.name},
      {"state", TaskStateName(task.state)},
      {"generation", task.evolution->generation()},
      {"ga", GaToJson(task.ga)},
      {"budget", BudgetToJson(task.budget)},
      {"cost_estimate", {{"amount", cost.amount}, {"currency", cost.currency}}},
      {"attribute_count", task.spec.attributes.size()},
      {"space_size", CountSpace(task.schema).ToString()},
      {"seeded_designs", task.seeds.size()},
  };
  if (task.parent_task) info["parent_task"] = *task.parent_task;
  return info;
}

std::string TaskService::RenderDesign(const std::string& task_id,
                                      uint64_t individual_id) const {
  Task& task = FindTask(task_id);
  std::lock_guard<std::mutex> lock(task.mu);
  const Individual* individual = task.evolution->Find(individual_id);
  if (individual == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "task " + task_id + " has no design " +
                    std::to_string(individual_id),
                std::to_string(individual_id));
  }
  return Render(task.spec, task.schema, individual->sequence);
}

ExportArchive TaskService::Export(const std::string& task_id, int k) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  Task& task = FindTask(task_id);
  std::lock_guard<std::mutex> lock(task.mu);
  const std::vector<Individual> top = task.evolution->Top(k);
  if (top.empty()) {
    throw Error(ErrorCode::kNotReady,
                "task " + task_id + " has not completed a generation",
                task_id);
  }
  const GenerationRecord& round = task.evolution->history().back();
  ExportArchive archive;
  archive.manifest = {{"task_id", task.id},
                      {"name", task.name},
                      {"generation", round.generation},
                      {"state", TaskStateName(task.state)},
                      {"k", k},
                      {"designs", json::array()}};
  for (size_t rank = 0; rank < top.size(); ++rank) {
    const Individual& individual = top[rank];
    ExportedDesign design;
    design.individual_id = individual.id;
    design.generation = round.generation;
    design.rank = static_cast<int>(rank) + 1;
    design.filename = "design-" + std::to_string(round.generation) + "-" +
                      std::to_string(design.rank) + ".html";
    design.sequence = individual.sequence;
    design.html = Render(task.spec, task.schema, individual.sequence);
    int votes = 0;
    for (const ComparisonResult& result : round.results) {
      if (result.winner_id() == individual.id) ++votes;
    }
    json configuration = json::array();
    const std::vector<bool> active =
        ActiveGenes(task.schema, individual.sequence);
    for (const Choice& choice : Decode(task.spec, individual.sequence)) {
      if (!active[choice.attr_id]) continue;
      configuration.push_back(
          {{"attr_id", choice.attr_id},
           {"owner_element_id",
            task.spec.attributes[choice.attr_id].owner_element_id},
           {"value", JoinSegments(choice.value)}});
    }
    archive.manifest["designs"].push_back(
        {{"file", design.filename},
         {"individual_id", design.individual_id},
         {"rank", design.rank},
         {"votes", votes},
         {"lineage_wins", individual.lineage_wins},
         {"sequence", design.sequence},
         {"configuration", configuration}});
    archive.files.push_back(std::move(design));
  }
  return archive;
}

TaskService::Created TaskService::Relaunch(const std::string& task_id,
                                           int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  TaskRequest request;
  std::vector<Sequence> seeds;
  {
    Task& task = FindTask(task_id);
    std::lock_guard<std::mutex> lock(task.mu);
    if (task.state != TaskState::kCompleted) {
      throw Error(ErrorCode::kInvalidState,
                  "only a completed task can be relaunched", task_id);
    }
    request.name = task.name;
    request.spec_html = task.spec_html;
    request.ga = task.ga;
    request.ga.rng_seed = DeriveSeed(task.ga.rng_seed, 0x7e1a);
    request.budget = task.budget;
    for (const Individual& top : task.evolution->Top(k)) {
      seeds.push_back(top.sequence);
    }
  }
  std::lock_guard<std::mutex> lock(tasks_mu_);
  const std::string new_id = "t" + std::to_string(next_task_);
  json event = {{"type", "task_created"},
                {"task_id", new_id},
                {"time_ms", Now()},
                {"name", request.name},
                {"spec_html", request.spec_html},
                {"ga", GaToJson(request.ga)},
                {"budget", BudgetToJson(request.budget)},
                {"seeds", seeds},
                {"parent_task", task_id}};
  Append(event);
  ApplyCreate(event);
  return {new_id, EstimateCost(request.budget)};
}

}  // namespace designsearch::service
