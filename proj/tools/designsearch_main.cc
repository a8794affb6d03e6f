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

// designsearch: parse, preview, simulate and serve annotated design specs.
//
// Exit codes: 0 success, 1 validation or usage error, 2 runtime error.

#include <httplib.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "designsearch/error.h"
#include "designsearch/genome.h"
#include "designsearch/http_api.h"
#include "designsearch/markup.h"
#include "designsearch/random.h"
#include "designsearch/scheduler.h"
#include "designsearch/sim.h"

namespace ds = designsearch;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// Thrown for I/O and environment failures so they map to exit code 2.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw RuntimeFailure("cannot write " + path.string());
}

// Parses and validates; prints diagnostics and returns false when unclean.
bool LoadSpec(const std::string& path, ds::DesignSpec& spec) {
  spec = ds::Parse(ReadFile(path));
  const auto diagnostics = ds::Validate(spec);
  for (const ds::Diagnostic& d : diagnostics) {
    std::cerr << path << ": " << ds::DiagnosticCodeName(d.code) << " ["
              << d.element_id << "] " << d.message << "\n";
  }
  return diagnostics.empty();
}

struct ParseArgs {
  std::string file;
  bool json = false;
};

int RunParse(const ParseArgs& args) {
  ds::DesignSpec spec;
  if (!LoadSpec(args.file, spec)) return kExitValidation;
  const ds::SpaceSize size = ds::CountSpace(ds::BuildSchema(spec));
  if (args.json) {
    nlohmann::json out = ds::ToJson(spec);
    out["space_size"] = size.ToString();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << spec.attributes.size() << " attributes, space size "
              << size.ToString() << "\n";
  }
  return 0;
}

struct PreviewArgs {
  std::string file;
  int sample = 10;
  uint64_t seed = 1;
  std::string out = "preview";
};

int RunPreview(const PreviewArgs& args) {
  ds::DesignSpec spec;
  if (!LoadSpec(args.file, spec)) return kExitValidation;
  if (args.sample < 1) {
    std::cerr << "--sample must be >= 1\n";
    return kExitValidation;
  }
  const ds::GeneSchema schema = ds::BuildSchema(spec);
  const ds::SpaceSize size = ds::CountSpace(schema);
  std::vector<ds::Sequence> designs;
  if (!size.saturated && size.value <= static_cast<uint64_t>(args.sample)) {
    ds::ForEachDesign(schema, [&](const ds::Sequence& s) {
      designs.push_back(s);
      return true;
    });
  } else {
    ds::Rng rng(args.seed);
    std::set<ds::Sequence> seen;
    while (static_cast<int>(designs.size()) < args.sample) {
      ds::Sequence s(schema.gene_count());
      for (int g = 0; g < schema.gene_count(); ++g) {
        s[g] = static_cast<int>(rng.Below(schema.option_counts[g]));
      }
      s = ds::Canonicalize(schema, s);
      if (seen.insert(s).second) designs.push_back(s);
    }
  }
  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (ec) throw RuntimeFailure("cannot create " + args.out);
  for (size_t i = 0; i < designs.size(); ++i) {
    WriteFile(fs::path(args.out) / ("design-" + std::to_string(i) + ".html"),
              ds::Render(spec, schema, designs[i]));
  }
  std::cout << "wrote " << designs.size() << " of " << size.ToString()
            << " designs to " << args.out << "\n";
  return 0;
}

struct SimulateArgs {
  std::string file;
  int seeds = 20;
  uint64_t base_seed = 1;
  double beta = 1.0;
  double interaction = 0.0;
  int votes = 100;
  int uniform_samples = 500;
  int top_k = 5;
  int population = 50;
  int iterations = 10;
  double mutation = 0.03;
  std::vector<uint64_t> sweep;
  bool json = false;
  bool csv = false;
};

int RunSimulate(const SimulateArgs& args) {
  ds::sim::ExperimentOptions options;
  for (int i = 0; i < args.seeds; ++i) {
    options.seeds.push_back(ds::DeriveSeed(args.base_seed, i));
  }
  options.noise_beta = args.beta;
  options.interaction_scale = args.interaction;
  options.n_votes = args.votes;
  options.uniform_samples = args.uniform_samples;
  options.top_k = args.top_k;
  options.ga.population_size = args.population;
  options.ga.iterations = args.iterations;
  options.ga.mutation_rate = args.mutation;
  options.ga.Validate();

  std::vector<ds::sim::ExperimentReport> reports;
  if (!args.sweep.empty()) {
    reports = ds::sim::RunSpaceSizeSweep(args.sweep, options);
  } else {
    if (args.file.empty()) {
      std::cerr << "simulate needs a spec file or --sweep\n";
      return kExitValidation;
    }
    ds::DesignSpec spec;
    if (!LoadSpec(args.file, spec)) return kExitValidation;
    reports.push_back(ds::sim::RunExperiment(
        ds::BuildSchema(spec), options, fs::path(args.file).stem().string()));
  }
  if (args.json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& report : reports) out.push_back(ds::sim::ToJson(report));
    std::cout << out.dump(2) << "\n";
  } else if (args.csv) {
    std::cout << ds::sim::FormatCsv(reports);
  } else {
    std::cout << ds::sim::FormatTable(reports);
  }
  return 0;
}

struct ServeArgs {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::string store;
  double lease_minutes = 10.0;
  // Defaults for tasks whose POST body leaves these out.
  ds::service::TaskRequest task_defaults;
};

httplib::Server* g_server = nullptr;

void StopServer(int) {
  if (g_server != nullptr) g_server->stop();
}

int RunServe(const ServeArgs& args) {
  ds::service::ServiceOptions options;
  options.store_dir = args.store;
  options.lease_millis = static_cast<int64_t>(args.lease_minutes * 60000.0);
  ds::service::TaskService service(std::move(options));
  httplib::Server server;
  // Address reuse only; SO_REUSEPORT would let a second server share the port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  ds::service::RegisterRoutes(server, service, args.task_defaults);
  if (!server.bind_to_port(args.host, args.port)) {
    std::cerr << "cannot listen on " << args.host << ":" << args.port
              << " (port in use or not permitted)\n";
    return kExitRuntime;
  }
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::cerr << "serving on " << args.host << ":" << args.port << ", store "
            << args.store << "\n";
  const bool ok = server.listen_after_bind();
  g_server = nullptr;
  return ok ? 0 : kExitRuntime;
}

struct ExportArgs {
  std::string store;
  std::string task;
  int k = 5;
  std::string out = "export";
};

int RunExport(const ExportArgs& args) {
  ds::service::ServiceOptions options;
  options.store_dir = args.store;
  ds::service::TaskService service(std::move(options));
  const auto archive = service.Export(args.task, args.k);
  ds::service::WriteArchive(archive, args.out);
  std::cout << "wrote " << archive.files.size() << " designs to " << args.out
            << "\n";
  return 0;
}

std::string DefaultStore() {
  const char* env = std::getenv("DESIGNSEARCH_STORE");
  return env != nullptr ? env : "designsearch-store";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crowd-guided exploration of annotated web design spaces"};
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.require_subcommand(1);

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Validate a spec and size it");
  parse->add_option("file", parse_args.file, "Annotated HTML")->required();
  parse->add_flag("--json", parse_args.json, "Print the parsed spec as JSON");

  PreviewArgs preview_args;
  auto* preview =
      app.add_subcommand("preview", "Render distinct sample designs");
  preview->add_option("file", preview_args.file, "Annotated HTML")->required();
  preview->add_option("--sample", preview_args.sample, "Designs to render");
  preview->add_option("--seed", preview_args.seed, "Sampling seed");
  preview->add_option("--out", preview_args.out, "Output directory");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand(
      "simulate", "GA versus uniform sampling with synthetic raters");
  simulate->add_option("file", sim_args.file, "Annotated HTML");
  simulate->add_option("--seeds", sim_args.seeds, "Independent runs");
  simulate->add_option("--seed", sim_args.base_seed, "Base seed");
  simulate->add_option("--beta", sim_args.beta,
                       "Rater sharpness (0 = coin flip, inf = noiseless)");
  simulate->add_option("--interaction", sim_args.interaction,
                       "Scale of pairwise utility cross-terms");
  simulate->add_option("--votes", sim_args.votes, "Cross-method votes");
  simulate->add_option("--uniform-samples", sim_args.uniform_samples,
                       "Uniform baseline sample count");
  simulate->add_option("--top-k", sim_args.top_k, "Designs kept per method");
  simulate->add_option("--population", sim_args.population,
                       "GA population size");
  simulate->add_option("--iterations", sim_args.iterations, "GA generations");
  simulate->add_option("--mutation", sim_args.mutation, "GA mutation rate");
  simulate
      ->add_option("--sweep", sim_args.sweep,
                   "Cover family sizes to sweep instead of a file")
      ->delimiter(',');
  simulate->add_flag("--json", sim_args.json, "JSON report");
  simulate->add_flag("--csv", sim_args.csv, "CSV report");

  ServeArgs serve_args;
  serve_args.store = DefaultStore();
  auto* serve = app.add_subcommand("serve", "Run the task HTTP service");
  serve->add_option("--host", serve_args.host, "Bind address");
  serve->add_option("--port", serve_args.port, "TCP port");
  serve->add_option("--store", serve_args.store,
                    "Event log directory (env DESIGNSEARCH_STORE)");
  serve->add_option("--lease-minutes", serve_args.lease_minutes,
                    "Assignment lease duration");
  auto& task_defaults = serve_args.task_defaults;
  serve->add_option("--population", task_defaults.ga.population_size,
                    "Default population size");
  serve->add_option("--iterations", task_defaults.ga.iterations,
                    "Default GA generations");
  serve->add_option("--mutation", task_defaults.ga.mutation_rate,
                    "Default mutation rate");
  serve->add_option("--workers", task_defaults.budget.worker_count,
                    "Default worker count");
  serve->add_option("--quota", task_defaults.budget.per_worker_quota,
                    "Default comparisons per worker");
  serve->add_option("--pay", task_defaults.budget.unit_pay,
                    "Default pay per worker");
  serve->add_option("--currency", task_defaults.budget.currency,
                    "Cost estimate currency");

  ExportArgs export_args;
  export_args.store = DefaultStore();
  auto* exporter =
      app.add_subcommand("export", "Write a task's top designs to disk");
  exporter->add_option("--store", export_args.store, "Event log directory");
  exporter->add_option("--task", export_args.task, "Task id")->required();
  exporter->add_option("--k", export_args.k, "Designs to export");
  exporter->add_option("--out", export_args.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*parse) return RunParse(parse_args);
    if (*preview) return RunPreview(preview_args);
    if (*simulate) return RunSimulate(sim_args);
    if (*serve) return RunServe(serve_args);
    if (*exporter) return RunExport(export_args);
  } catch (const ds::Error& e) {
    std::cerr << "error: " << ds::ErrorCodeName(e.code()) << ": " << e.what()
              << "\n";
    switch (e.code()) {
      case ds::ErrorCode::kStorage:
      case ds::ErrorCode::kEmptyWinnerPool:
        return kExitRuntime;
      default:
        return kExitValidation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
