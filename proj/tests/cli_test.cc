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

// Runs the designsearch binary as a subprocess.

#include <gtest/gtest.h>
#include <httplib.h>

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "test_util.h"

namespace designsearch {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static std::atomic<int> counter{0};
    dir_ = fs::temp_directory_path() /
           ("designsearch-cli-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult Run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string command = "timeout 60 " +
                                std::string(DESIGNSEARCH_BINARY) + " " + args +
                                " >" + out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = testing::ReadFile(out);
    result.err = testing::ReadFile(err);
    return result;
  }

  fs::path Write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }

  fs::path dir_;
};

std::string Corpus(const std::string& name) {
  return (testing::CorpusDir() / name).string();
}

int FreePort() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

// `designsearch serve` in a child process.
class ServeProcess {
 public:
  ServeProcess(std::vector<std::string> args, int port) : port_(port) {
    pid_ = ::fork();
    if (pid_ == 0) {
      std::vector<char*> argv;
      std::string binary = DESIGNSEARCH_BINARY;
      argv.push_back(binary.data());
      for (auto& arg : args) argv.push_back(arg.data());
      argv.push_back(nullptr);
      const int null_fd = ::open("/dev/null", O_WRONLY);
      ::dup2(null_fd, STDERR_FILENO);
      ::execv(binary.c_str(), argv.data());
      ::_exit(127);
    }
  }
  ~ServeProcess() { Kill(SIGKILL); }

  bool WaitHealthy() {
    httplib::Client client("127.0.0.1", port_);
    for (int i = 0; i < 200; ++i) {
      auto res = client.Get("/health");
      if (res && res->status == 200) return true;
      std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
    return false;
  }

  int Kill(int sig) {
    if (pid_ <= 0) return -1;
    ::kill(pid_, sig);
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
    return status;
  }

 private:
  pid_t pid_ = -1;
  int port_;
};

TEST_F(CliTest, ParseCoverPrintsSummary) {
  const RunResult r = Run("parse " + (testing::DataDir() / "cover.html").string());
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "6 attributes, space size 972\n");
}

TEST_F(CliTest, ParseExploreFreeFile) {
  const RunResult r = Run("parse " + Corpus("11_no_exploration.html"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "0 attributes, space size 1\n");
}

TEST_F(CliTest, ParseJsonEmitsSpec) {
  const RunResult r = Run("parse --json " + Corpus("06_nested_nav.html"));
  ASSERT_EQ(r.exit_code, 0);
  const json spec = json::parse(r.out);
  EXPECT_EQ(spec["space_size"], "12");
  EXPECT_TRUE(spec["attributes"].is_array());
}

TEST_F(CliTest, ParseFailuresExitNonzero) {
  const fs::path bad =
      Write("bad.html", "<p explore-height-and-width=\"1px;2px 3px\">x</p>");
  RunResult r = Run("parse " + bad.string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("JointArityMismatch"), std::string::npos);
  const fs::path single = Write("single.html", "<p id=a explore-color=red>x</p>");
  r = Run("parse " + single.string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("TooFewOptions"), std::string::npos);
  r = Run("parse " + (dir_ / "missing.html").string());
  EXPECT_EQ(r.exit_code, 2);
  r = Run("frobnicate");
  EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, PreviewSingleSample) {
  const fs::path out = dir_ / "one";
  const RunResult r = Run("preview " + Corpus("15_cover.html") +
                          " --sample 1 --seed 3 --out " + out.string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(std::distance(fs::directory_iterator(out), fs::directory_iterator()),
            1);
}

TEST_F(CliTest, PreviewWholeSmallSpaceIsAllDistinct) {
  const fs::path out = dir_ / "all";
  const RunResult r = Run("preview " + Corpus("06_nested_nav.html") +
                          " --sample 12 --out " + out.string());
  ASSERT_EQ(r.exit_code, 0);
  std::set<std::string> pages;
  for (const auto& entry : fs::directory_iterator(out)) {
    const std::string html = testing::ReadFile(entry.path());
    EXPECT_EQ(html.find("explore-"), std::string::npos);
    pages.insert(html);
  }
  EXPECT_EQ(pages.size(), 12u);
}

TEST_F(CliTest, PreviewIsSeeded) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(Run("preview " + Corpus("15_cover.html") +
                " --sample 4 --seed 9 --out " + a.string())
                .exit_code,
            0);
  ASSERT_EQ(Run("preview " + Corpus("15_cover.html") +
                " --sample 4 --seed 9 --out " + b.string())
                .exit_code,
            0);
  for (int i = 0; i < 4; ++i) {
    const std::string name = "design-" + std::to_string(i) + ".html";
    EXPECT_EQ(testing::ReadFile(a / name), testing::ReadFile(b / name));
  }
}

TEST_F(CliTest, SimulatePrintsTableRow) {
  const RunResult r =
      Run("simulate " + Corpus("15_cover.html") + " --seeds 2");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("Percentage of votes (%)"), std::string::npos);
  EXPECT_NE(r.out.find("Z-score"), std::string::npos);
  EXPECT_NE(r.out.find("p (two-tailed)"), std::string::npos);
}

TEST_F(CliTest, SimulateCoinFlipIsNearHalf) {
  const RunResult r = Run("simulate " + Corpus("15_cover.html") +
                          " --seeds 10 --beta 0 --json");
  ASSERT_EQ(r.exit_code, 0);
  const double share = json::parse(r.out)[0]["vote_share"];
  EXPECT_GE(share, 0.40);
  EXPECT_LE(share, 0.60);
}

TEST_F(CliTest, SweepHasOneRowPerSize) {
  const RunResult r = Run("simulate --sweep 50,200,500 --seeds 1 --csv");
  ASSERT_EQ(r.exit_code, 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].substr(0, 12), "size 50,50,0");
  EXPECT_EQ(rows[3].substr(0, 14), "size 500,500,0");
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const std::string args =
      "simulate " + Corpus("15_cover.html") + " --seeds 2 --seed 5 --csv";
  EXPECT_EQ(Run(args).out, Run(args).out);
}

TEST_F(CliTest, ConfigFileSuppliesDefaults) {
  const fs::path config = Write("cfg.ini", "[simulate]\nseeds = 3\nbeta = 0\n");
  const RunResult r = Run("--config " + config.string() + " simulate " +
                          Corpus("15_cover.html") + " --json");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json report = json::parse(r.out)[0];
  EXPECT_EQ(report["seeds"].size(), 3u);
  EXPECT_EQ(report["noise_beta"], 0.0);
  // Flags override the file.
  const RunResult flagged = Run("--config " + config.string() + " simulate " +
                                Corpus("15_cover.html") + " --seeds 1 --json");
  EXPECT_EQ(json::parse(flagged.out)[0]["seeds"].size(), 1u);
}

TEST_F(CliTest, PortConflictIsACleanRuntimeError) {
  const int blocker = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(blocker, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)),
            0);
  ASSERT_EQ(::listen(blocker, 1), 0);
  socklen_t len = sizeof(addr);
  ::getsockname(blocker, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);
  const RunResult r =
      Run("serve --host 127.0.0.1 --port " + std::to_string(port) +
          " --store " + (dir_ / "store").string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("cannot listen"), std::string::npos);
  ::close(blocker);
}

TEST_F(CliTest, ServeKillAndRestartResumesState) {
  const int port = FreePort();
  const fs::path store = dir_ / "store";
  const fs::path config = Write("serve.ini", "[serve]\nquota = 3\n");
  const std::vector<std::string> args = {
      "--config", config.string(), "serve", "--host", "127.0.0.1",
      "--port", std::to_string(port), "--store", store.string()};
  httplib::Client client("127.0.0.1", port);

  auto server = std::make_unique<ServeProcess>(args, port);
  ASSERT_TRUE(server->WaitHealthy());
  auto created = client.Post("/tasks",
                             json({{"spec_html", testing::CoverSpec()},
                                   {"population_size", 10},
                                   {"iterations", 2},
                                   {"launch", true}})
                                 .dump(),
                             "application/json");
  ASSERT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["task_id"];
  const json info = json::parse(client.Get("/tasks/" + id)->body);
  EXPECT_EQ(info["budget"]["per_worker_quota"], 3);

  auto rate = [&](const std::string& rater) {
    auto res = client.Post("/tasks/" + id + "/assignments?rater=" + rater, "",
                           "application/json");
    if (res->status != 200) return res->status;
    const std::string aid =
        json::parse(res->body)["assignment"]["assignment_id"];
    return client
        .Post("/assignments/" + aid + "/choice",
              json({{"rater", rater}, {"side", "left"}}).dump(),
              "application/json")
        ->status;
  };
  for (int i = 0; i < 3; ++i) ASSERT_EQ(rate("k" + std::to_string(i)), 200);
  // A lease left open across the crash.
  ASSERT_EQ(client.Post("/tasks/" + id + "/assignments?rater=held", "",
                        "application/json")
                ->status,
            200);
  const std::string before = client.Get("/tasks/" + id + "/progress")->body;
  const std::string log_before = testing::ReadFile(store / "events.jsonl");

  server->Kill(SIGKILL);
  server = std::make_unique<ServeProcess>(args, port);
  ASSERT_TRUE(server->WaitHealthy());
  EXPECT_EQ(client.Get("/tasks/" + id + "/progress")->body, before);
  EXPECT_EQ(testing::ReadFile(store / "events.jsonl"), log_before);

  auto state = [&] {
    return json::parse(client.Get("/tasks/" + id + "/progress")->body)["state"]
        .get<std::string>();
  };
  for (int i = 3; i < 40 && state() != "completed"; ++i) {
    // 204 means only the pre-crash lease is left; its holder finishes it.
    if (rate("k" + std::to_string(i)) == 204) ASSERT_EQ(rate("held"), 200);
  }
  EXPECT_EQ(state(), "completed");
  EXPECT_EQ(server->Kill(SIGTERM), 0);

  const fs::path out = dir_ / "export";
  const RunResult exported = Run("export --store " + store.string() +
                                 " --task " + id + " --k 5 --out " +
                                 out.string());
  ASSERT_EQ(exported.exit_code, 0) << exported.err;
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  EXPECT_TRUE(fs::exists(out / "design-1-5.html"));
}

TEST_F(CliTest, StoreComesFromEnvironment) {
  const fs::path store = dir_ / "env-store";
  ::setenv("DESIGNSEARCH_STORE", store.c_str(), 1);
  const RunResult r = Run("export --task t1");
  ::unsetenv("DESIGNSEARCH_STORE");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("UnknownTask"), std::string::npos);
  EXPECT_TRUE(fs::exists(store));
}

}  // namespace
}  // namespace designsearch
