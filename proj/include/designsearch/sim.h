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

// Desk-scale reproduction of the GA-versus-uniform-sampling experiments with
// synthetic raters standing in for the crowd.
//
// Ground truth is an additive utility over active genes (optionally with
// pairwise cross-terms); a rater prefers design a over b with probability
// logistic(beta * (u(a) - u(b))). Both search methods get the same comparison
// budget. Their top designs are then compared head to head by an evaluation
// rater that shares the ground truth but draws its own noise.

#ifndef DESIGNSEARCH_SIM_H_
#define DESIGNSEARCH_SIM_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "designsearch/ga.h"
#include "designsearch/genome.h"
#include "designsearch/random.h"

namespace designsearch::sim {

class UtilityModel {
 public:
  // Scores are drawn from a standard normal per (gene, option). A positive
  // `interaction_scale` adds N(0, scale^2) cross-terms per pair of options of
  // distinct genes.
  UtilityModel(const GeneSchema& schema, uint64_t seed,
               double interaction_scale = 0.0);

  // Sum over active genes only.
  double Utility(std::span<const int> sequence) const;
  double Score(int gene, int option) const { return scores_[gene][option]; }

 private:
  double Interaction(int gene_a, int option_a, int gene_b, int option_b) const;

  GeneSchema schema_;
  std::vector<std::vector<double>> scores_;
  double interaction_scale_;
  std::vector<int> option_offset_;
  std::vector<double> interactions_;  // dense upper triangle over all options
  int total_options_ = 0;
};

class SyntheticRater {
 public:
  // `noise_beta` may be +infinity (always picks the better design; ties are
  // a coin flip) or 0 (always a coin flip).
  SyntheticRater(std::shared_ptr<const UtilityModel> model, double noise_beta,
                 uint64_t seed, std::string rater_id = "synthetic");

  double PreferenceProbability(std::span<const int> a,
                               std::span<const int> b) const;
  Side Choose(std::span<const int> a, std::span<const int> b);

  const std::string& id() const { return id_; }
  int64_t calls() const { return calls_; }
  const UtilityModel& model() const { return *model_; }

 private:
  std::shared_ptr<const UtilityModel> model_;
  double beta_;
  Rng rng_;
  std::string id_;
  int64_t calls_ = 0;
};

struct SearchOutcome {
  std::vector<Individual> top;
  int comparisons = 0;
};

// Draws `n_samples` uniform configurations, pairs them disjointly, asks for
// one choice per pair and keeps the winners ranked by votes then id.
SearchOutcome RunUniformBaseline(const GeneSchema& schema, int n_samples,
                                 int k, SyntheticRater& rater, uint64_t seed);

// Runs the full genetic loop with synthetic choices.
SearchOutcome RunGaCondition(const GeneSchema& schema, const GaConfig& config,
                             int k, SyntheticRater& rater);

struct ZTest {
  double z = 0.0;
  double p_two_tailed = 1.0;
};

// One-sample test of a proportion against 0.5.
ZTest ProportionZTest(int successes, int trials);

struct CrossMethodVotes {
  int ga_votes = 0;
  int n_votes = 0;
};

// Head-to-head evaluation: each vote draws one design from each list,
// randomizes sides, and records the evaluation rater's choice.
CrossMethodVotes CrossMethodEval(std::span<const Individual> top_ga,
                                 std::span<const Individual> top_uniform,
                                 int n_votes, SyntheticRater& eval_rater,
                                 uint64_t seed);

struct ExperimentOptions {
  std::vector<uint64_t> seeds;
  double noise_beta = 1.0;
  double interaction_scale = 0.0;
  int n_votes = 100;
  int uniform_samples = 500;
  int top_k = 5;
  GaConfig ga;  // rng_seed is replaced per experiment seed
};

struct SeedOutcome {
  uint64_t seed = 0;
  int ga_votes = 0;
  int n_votes = 0;
  double vote_share = 0.0;
  ZTest test;
  double ga_top_utility = 0.0;
  double uniform_top_utility = 0.0;
  int ga_comparisons = 0;
  int uniform_comparisons = 0;
};

struct ExperimentReport {
  std::string label;
  SpaceSize space_size;
  double noise_beta = 0.0;
  std::vector<SeedOutcome> seeds;
  // Pooled over all seeds.
  int ga_votes = 0;
  int n_votes = 0;
  double vote_share = 0.0;
  ZTest test;
  // Mean of per-seed vote shares with a normal 95% interval.
  double mean_seed_share = 0.0;
  double share_ci_low = 0.0;
  double share_ci_high = 0.0;
  double mean_ga_top_utility = 0.0;
  double mean_uniform_top_utility = 0.0;
  double runtime_seconds = 0.0;
};

ExperimentReport RunExperiment(const GeneSchema& schema,
                               const ExperimentOptions& options,
                               std::string label = {});

// Sizes the generated Cover family can hit exactly.
std::vector<uint64_t> CoverFamilySizes();

// An annotated Cover page whose search space has exactly `size` designs.
// Throws kInvalidArgument for sizes outside CoverFamilySizes().
std::string CoverFamilySpec(uint64_t size);

std::vector<ExperimentReport> RunSpaceSizeSweep(
    std::span<const uint64_t> sizes, const ExperimentOptions& options);

nlohmann::json ToJson(const ExperimentReport& report);

// Plain-text table with one column per report: vote %, z and p rows.
std::string FormatTable(std::span<const ExperimentReport> reports);

// label,space_size,vote_share,ci_low,ci_high,z,p
std::string FormatCsv(std::span<const ExperimentReport> reports);

}  // namespace designsearch::sim

#endif  // DESIGNSEARCH_SIM_H_
