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

#include "designsearch/sim.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "designsearch/error.h"
#include "designsearch/markup.h"

namespace designsearch::sim {
namespace {

// Sub-stream tags for DeriveSeed.
enum Stream : uint64_t {
  kModelStream = 1,
  kGaRaterStream,
  kUniformRaterStream,
  kEvalRaterStream,
  kGaStream,
  kUniformSampleStream,
  kEvalSampleStream,
};

double MeanUtility(const UtilityModel& model,
                   std::span<const Individual> designs) {
  if (designs.empty()) return 0.0;
  double total = 0.0;
  for (const Individual& ind : designs) total += model.Utility(ind.sequence);
  return total / static_cast<double>(designs.size());
}

}  // namespace

UtilityModel::UtilityModel(const GeneSchema& schema, uint64_t seed,
                           double interaction_scale)
    : schema_(schema), interaction_scale_(interaction_scale) {
  Rng rng(seed);
  scores_.resize(schema.gene_count());
  for (int g = 0; g < schema.gene_count(); ++g) {
    option_offset_.push_back(total_options_);
    total_options_ += schema.option_counts[g];
    for (int o = 0; o < schema.option_counts[g]; ++o) {
      scores_[g].push_back(rng.Normal());
    }
  }
  if (interaction_scale_ > 0.0) {
    const size_t t = static_cast<size_t>(total_options_);
    interactions_.assign(t * t, 0.0);
    for (size_t i = 0; i < t; ++i) {
      for (size_t j = i + 1; j < t; ++j) {
        const double w = interaction_scale_ * rng.Normal();
        interactions_[i * t + j] = w;
        interactions_[j * t + i] = w;
      }
    }
  }
}

double UtilityModel::Interaction(int gene_a, int option_a, int gene_b,
                                 int option_b) const {
  const size_t t = static_cast<size_t>(total_options_);
  const size_t i = static_cast<size_t>(option_offset_[gene_a] + option_a);
  const size_t j = static_cast<size_t>(option_offset_[gene_b] + option_b);
  return interactions_[i * t + j];
}

double UtilityModel::Utility(std::span<const int> sequence) const {
  const std::vector<bool> active = ActiveGenes(schema_, sequence);
  double total = 0.0;
  for (int g = 0; g < schema_.gene_count(); ++g) {
    if (active[g]) total += scores_[g][sequence[g]];
  }
  if (interaction_scale_ > 0.0) {
    for (int a = 0; a < schema_.gene_count(); ++a) {
      if (!active[a]) continue;
      for (int b = a + 1; b < schema_.gene_count(); ++b) {
        if (active[b]) total += Interaction(a, sequence[a], b, sequence[b]);
      }
    }
  }
  return total;
}

SyntheticRater::SyntheticRater(std::shared_ptr<const UtilityModel> model,
                               double noise_beta, uint64_t seed,
                               std::string rater_id)
    : model_(std::move(model)),
      beta_(noise_beta),
      rng_(seed),
      id_(std::move(rater_id)) {
  if (!(noise_beta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_beta must be >= 0");
  }
}

double SyntheticRater::PreferenceProbability(std::span<const int> a,
                                             std::span<const int> b) const {
  const double diff = model_->Utility(a) - model_->Utility(b);
  if (beta_ == 0.0 || diff == 0.0) return 0.5;
  if (std::isinf(beta_)) return diff > 0.0 ? 1.0 : 0.0;
  return 1.0 / (1.0 + std::exp(-beta_ * diff));
}

Side SyntheticRater::Choose(std::span<const int> a, std::span<const int> b) {
  ++calls_;
  return rng_.UniformDouble() < PreferenceProbability(a, b) ? Side::kA
                                                            : Side::kB;
}

SearchOutcome RunUniformBaseline(const GeneSchema& schema, int n_samples,
                                 int k, SyntheticRater& rater, uint64_t seed) {
  if (n_samples < 2 || n_samples % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "uniform baseline needs an even sample count >= 2");
  }
  Rng rng(seed);
  std::vector<Individual> samples;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    Individual ind;
    ind.id = static_cast<uint64_t>(i + 1);
    ind.sequence.resize(schema.gene_count());
    for (int g = 0; g < schema.gene_count(); ++g) {
      ind.sequence[g] = static_cast<int>(
          rng.Below(static_cast<uint64_t>(schema.option_counts[g])));
    }
    ind.mask.assign(schema.gene_count(), 0);
    samples.push_back(std::move(ind));
  }
  std::vector<ComparisonResult> results;
  SearchOutcome outcome;
  for (const IdPair& pair : PairPopulation(samples, rng)) {
    const Individual& a = samples[pair.first - 1];
    const Individual& b = samples[pair.second - 1];
    ComparisonResult result{pair.first, pair.second,
                            rater.Choose(a.sequence, b.sequence), rater.id()};
    results.push_back(result);
    ++outcome.comparisons;
  }
  outcome.top = TopDesigns(samples, results, k);
  return outcome;
}

SearchOutcome RunGaCondition(const GeneSchema& schema, const GaConfig& config,
                             int k, SyntheticRater& rater) {
  Evolution evolution(schema, config);
  SearchOutcome outcome;
  while (!evolution.finished()) {
    std::vector<ComparisonResult> results;
    for (const IdPair& pair : evolution.pairs()) {
      const Individual* a = evolution.Find(pair.first);
      const Individual* b = evolution.Find(pair.second);
      results.push_back(ComparisonResult{
          pair.first, pair.second, rater.Choose(a->sequence, b->sequence),
          rater.id()});
      ++outcome.comparisons;
    }
    evolution.CompleteRound(results);
  }
  outcome.top = evolution.Top(k);
  return outcome;
}

ZTest ProportionZTest(int successes, int trials) {
  if (trials <= 0) return ZTest{};
  const double n = static_cast<double>(trials);
  const double share = static_cast<double>(successes) / n;
  const double z = (share - 0.5) / std::sqrt(0.25 / n);
  return ZTest{z, std::erfc(std::fabs(z) / std::sqrt(2.0))};
}

CrossMethodVotes CrossMethodEval(std::span<const Individual> top_ga,
                                 std::span<const Individual> top_uniform,
                                 int n_votes, SyntheticRater& eval_rater,
                                 uint64_t seed) {
  if (top_ga.empty() || top_uniform.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cross-method evaluation needs two non-empty design lists");
  }
  Rng rng(seed);
  CrossMethodVotes votes;
  for (int i = 0; i < n_votes; ++i) {
    const Individual& ga = top_ga[rng.Below(top_ga.size())];
    const Individual& uniform = top_uniform[rng.Below(top_uniform.size())];
    const bool ga_on_left = rng.Bernoulli(0.5);
    const Individual& left = ga_on_left ? ga : uniform;
    const Individual& right = ga_on_left ? uniform : ga;
    const Side choice = eval_rater.Choose(left.sequence, right.sequence);
    const bool ga_won = (choice == Side::kA) == ga_on_left;
    if (ga_won) ++votes.ga_votes;
    ++votes.n_votes;
  }
  return votes;
}

ExperimentReport RunExperiment(const GeneSchema& schema,
                               const ExperimentOptions& options,
                               std::string label) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.label = std::move(label);
  report.space_size = CountSpace(schema);
  report.noise_beta = options.noise_beta;
  double share_sum = 0.0;
  double share_sq_sum = 0.0;
  for (uint64_t seed : options.seeds) {
    auto model = std::make_shared<const UtilityModel>(
        schema, DeriveSeed(seed, kModelStream), options.interaction_scale);
    SyntheticRater ga_rater(model, options.noise_beta,
                            DeriveSeed(seed, kGaRaterStream), "search-ga");
    SyntheticRater uniform_rater(model, options.noise_beta,
                                 DeriveSeed(seed, kUniformRaterStream),
                                 "search-uniform");
    SyntheticRater eval_rater(model, options.noise_beta,
                              DeriveSeed(seed, kEvalRaterStream), "eval");
    GaConfig ga = options.ga;
    ga.rng_seed = DeriveSeed(seed, kGaStream);

    const SearchOutcome ga_outcome =
        RunGaCondition(schema, ga, options.top_k, ga_rater);
    const SearchOutcome uniform_outcome = RunUniformBaseline(
        schema, options.uniform_samples, options.top_k, uniform_rater,
        DeriveSeed(seed, kUniformSampleStream));
    const CrossMethodVotes votes =
        CrossMethodEval(ga_outcome.top, uniform_outcome.top, options.n_votes,
                        eval_rater, DeriveSeed(seed, kEvalSampleStream));

    SeedOutcome row;
    row.seed = seed;
    row.ga_votes = votes.ga_votes;
    row.n_votes = votes.n_votes;
    row.vote_share = votes.n_votes > 0 ? static_cast<double>(votes.ga_votes) /
                                             votes.n_votes
                                       : 0.0;
    row.test = ProportionZTest(votes.ga_votes, votes.n_votes);
    row.ga_top_utility = MeanUtility(*model, ga_outcome.top);
    row.uniform_top_utility = MeanUtility(*model, uniform_outcome.top);
    row.ga_comparisons = ga_outcome.comparisons;
    row.uniform_comparisons = uniform_outcome.comparisons;

    report.ga_votes += row.ga_votes;
    report.n_votes += row.n_votes;
    report.mean_ga_top_utility += row.ga_top_utility;
    report.mean_uniform_top_utility += row.uniform_top_utility;
    share_sum += row.vote_share;
    share_sq_sum += row.vote_share * row.vote_share;
    report.seeds.push_back(row);
  }
  const double n = static_cast<double>(report.seeds.size());
  if (n > 0) {
    report.vote_share = report.n_votes > 0
                            ? static_cast<double>(report.ga_votes) /
                                  report.n_votes
                            : 0.0;
    report.test = ProportionZTest(report.ga_votes, report.n_votes);
    report.mean_ga_top_utility /= n;
    report.mean_uniform_top_utility /= n;
    report.mean_seed_share = share_sum / n;
    const double variance =
        n > 1 ? std::max(0.0, (share_sq_sum - n * report.mean_seed_share *
                                                  report.mean_seed_share) /
                                  (n - 1))
              : 0.0;
    const double half_width = 1.96 * std::sqrt(variance / n);
    report.share_ci_low = report.mean_seed_share - half_width;
    report.share_ci_high = report.mean_seed_share + half_width;
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::vector<ExperimentReport> RunSpaceSizeSweep(
    std::span<const uint64_t> sizes, const ExperimentOptions& options) {
  std::vector<ExperimentReport> reports;
  for (uint64_t size : sizes) {
    const DesignSpec spec = Parse(CoverFamilySpec(size));
    const GeneSchema schema = BuildSchema(spec);
    reports.push_back(
        RunExperiment(schema, options, "size " + std::to_string(size)));
  }
  return reports;
}

nlohmann::json ToJson(const ExperimentReport& report) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const SeedOutcome& row : report.seeds) {
    seeds.push_back({{"seed", row.seed},
                     {"ga_votes", row.ga_votes},
                     {"n_votes", row.n_votes},
                     {"vote_share", row.vote_share},
                     {"z", row.test.z},
                     {"p", row.test.p_two_tailed},
                     {"ga_top_utility", row.ga_top_utility},
                     {"uniform_top_utility", row.uniform_top_utility},
                     {"ga_comparisons", row.ga_comparisons},
                     {"uniform_comparisons", row.uniform_comparisons}});
  }
  return {{"label", report.label},
          {"space_size", report.space_size.value},
          {"space_size_saturated", report.space_size.saturated},
          {"noise_beta", report.noise_beta},
          {"ga_votes", report.ga_votes},
          {"n_votes", report.n_votes},
          {"vote_share", report.vote_share},
          {"z", report.test.z},
          {"p", report.test.p_two_tailed},
          {"mean_seed_share", report.mean_seed_share},
          {"share_ci", {report.share_ci_low, report.share_ci_high}},
          {"mean_ga_top_utility", report.mean_ga_top_utility},
          {"mean_uniform_top_utility", report.mean_uniform_top_utility},
          {"runtime_seconds", report.runtime_seconds},
          {"seeds", std::move(seeds)}};
}

namespace {

std::string FormatP(double p) {
  char buf[32];
  if (p < 0.001) return "<.001";
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  std::string s(buf);
  if (s.starts_with("0")) s.erase(0, 1);
  return s;
}

}  // namespace

std::string FormatTable(std::span<const ExperimentReport> reports) {
  std::vector<std::vector<std::string>> rows(4);
  rows[0].push_back("Condition");
  rows[1].push_back("Percentage of votes (%)");
  rows[2].push_back("Z-score");
  rows[3].push_back("p (two-tailed)");
  char buf[64];
  for (const ExperimentReport& report : reports) {
    rows[0].push_back(report.label.empty() ? report.space_size.ToString()
                                           : report.label);
    std::snprintf(buf, sizeof(buf), "%.0f", 100.0 * report.vote_share);
    rows[1].push_back(buf);
    std::snprintf(buf, sizeof(buf), "%.2f", report.test.z);
    rows[2].push_back(buf);
    rows[3].push_back(FormatP(report.test.p_two_tailed));
  }
  std::vector<size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(widths[c] - row[c].size(), ' ') << " |";
      } else {
        out << ' ' << std::string(widths[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string FormatCsv(std::span<const ExperimentReport> reports) {
  std::ostringstream out;
  out << "label,space_size,vote_share,ci_low,ci_high,z,p\n";
  for (const ExperimentReport& report : reports) {
    out << report.label << ',' << report.space_size.value << ','
        << report.vote_share << ',' << report.share_ci_low << ','
        << report.share_ci_high << ',' << report.test.z << ','
        << report.test.p_two_tailed << '\n';
  }
  return out.str();
}

}  // namespace designsearch::sim
