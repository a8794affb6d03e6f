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

// Genetic search driven by two-alternative forced-choice feedback.
//
// Each individual carries a feedback mask next to its gene sequence. When a
// rater prefers one design of a pair, the genes where the two designs visibly
// differ (the diff mask) are OR-ed into the winner's mask: those are the genes
// the choice actually says something about. Crossover swaps genes and mask
// bits together at a single point and then re-draws every gene whose mask bit
// is still 0, so unendorsed genes keep exploring while endorsed ones are
// inherited. Mutation re-draws a gene and clears its bit.

#ifndef DESIGNSEARCH_GA_H_
#define DESIGNSEARCH_GA_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "designsearch/genome.h"
#include "designsearch/random.h"

namespace designsearch {

struct GaConfig {
  int population_size = 50;
  int iterations = 10;
  double mutation_rate = 0.03;
  uint64_t rng_seed = 0;

  // Throws kInvalidConfig.
  void Validate() const;
};

enum class Side { kA, kB };

struct ComparisonResult {
  uint64_t individual_a = 0;
  uint64_t individual_b = 0;
  Side winner = Side::kA;
  std::string rater_id;

  uint64_t winner_id() const {
    return winner == Side::kA ? individual_a : individual_b;
  }
  uint64_t loser_id() const {
    return winner == Side::kA ? individual_b : individual_a;
  }
};

using IdPair = std::pair<uint64_t, uint64_t>;

class IdSource {
 public:
  explicit IdSource(uint64_t first = 1) : next_(first) {}
  uint64_t Next() { return next_++; }
  uint64_t peek() const { return next_; }

 private:
  uint64_t next_;
};

// Coverage-driven first generation. Each (gene, option) pair, taken in gene
// order, becomes one individual with that gene fixed and every other gene
// uniform; once the pairs run out the rest are fully uniform. `seeds` are
// placed first verbatim (used when relaunching from earlier results). All
// masks start at zero.
std::vector<Individual> Initialize(const GeneSchema& schema,
                                   const GaConfig& config, Rng& rng,
                                   IdSource& ids,
                                   std::span<const Sequence> seeds = {});

// Uniformly random perfect matching. Throws kOddPopulation.
std::vector<IdPair> PairPopulation(std::span<const Individual> population,
                                   Rng& rng);

// Bit i is set iff the two rendered designs differ at gene i: both active
// with different values, or active in exactly one of them.
Mask DiffMask(const GeneSchema& schema, const Individual& a,
              const Individual& b);

// Winner's mask OR `diff`; also credits the win to its lineage count.
Individual ApplyFeedback(Individual winner, const Mask& diff);

// Single-point crossover with the cut before gene `point` (1 <= point < N),
// followed by a uniform re-draw of every gene whose post-swap mask bit is 0.
std::pair<Individual, Individual> CrossoverAt(const Individual& a,
                                              const Individual& b,
                                              const GeneSchema& schema,
                                              int point, Rng& rng);

// Draws the point uniformly from 1..N-1. With a single gene there is no swap
// and only the mask-guided re-draw happens.
std::pair<Individual, Individual> Crossover(const Individual& a,
                                            const Individual& b,
                                            const GeneSchema& schema, Rng& rng);

// Each gene that is active (given the genes before it) mutates with
// probability `mutation_rate` to a different option, clearing its mask bit.
Individual Mutate(Individual individual, const GeneSchema& schema,
                  const GaConfig& config, Rng& rng);

// Breeds `population_size` children from the winner pool: repeated draws of
// two distinct parents (the same one twice only when the pool has one),
// crossover, then mutation of both children.
std::vector<Individual> NextGeneration(std::span<const Individual> winners,
                                       const GeneSchema& schema,
                                       const GaConfig& config, Rng& rng,
                                       IdSource& ids);

// Final-round winners first, then by lineage wins, then by id. `k` is clamped
// to the population size.
std::vector<Individual> TopDesigns(std::span<const Individual> population,
                                   std::span<const ComparisonResult> results,
                                   int k);

struct GenerationRecord {
  int generation = 0;
  // Population as bred, before this round's feedback.
  std::vector<Individual> population;
  std::vector<IdPair> pairs;
  std::vector<ComparisonResult> results;
};

nlohmann::json ToJson(const GenerationRecord& record);

// The full loop with one logical owner. Rounds are fed in one at a time; the
// engine is a pure function of (schema, config, seeds, results).
class Evolution {
 public:
  Evolution(GeneSchema schema, GaConfig config,
            std::span<const Sequence> seeds = {});

  const GeneSchema& schema() const { return schema_; }
  const GaConfig& config() const { return config_; }

  // Index of the round being evaluated; equals config().iterations once done.
  int generation() const { return generation_; }
  bool finished() const { return generation_ >= config_.iterations; }

  // The population being evaluated (or, once finished, the last evaluated
  // one with its feedback applied).
  const std::vector<Individual>& population() const { return population_; }
  const std::vector<IdPair>& pairs() const { return pairs_; }

  // Takes one result per pair in any order. Throws kInvalidArgument if the
  // results do not cover the current pairs exactly.
  void CompleteRound(std::span<const ComparisonResult> results);

  // Best designs of the last completed round. Empty before any round.
  std::vector<Individual> Top(int k) const;

  const std::vector<GenerationRecord>& history() const { return history_; }

  // Looks an individual up across every generation seen so far.
  const Individual* Find(uint64_t id) const;

 private:
  GeneSchema schema_;
  GaConfig config_;
  Rng rng_;
  IdSource ids_;
  int generation_ = 0;
  std::vector<Individual> population_;
  std::vector<IdPair> pairs_;
  std::vector<GenerationRecord> history_;
  std::vector<Individual> last_evaluated_;
  std::vector<ComparisonResult> last_results_;
};

}  // namespace designsearch

#endif  // DESIGNSEARCH_GA_H_
