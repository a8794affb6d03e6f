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

#include "designsearch/ga.h"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "designsearch/error.h"

namespace designsearch {
namespace {

int DrawOption(const GeneSchema& schema, int gene, Rng& rng) {
  return static_cast<int>(
      rng.Below(static_cast<uint64_t>(schema.option_counts[gene])));
}

Sequence RandomSequence(const GeneSchema& schema, Rng& rng) {
  Sequence sequence(schema.gene_count());
  for (int g = 0; g < schema.gene_count(); ++g) {
    sequence[g] = DrawOption(schema, g, rng);
  }
  return sequence;
}

void RedrawUnmasked(Individual& child, const GeneSchema& schema, Rng& rng) {
  for (int g = 0; g < schema.gene_count(); ++g) {
    if (child.mask[g] == 0) child.sequence[g] = DrawOption(schema, g, rng);
  }
}

}  // namespace

void GaConfig::Validate() const {
  if (population_size < 2 || population_size % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "population_size must be an even number >= 2, got " +
                    std::to_string(population_size));
  }
  if (iterations < 1) {
    throw Error(ErrorCode::kInvalidConfig, "iterations must be >= 1");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "mutation_rate must lie in [0, 1]");
  }
}

std::vector<Individual> Initialize(const GeneSchema& schema,
                                   const GaConfig& config, Rng& rng,
                                   IdSource& ids,
                                   std::span<const Sequence> seeds) {
  config.Validate();
  std::vector<Individual> population;
  population.reserve(config.population_size);
  auto emit = [&](Sequence sequence) {
    Individual ind;
    ind.id = ids.Next();
    ind.sequence = std::move(sequence);
    ind.mask.assign(schema.gene_count(), 0);
    ind.generation = 0;
    population.push_back(std::move(ind));
  };

  for (const Sequence& seed : seeds) {
    if (static_cast<int>(population.size()) == config.population_size) break;
    CheckSequence(schema, seed);
    emit(seed);
  }
  for (int gene = 0; gene < schema.gene_count(); ++gene) {
    for (int option = 0; option < schema.option_counts[gene]; ++option) {
      if (static_cast<int>(population.size()) == config.population_size) {
        return population;
      }
      Sequence sequence = RandomSequence(schema, rng);
      sequence[gene] = option;
      emit(std::move(sequence));
    }
  }
  while (static_cast<int>(population.size()) < config.population_size) {
    emit(RandomSequence(schema, rng));
  }
  return population;
}

std::vector<IdPair> PairPopulation(std::span<const Individual> population,
                                   Rng& rng) {
  if (population.size() % 2 != 0) {
    throw Error(ErrorCode::kOddPopulation,
                "cannot pair a population of " +
                    std::to_string(population.size()));
  }
  std::vector<uint64_t> order;
  order.reserve(population.size());
  for (const Individual& ind : population) order.push_back(ind.id);
  rng.Shuffle(std::span<uint64_t>(order));
  std::vector<IdPair> pairs;
  pairs.reserve(order.size() / 2);
  for (size_t i = 0; i + 1 < order.size(); i += 2) {
    pairs.emplace_back(order[i], order[i + 1]);
  }
  return pairs;
}

Mask DiffMask(const GeneSchema& schema, const Individual& a,
              const Individual& b) {
  const std::vector<bool> active_a = ActiveGenes(schema, a.sequence);
  const std::vector<bool> active_b = ActiveGenes(schema, b.sequence);
  Mask diff(schema.gene_count(), 0);
  for (int g = 0; g < schema.gene_count(); ++g) {
    if (active_a[g] && active_b[g]) {
      diff[g] = a.sequence[g] != b.sequence[g] ? 1 : 0;
    } else {
      diff[g] = active_a[g] != active_b[g] ? 1 : 0;
    }
  }
  return diff;
}

Individual ApplyFeedback(Individual winner, const Mask& diff) {
  if (winner.mask.size() != diff.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feedback mask and diff mask lengths differ");
  }
  for (size_t i = 0; i < diff.size(); ++i) {
    winner.mask[i] = static_cast<uint8_t>(winner.mask[i] | diff[i]);
  }
  ++winner.lineage_wins;
  return winner;
}

std::pair<Individual, Individual> CrossoverAt(const Individual& a,
                                              const Individual& b,
                                              const GeneSchema& schema,
                                              int point, Rng& rng) {
  const int n = schema.gene_count();
  if (n > 1 && (point < 1 || point >= n)) {
    throw Error(ErrorCode::kInvalidArgument,
                "crossover point " + std::to_string(point) +
                    " outside 1.." + std::to_string(n - 1));
  }
  Individual child_a = a;
  Individual child_b = b;
  if (n > 1) {
    for (int g = point; g < n; ++g) {
      std::swap(child_a.sequence[g], child_b.sequence[g]);
      std::swap(child_a.mask[g], child_b.mask[g]);
    }
  }
  RedrawUnmasked(child_a, schema, rng);
  RedrawUnmasked(child_b, schema, rng);
  const int lineage = a.lineage_wins + b.lineage_wins;
  const int generation = std::max(a.generation, b.generation) + 1;
  for (Individual* child : {&child_a, &child_b}) {
    child->id = 0;
    child->lineage_wins = lineage;
    child->generation = generation;
  }
  return {std::move(child_a), std::move(child_b)};
}

std::pair<Individual, Individual> Crossover(const Individual& a,
                                            const Individual& b,
                                            const GeneSchema& schema,
                                            Rng& rng) {
  const int n = schema.gene_count();
  const int point = n > 1 ? rng.UniformInt(1, n - 1) : 0;
  return CrossoverAt(a, b, schema, point, rng);
}

Individual Mutate(Individual individual, const GeneSchema& schema,
                  const GaConfig& config, Rng& rng) {
  std::vector<bool> active(schema.gene_count(), true);
  for (int g = 0; g < schema.gene_count(); ++g) {
    if (const auto& link = schema.activation[g]) {
      active[g] = active[link->parent_gene] &&
                  individual.sequence[link->parent_gene] == link->option;
    }
    if (!active[g] || !rng.Bernoulli(config.mutation_rate)) continue;
    const int count = schema.option_counts[g];
    int other = static_cast<int>(rng.Below(static_cast<uint64_t>(count - 1)));
    if (other >= individual.sequence[g]) ++other;
    individual.sequence[g] = other;
    individual.mask[g] = 0;
  }
  return individual;
}

std::vector<Individual> NextGeneration(std::span<const Individual> winners,
                                       const GeneSchema& schema,
                                       const GaConfig& config, Rng& rng,
                                       IdSource& ids) {
  if (winners.empty()) {
    throw Error(ErrorCode::kEmptyWinnerPool, "no winners to breed from");
  }
  std::vector<Individual> children;
  children.reserve(config.population_size);
  const uint64_t pool = winners.size();
  while (static_cast<int>(children.size()) < config.population_size) {
    const uint64_t first = rng.Below(pool);
    uint64_t second = first;
    if (pool > 1) {
      second = rng.Below(pool - 1);
      if (second >= first) ++second;
    }
    auto [child_a, child_b] =
        Crossover(winners[first], winners[second], schema, rng);
    for (Individual* child : {&child_a, &child_b}) {
      if (static_cast<int>(children.size()) == config.population_size) break;
      Individual mutated = Mutate(std::move(*child), schema, config, rng);
      mutated.id = ids.Next();
      children.push_back(std::move(mutated));
    }
  }
  return children;
}

std::vector<Individual> TopDesigns(std::span<const Individual> population,
                                   std::span<const ComparisonResult> results,
                                   int k) {
  std::map<uint64_t, int> votes;
  for (const ComparisonResult& result : results) ++votes[result.winner_id()];
  std::vector<Individual> ranked(population.begin(), population.end());
  auto vote_count = [&votes](const Individual& ind) {
    auto it = votes.find(ind.id);
    return it == votes.end() ? 0 : it->second;
  };
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](const Individual& x, const Individual& y) {
                     const int vx = vote_count(x);
                     const int vy = vote_count(y);
                     if (vx != vy) return vx > vy;
                     if (x.lineage_wins != y.lineage_wins) {
                       return x.lineage_wins > y.lineage_wins;
                     }
                     return x.id < y.id;
                   });
  ranked.resize(std::clamp<size_t>(static_cast<size_t>(std::max(k, 0)), 0,
                                   ranked.size()));
  return ranked;
}

nlohmann::json ToJson(const GenerationRecord& record) {
  nlohmann::json individuals = nlohmann::json::array();
  for (const Individual& ind : record.population) {
    individuals.push_back({{"id", ind.id},
                           {"sequence", ind.sequence},
                           {"mask", ind.mask},
                           {"lineage_wins", ind.lineage_wins}});
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (const IdPair& pair : record.pairs) {
    pairs.push_back({pair.first, pair.second});
  }
  nlohmann::json results = nlohmann::json::array();
  for (const ComparisonResult& result : record.results) {
    results.push_back({{"a", result.individual_a},
                       {"b", result.individual_b},
                       {"winner", result.winner_id()},
                       {"rater", result.rater_id}});
  }
  return {{"generation", record.generation},
          {"individuals", std::move(individuals)},
          {"pairs", std::move(pairs)},
          {"results", std::move(results)}};
}

Evolution::Evolution(GeneSchema schema, GaConfig config,
                     std::span<const Sequence> seeds)
    : schema_(std::move(schema)),
      config_(config),
      rng_(config.rng_seed) {
  config_.Validate();
  population_ = Initialize(schema_, config_, rng_, ids_, seeds);
  pairs_ = PairPopulation(population_, rng_);
}

void Evolution::CompleteRound(std::span<const ComparisonResult> results) {
  if (finished()) {
    throw Error(ErrorCode::kInvalidState, "all iterations are complete");
  }
  if (results.size() != pairs_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected " + std::to_string(pairs_.size()) + " results, got " +
                    std::to_string(results.size()));
  }
  std::map<IdPair, const ComparisonResult*> by_pair;
  for (const ComparisonResult& result : results) {
    IdPair key{result.individual_a, result.individual_b};
    if (!by_pair.emplace(key, &result).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate result for a pair");
    }
  }
  std::map<uint64_t, size_t> index;
  for (size_t i = 0; i < population_.size(); ++i) index[population_[i].id] = i;

  GenerationRecord record;
  record.generation = generation_;
  record.population = population_;
  record.pairs = pairs_;
  std::vector<Individual> winners;
  winners.reserve(pairs_.size());
  for (const IdPair& pair : pairs_) {
    auto it = by_pair.find(pair);
    if (it == by_pair.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "missing result for pair (" + std::to_string(pair.first) +
                      ", " + std::to_string(pair.second) + ")");
    }
    const ComparisonResult& result = *it->second;
    record.results.push_back(result);
    Individual& winner = population_[index.at(result.winner_id())];
    const Individual& loser = population_[index.at(result.loser_id())];
    winner = ApplyFeedback(winner, DiffMask(schema_, winner, loser));
    winners.push_back(winner);
  }
  last_evaluated_ = population_;
  last_results_ = record.results;
  history_.push_back(std::move(record));
  ++generation_;
  if (finished()) {
    pairs_.clear();
    return;
  }
  population_ = NextGeneration(winners, schema_, config_, rng_, ids_);
  pairs_ = PairPopulation(population_, rng_);
}

std::vector<Individual> Evolution::Top(int k) const {
  return TopDesigns(last_evaluated_, last_results_, k);
}

const Individual* Evolution::Find(uint64_t id) const {
  for (const Individual& ind : population_) {
    if (ind.id == id) return &ind;
  }
  for (auto it = history_.rbegin(); it != history_.rend(); ++it) {
    for (const Individual& ind : it->population) {
      if (ind.id == id) return &ind;
    }
  }
  return nullptr;
}

}  // namespace designsearch
