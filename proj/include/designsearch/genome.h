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

#ifndef DESIGNSEARCH_GENOME_H_
#define DESIGNSEARCH_GENOME_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "designsearch/markup.h"

namespace designsearch {

using Sequence = std::vector<int>;
using Mask = std::vector<uint8_t>;

// A gene is active only while its parent gene is active and holds `option`.
struct Activation {
  int parent_gene = 0;
  int option = 0;

  friend bool operator==(const Activation&, const Activation&) = default;
};

struct GeneSchema {
  std::vector<int> option_counts;
  std::vector<std::optional<Activation>> activation;
  std::vector<int> attr_of;

  int gene_count() const { return static_cast<int>(option_counts.size()); }
};

struct Individual {
  uint64_t id = 0;
  Sequence sequence;
  Mask mask;
  int generation = 0;
  // Comparison wins accumulated along this individual's ancestry, plus its
  // own wins. Used only to break ties between final-round winners.
  int lineage_wins = 0;

  friend bool operator==(const Individual&, const Individual&) = default;
};

// One gene per attribute in attr_id order. Activation links copy the parse's
// parent links. Throws kValidationFailed when Validate(spec) is not clean.
GeneSchema BuildSchema(const DesignSpec& spec);

// Throws kInvalidSequence if the sequence length or any value is out of range.
void CheckSequence(const GeneSchema& schema, std::span<const int> sequence);

// active[i] is true iff gene i has no activation link or its parent is active
// and holds the linked option.
std::vector<bool> ActiveGenes(const GeneSchema& schema,
                              std::span<const int> sequence);

// Sequence with every dormant gene zeroed. Two sequences render identically
// iff their canonical forms are equal.
Sequence Canonicalize(const GeneSchema& schema, std::span<const int> sequence);

struct SpaceSize {
  uint64_t value = 0;
  // True when the count hit the uint64 bound; `value` is then that bound.
  bool saturated = false;

  std::string ToString() const;
};

// Number of distinct renderable designs, computed over the activation forest.
SpaceSize CountSpace(const GeneSchema& schema);

// Calls `visit` once per distinct design (canonical sequences only), in
// lexicographic order. Stops early when `visit` returns false.
void ForEachDesign(const GeneSchema& schema,
                   const std::function<bool(const Sequence&)>& visit);

// Concrete standalone document for one configuration. All exploration markup
// is stripped and dormant genes contribute nothing.
std::string Render(const DesignSpec& spec, const GeneSchema& schema,
                   std::span<const int> sequence);

// A configuration names the chosen option value of every attribute.
struct Choice {
  int attr_id = 0;
  OptionValue value;

  friend bool operator==(const Choice&, const Choice&) = default;
};
using Configuration = std::vector<Choice>;

Sequence Encode(const DesignSpec& spec, const Configuration& config);
Configuration Decode(const DesignSpec& spec, std::span<const int> sequence);

}  // namespace designsearch

#endif  // DESIGNSEARCH_GENOME_H_
