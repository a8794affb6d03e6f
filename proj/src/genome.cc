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

#include "designsearch/genome.h"

#include <map>
#include <set>

#include "designsearch/error.h"
#include "designsearch/html.h"

namespace designsearch {
namespace {

uint64_t SaturatingMul(uint64_t a, uint64_t b, bool& saturated) {
  unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  if (product > UINT64_MAX) {
    saturated = true;
    return UINT64_MAX;
  }
  return static_cast<uint64_t>(product);
}

uint64_t SaturatingAdd(uint64_t a, uint64_t b, bool& saturated) {
  if (a > UINT64_MAX - b) {
    saturated = true;
    return UINT64_MAX;
  }
  return a + b;
}

std::string_view TrimDeclarations(std::string_view s) {
  auto is_trailing = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ';';
  };
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\n' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_trailing(s.back())) s.remove_suffix(1);
  return s;
}

void RemoveElements(html::Node& node, const std::set<std::string>& ids) {
  auto& children = node.children();
  std::erase_if(children, [&ids](const html::Node& child) {
    if (!child.is_element()) return false;
    if (child.tag() == kCssBlockTag) return true;
    auto id = child.GetAttribute("id");
    return id && ids.count(*id) > 0;
  });
  for (html::Node& child : children) RemoveElements(child, ids);
}

}  // namespace

GeneSchema BuildSchema(const DesignSpec& spec) {
  const std::vector<Diagnostic> diagnostics = Validate(spec);
  if (!diagnostics.empty()) {
    throw Error(ErrorCode::kValidationFailed,
                std::string(DiagnosticCodeName(diagnostics.front().code)) +
                    ": " + diagnostics.front().message,
                diagnostics.front().element_id);
  }
  GeneSchema schema;
  for (const ExploreAttribute& attr : spec.attributes) {
    schema.option_counts.push_back(static_cast<int>(attr.options.size()));
    schema.attr_of.push_back(attr.attr_id);
    if (attr.parent) {
      schema.activation.push_back(
          Activation{attr.parent->attr_id, attr.parent->option});
    } else {
      schema.activation.push_back(std::nullopt);
    }
  }
  return schema;
}

void CheckSequence(const GeneSchema& schema, std::span<const int> sequence) {
  if (static_cast<int>(sequence.size()) != schema.gene_count()) {
    throw Error(ErrorCode::kInvalidSequence,
                "sequence has " + std::to_string(sequence.size()) +
                    " genes, schema has " +
                    std::to_string(schema.gene_count()));
  }
  for (int i = 0; i < schema.gene_count(); ++i) {
    if (sequence[i] < 0 || sequence[i] >= schema.option_counts[i]) {
      throw Error(ErrorCode::kInvalidSequence,
                  "gene " + std::to_string(i) + " holds " +
                      std::to_string(sequence[i]) + ", expected [0, " +
                      std::to_string(schema.option_counts[i]) + ")");
    }
  }
}

std::vector<bool> ActiveGenes(const GeneSchema& schema,
                              std::span<const int> sequence) {
  // Parents precede children, so one forward pass settles every gene.
  std::vector<bool> active(schema.gene_count(), true);
  for (int i = 0; i < schema.gene_count(); ++i) {
    if (const auto& link = schema.activation[i]) {
      active[i] = active[link->parent_gene] &&
                  sequence[link->parent_gene] == link->option;
    }
  }
  return active;
}

Sequence Canonicalize(const GeneSchema& schema, std::span<const int> sequence) {
  const std::vector<bool> active = ActiveGenes(schema, sequence);
  Sequence out(sequence.begin(), sequence.end());
  for (size_t i = 0; i < out.size(); ++i) {
    if (!active[i]) out[i] = 0;
  }
  return out;
}

std::string SpaceSize::ToString() const {
  return saturated ? ">= " + std::to_string(value) : std::to_string(value);
}

SpaceSize CountSpace(const GeneSchema& schema) {
  const int n = schema.gene_count();
  // children[g][o] lists the genes activated by option o of gene g.
  std::vector<std::vector<std::vector<int>>> children(n);
  for (int g = 0; g < n; ++g) children[g].resize(schema.option_counts[g]);
  for (int g = 0; g < n; ++g) {
    if (const auto& link = schema.activation[g]) {
      children[link->parent_gene][link->option].push_back(g);
    }
  }
  bool saturated = false;
  // Children always have higher indices, so a reverse sweep sees every
  // subtree size before its parent needs it.
  std::vector<uint64_t> subtree(n, 0);
  for (int g = n - 1; g >= 0; --g) {
    uint64_t total = 0;
    for (const std::vector<int>& kids : children[g]) {
      uint64_t product = 1;
      for (int kid : kids) product = SaturatingMul(product, subtree[kid], saturated);
      total = SaturatingAdd(total, product, saturated);
    }
    subtree[g] = total;
  }
  uint64_t size = 1;
  for (int g = 0; g < n; ++g) {
    if (!schema.activation[g]) size = SaturatingMul(size, subtree[g], saturated);
  }
  return SpaceSize{size, saturated};
}

void ForEachDesign(const GeneSchema& schema,
                   const std::function<bool(const Sequence&)>& visit) {
  const int n = schema.gene_count();
  Sequence sequence(n, 0);
  std::vector<bool> active(n, true);
  // Depth-first over genes in order; false means the visitor asked to stop.
  std::function<bool(int)> descend = [&](int gene) -> bool {
    if (gene == n) return visit(sequence);
    const auto& link = schema.activation[gene];
    active[gene] = !link || (active[link->parent_gene] &&
                             sequence[link->parent_gene] == link->option);
    if (!active[gene]) {
      sequence[gene] = 0;
      return descend(gene + 1);
    }
    for (int option = 0; option < schema.option_counts[gene]; ++option) {
      sequence[gene] = option;
      if (!descend(gene + 1)) return false;
    }
    sequence[gene] = 0;
    return true;
  };
  descend(0);
}

std::string Render(const DesignSpec& spec, const GeneSchema& schema,
                   std::span<const int> sequence) {
  CheckSequence(schema, sequence);
  html::Document doc = html::Document::Parse(spec.base_html);
  const std::vector<bool> active = ActiveGenes(schema, sequence);

  std::map<std::string, std::vector<std::string>> declarations;
  std::set<std::string> removed;
  std::vector<std::string> rule_sets;
  for (int gene = 0; gene < schema.gene_count(); ++gene) {
    const ExploreAttribute& attr = spec.attributes[schema.attr_of[gene]];
    const OptionValue& chosen = attr.options[sequence[gene]];
    if (!active[gene]) continue;
    switch (attr.kind) {
      case AttributeKind::kCssProperty:
      case AttributeKind::kJointProperties: {
        auto& decls = declarations[attr.owner_element_id];
        for (size_t k = 0; k < attr.property_names.size(); ++k) {
          decls.push_back(attr.property_names[k] + ": " + chosen.segments[k]);
        }
        break;
      }
      case AttributeKind::kChildSelect:
        for (int option = 0; option < static_cast<int>(attr.options.size());
             ++option) {
          if (option != sequence[gene]) {
            removed.insert(attr.options[option].segments[0]);
          }
        }
        break;
      case AttributeKind::kCssBlockGroup:
        rule_sets.push_back(chosen.segments[0]);
        break;
    }
  }

  RemoveElements(doc.root(), removed);
  html::ForEachElementMutable(doc.root(), [&](html::Node& el) {
    if (auto id = el.GetAttribute("id")) {
      auto it = declarations.find(*id);
      if (it != declarations.end()) {
        std::string style(TrimDeclarations(el.GetAttribute("style").value_or("")));
        for (const std::string& decl : it->second) {
          if (!style.empty()) style += "; ";
          style += decl;
        }
        el.SetAttribute("style", std::move(style));
      }
    }
    el.RemoveAttributesIf([](const html::Attribute& a) {
      return a.name.starts_with(kExplorePrefix);
    });
  });
  if (!rule_sets.empty()) {
    html::Node* head = html::FindElement(
        doc.root(), [](const html::Node& el) { return el.tag() == "head"; });
    html::Node& target = head != nullptr ? *head : doc.root();
    for (const std::string& rules : rule_sets) {
      html::Node style = html::Node::MakeElement("style");
      style.children().push_back(html::Node::MakeText("\n" + rules + "\n"));
      target.children().push_back(std::move(style));
    }
  }
  return doc.Serialize();
}

Sequence Encode(const DesignSpec& spec, const Configuration& config) {
  std::map<int, const OptionValue*> chosen;
  for (const Choice& choice : config) chosen[choice.attr_id] = &choice.value;
  Sequence sequence;
  sequence.reserve(spec.attributes.size());
  for (const ExploreAttribute& attr : spec.attributes) {
    auto it = chosen.find(attr.attr_id);
    if (it == chosen.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "configuration has no choice for attribute " +
                      std::to_string(attr.attr_id));
    }
    int index = -1;
    for (size_t o = 0; o < attr.options.size(); ++o) {
      if (attr.options[o] == *it->second) {
        index = static_cast<int>(o);
        break;
      }
    }
    if (index < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "configuration value is not an option of attribute " +
                      std::to_string(attr.attr_id));
    }
    sequence.push_back(index);
  }
  return sequence;
}

Configuration Decode(const DesignSpec& spec, std::span<const int> sequence) {
  if (sequence.size() != spec.attributes.size()) {
    throw Error(ErrorCode::kInvalidSequence,
                "sequence length does not match the attribute count");
  }
  Configuration config;
  for (size_t i = 0; i < spec.attributes.size(); ++i) {
    const ExploreAttribute& attr = spec.attributes[i];
    if (sequence[i] < 0 ||
        sequence[i] >= static_cast<int>(attr.options.size())) {
      throw Error(ErrorCode::kInvalidSequence,
                  "gene " + std::to_string(i) + " is out of range");
    }
    config.push_back(Choice{attr.attr_id, attr.options[sequence[i]]});
  }
  return config;
}

}  // namespace designsearch
