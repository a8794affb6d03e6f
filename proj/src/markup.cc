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

#include "designsearch/markup.h"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "designsearch/error.h"
#include "designsearch/html.h"

namespace designsearch {
namespace {

using html::Node;

constexpr std::string_view kJointSeparator = "-and-";

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool IsExploreAttribute(std::string_view name) {
  return name.starts_with(kExplorePrefix);
}

bool HasExploreMarkup(const Node& el) {
  return std::any_of(el.attributes().begin(), el.attributes().end(),
                     [](const html::Attribute& a) {
                       return IsExploreAttribute(a.name);
                     });
}

std::optional<std::string> ElementId(const Node& el) {
  auto id = el.GetAttribute("id");
  if (!id || id->empty()) return std::nullopt;
  return id;
}

std::vector<OptionValue> SingleSegmentOptions(std::vector<std::string> tokens) {
  std::vector<OptionValue> options;
  options.reserve(tokens.size());
  for (std::string& token : tokens) {
    options.push_back(OptionValue{{std::move(token)}});
  }
  return options;
}

// Per-element bookkeeping gathered during the document-order walk.
struct ExploredElement {
  const Node* element = nullptr;
  std::string element_id;
  std::vector<int> attr_ids;
};

class SpecBuilder {
 public:
  explicit SpecBuilder(html::Document& doc) : doc_(doc) {}

  DesignSpec Build(std::string_view source) {
    CollectIds();
    const bool ids_added = AssignMissingIds();
    html::ForEachElement(doc_.root(),
                         [this](const Node& el,
                                const std::vector<const Node*>& ancestors) {
                           Visit(el, ancestors);
                         });
    DesignSpec spec;
    spec.base_html = ids_added ? doc_.Serialize() : std::string(source);
    spec.attributes = std::move(attributes_);
    BuildTree(doc_.root(), spec.tree);
    return spec;
  }

 private:
  void CollectIds() {
    html::ForEachElement(
        doc_.root(), [this](const Node& el, const std::vector<const Node*>&) {
          auto id = ElementId(el);
          if (!id) return;
          if (!ids_.insert(*id).second) {
            throw Error(ErrorCode::kDuplicateId,
                        "id '" + *id + "' is used by more than one element",
                        *id);
          }
        });
  }

  bool AssignMissingIds() {
    bool added = false;
    int counter = 0;
    html::ForEachElementMutable(doc_.root(), [&](Node& el) {
      if (el.tag() == kCssBlockTag || !HasExploreMarkup(el) || ElementId(el)) {
        return;
      }
      std::string id;
      do {
        id = std::string(kGeneratedIdPrefix) + std::to_string(counter++);
      } while (ids_.count(id) > 0);
      ids_.insert(id);
      el.SetAttribute("id", id);
      added = true;
    });
    return added;
  }

  // Nearest enclosing child-select candidate whose select owner is itself an
  // ancestor of the candidate.
  std::optional<ParentLink> EnclosingCandidate(
      const Node& el, const std::vector<const Node*>& ancestors) const {
    std::vector<const Node*> chain = ancestors;
    chain.push_back(&el);
    for (size_t i = chain.size(); i-- > 0;) {
      auto id = ElementId(*chain[i]);
      if (!id) continue;
      auto it = candidates_.find(*id);
      if (it == candidates_.end()) continue;
      const Node* owner = it->second.owner;
      if (std::find(chain.begin(), chain.begin() + static_cast<long>(i),
                    owner) != chain.begin() + static_cast<long>(i)) {
        return it->second.link;
      }
    }
    return std::nullopt;
  }

  void Visit(const Node& el, const std::vector<const Node*>& ancestors) {
    if (el.tag() == kCssBlockTag) {
      VisitCssBlock(el, ancestors);
      return;
    }
    if (!HasExploreMarkup(el)) return;
    const std::string owner_id = *ElementId(el);
    const std::optional<ParentLink> parent = EnclosingCandidate(el, ancestors);
    ExploredElement& record = Record(el, owner_id);

    for (const html::Attribute& attr : el.attributes()) {
      if (!IsExploreAttribute(attr.name)) continue;
      ExploreAttribute out;
      out.attr_id = static_cast<int>(attributes_.size());
      out.owner_element_id = owner_id;
      out.parent = parent;
      if (attr.name == kChildIdAttribute) {
        out.kind = AttributeKind::kChildSelect;
        out.options = SingleSegmentOptions(SplitWhitespace(attr.value));
        for (size_t i = 0; i < out.options.size(); ++i) {
          const std::string& child = out.options[i].segments[0];
          if (ids_.count(child) == 0) {
            throw Error(ErrorCode::kUnknownChildId,
                        "explore-child-id on '" + owner_id +
                            "' names missing id '" + child + "'",
                        child);
          }
          candidates_.emplace(
              child, Candidate{&el, ParentLink{out.attr_id, static_cast<int>(i)}});
        }
      } else {
        const std::string_view property =
            std::string_view(attr.name).substr(kExplorePrefix.size());
        if (property.empty()) {
          throw Error(ErrorCode::kMalformedMarkup,
                      "attribute '" + attr.name + "' names no property",
                      owner_id);
        }
        if (property.find(kJointSeparator) != std::string_view::npos) {
          JointParse joint = ParseJoint(attr.name, attr.value);
          out.kind = AttributeKind::kJointProperties;
          out.property_names = std::move(joint.property_names);
          out.options = std::move(joint.options);
        } else {
          out.kind = AttributeKind::kCssProperty;
          out.property_names = {std::string(property)};
          out.options = SingleSegmentOptions(SplitWhitespace(attr.value));
        }
      }
      if (out.options.empty()) {
        throw Error(ErrorCode::kMalformedMarkup,
                    "attribute '" + attr.name + "' on '" + owner_id +
                        "' has an empty option list",
                    owner_id);
      }
      record.attr_ids.push_back(out.attr_id);
      attributes_.push_back(std::move(out));
    }
  }

  void VisitCssBlock(const Node& el, const std::vector<const Node*>& ancestors) {
    const bool in_head =
        std::any_of(ancestors.begin(), ancestors.end(),
                    [](const Node* a) { return a->tag() == "head"; });
    if (!in_head) {
      throw Error(ErrorCode::kMalformedMarkup,
                  "<explore-css> is only recognized inside <head>");
    }
    const std::string owner_id =
        std::string(kCssGroupIdPrefix) + std::to_string(css_groups_++);
    ExploreAttribute out;
    out.attr_id = static_cast<int>(attributes_.size());
    out.owner_element_id = owner_id;
    out.kind = AttributeKind::kCssBlockGroup;
    out.parent = EnclosingCandidate(el, ancestors);
    for (std::string& group : SplitCssGroups(el.InnerText())) {
      if (group.empty()) {
        throw Error(ErrorCode::kMalformedMarkup,
                    "<explore-css> block has an empty rule-set option",
                    owner_id);
      }
      out.options.push_back(OptionValue{{std::move(group)}});
    }
    if (out.options.empty()) {
      throw Error(ErrorCode::kMalformedMarkup,
                  "<explore-css> block has no rule sets", owner_id);
    }
    Record(el, owner_id).attr_ids.push_back(out.attr_id);
    attributes_.push_back(std::move(out));
  }

  ExploredElement& Record(const Node& el, const std::string& id) {
    auto [it, inserted] = explored_.try_emplace(&el);
    if (inserted) {
      it->second.element = &el;
      it->second.element_id = id;
    }
    return it->second;
  }

  void BuildTree(const Node& node, HierarchyNode& parent) const {
    for (const Node& child : node.children()) {
      if (!child.is_element()) continue;
      auto it = explored_.find(&child);
      if (it == explored_.end()) {
        BuildTree(child, parent);
        continue;
      }
      HierarchyNode entry;
      entry.element_id = it->second.element_id;
      entry.attr_ids = it->second.attr_ids;
      BuildTree(child, entry);
      parent.children.push_back(std::move(entry));
    }
  }

  struct Candidate {
    const Node* owner;
    ParentLink link;
  };

  html::Document& doc_;
  std::set<std::string> ids_;
  // First registration wins; overlaps are reported by Validate.
  std::map<std::string, Candidate> candidates_;
  std::map<const Node*, ExploredElement> explored_;
  std::vector<ExploreAttribute> attributes_;
  int css_groups_ = 0;
};

}  // namespace

std::string_view AttributeKindName(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kCssProperty: return "css_property";
    case AttributeKind::kJointProperties: return "joint_properties";
    case AttributeKind::kChildSelect: return "child_select";
    case AttributeKind::kCssBlockGroup: return "css_block_group";
  }
  return "unknown";
}

std::string_view DiagnosticCodeName(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::kTooFewOptions: return "TooFewOptions";
    case DiagnosticCode::kEmptyOption: return "EmptyOption";
    case DiagnosticCode::kJointArityMismatch: return "JointArityMismatch";
    case DiagnosticCode::kUnknownChildId: return "UnknownChildId";
    case DiagnosticCode::kChildNotDirect: return "ChildNotDirect";
    case DiagnosticCode::kOverlappingChildSelect: return "OverlappingChildSelect";
    case DiagnosticCode::kNestingTooDeep: return "NestingTooDeep";
    case DiagnosticCode::kDuplicateId: return "DuplicateId";
    case DiagnosticCode::kNonDenseIds: return "NonDenseIds";
    case DiagnosticCode::kBadParentLink: return "BadParentLink";
    case DiagnosticCode::kUnparseableDocument: return "UnparseableDocument";
  }
  return "Unknown";
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> SplitCssGroups(std::string_view text) {
  std::vector<std::string> groups;
  std::string current;
  bool saw_separator = false;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    const std::string_view trimmed = Trim(line);
    const bool is_separator =
        !trimmed.empty() &&
        trimmed.find_first_not_of('-') == std::string_view::npos;
    if (is_separator) {
      groups.emplace_back(Trim(current));
      current.clear();
      saw_separator = true;
    } else {
      current.append(line);
      if (eol < text.size()) current += '\n';
    }
    pos = eol + 1;
  }
  const std::string_view last = Trim(current);
  if (!last.empty() || saw_separator) groups.emplace_back(last);
  return groups;
}

JointParse ParseJoint(std::string_view name, std::string_view value) {
  if (!name.starts_with(kExplorePrefix)) {
    throw Error(ErrorCode::kMalformedMarkup,
                "joint attribute '" + std::string(name) +
                    "' lacks the explore- prefix");
  }
  JointParse out;
  std::string_view rest = name.substr(kExplorePrefix.size());
  while (true) {
    const size_t at = rest.find(kJointSeparator);
    out.property_names.emplace_back(rest.substr(0, at));
    if (out.property_names.back().empty()) {
      throw Error(ErrorCode::kMalformedMarkup,
                  "joint attribute '" + std::string(name) +
                      "' has an empty property name");
    }
    if (at == std::string_view::npos) break;
    rest.remove_prefix(at + kJointSeparator.size());
  }
  for (const std::string& token : SplitWhitespace(value)) {
    OptionValue option;
    std::string_view remaining = token;
    while (true) {
      const size_t semi = remaining.find(';');
      option.segments.emplace_back(Trim(remaining.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      remaining.remove_prefix(semi + 1);
    }
    if (option.segments.size() != out.property_names.size()) {
      throw Error(ErrorCode::kJointArityMismatch,
                  "option '" + token + "' of '" + std::string(name) + "' has " +
                      std::to_string(option.segments.size()) +
                      " segments for " +
                      std::to_string(out.property_names.size()) +
                      " properties");
    }
    out.options.push_back(std::move(option));
  }
  return out;
}

DesignSpec Parse(std::string_view document) {
  html::Document doc = html::Document::Parse(document);
  return SpecBuilder(doc).Build(document);
}

std::vector<Diagnostic> Validate(const DesignSpec& spec) {
  std::vector<Diagnostic> out;
  auto report = [&out](DiagnosticCode code, std::string element_id,
                       std::string message) {
    out.push_back(Diagnostic{code, std::move(element_id), std::move(message)});
  };

  // Element index rebuilt from base_html: id -> parent element id.
  std::map<std::string, std::string> parent_of;
  try {
    const html::Document doc = html::Document::Parse(spec.base_html);
    std::set<std::string> seen;
    html::ForEachElement(
        doc.root(),
        [&](const Node& el, const std::vector<const Node*>& ancestors) {
          auto id = el.GetAttribute("id");
          if (!id || id->empty()) return;
          if (!seen.insert(*id).second) {
            report(DiagnosticCode::kDuplicateId, *id,
                   "id '" + *id + "' is used by more than one element");
          }
          std::string parent_id;
          if (!ancestors.empty()) {
            parent_id = ancestors.back()->GetAttribute("id").value_or("");
          }
          parent_of[*id] = parent_id;
        });
  } catch (const Error& e) {
    report(DiagnosticCode::kUnparseableDocument, "", e.what());
  }

  std::map<std::string, int> candidate_uses;
  for (size_t i = 0; i < spec.attributes.size(); ++i) {
    const ExploreAttribute& attr = spec.attributes[i];
    const std::string& owner = attr.owner_element_id;
    if (attr.attr_id != static_cast<int>(i)) {
      report(DiagnosticCode::kNonDenseIds, owner,
             "attribute at position " + std::to_string(i) + " has id " +
                 std::to_string(attr.attr_id));
    }
    if (attr.options.size() < 2) {
      report(DiagnosticCode::kTooFewOptions, owner,
             "attribute " + std::to_string(i) + " on '" + owner + "' has " +
                 std::to_string(attr.options.size()) +
                 " option(s); exploring needs at least 2");
    }
    for (const OptionValue& option : attr.options) {
      const bool empty =
          option.segments.empty() ||
          std::any_of(option.segments.begin(), option.segments.end(),
                      [](const std::string& s) { return Trim(s).empty(); });
      if (empty) {
        report(DiagnosticCode::kEmptyOption, owner,
               "attribute " + std::to_string(i) + " has an empty option value");
        break;
      }
    }
    const size_t expected_segments =
        attr.kind == AttributeKind::kJointProperties ? attr.property_names.size()
                                                     : 1;
    for (const OptionValue& option : attr.options) {
      if (option.segments.size() != expected_segments) {
        report(DiagnosticCode::kJointArityMismatch, owner,
               "attribute " + std::to_string(i) + " has an option with " +
                   std::to_string(option.segments.size()) + " segments, expected " +
                   std::to_string(expected_segments));
        break;
      }
    }
    if (attr.kind == AttributeKind::kChildSelect) {
      for (const OptionValue& option : attr.options) {
        if (option.segments.empty()) continue;
        const std::string& child = option.segments[0];
        ++candidate_uses[child];
        auto it = parent_of.find(child);
        if (it == parent_of.end()) {
          report(DiagnosticCode::kUnknownChildId, child,
                 "explore-child-id on '" + owner + "' names missing id '" +
                     child + "'");
        } else if (it->second != owner) {
          report(DiagnosticCode::kChildNotDirect, child,
                 "'" + child + "' is not a direct child of '" + owner + "'");
        }
      }
      int depth = 1;
      for (auto link = attr.parent; link;) {
        if (link->attr_id < 0 ||
            link->attr_id >= static_cast<int>(spec.attributes.size()) ||
            link->attr_id >= static_cast<int>(i)) {
          break;
        }
        const ExploreAttribute& up = spec.attributes[link->attr_id];
        if (up.kind == AttributeKind::kChildSelect) ++depth;
        link = up.parent;
      }
      if (depth > kMaxChildSelectDepth) {
        report(DiagnosticCode::kNestingTooDeep, owner,
               "explore-child-id on '" + owner + "' is nested " +
                   std::to_string(depth) + " levels deep (limit " +
                   std::to_string(kMaxChildSelectDepth) + ")");
      }
    }
    if (attr.parent) {
      const ParentLink& link = *attr.parent;
      const bool ok =
          link.attr_id >= 0 && link.attr_id < static_cast<int>(i) &&
          spec.attributes[link.attr_id].kind == AttributeKind::kChildSelect &&
          link.option >= 0 &&
          link.option <
              static_cast<int>(spec.attributes[link.attr_id].options.size());
      if (!ok) {
        report(DiagnosticCode::kBadParentLink, owner,
               "attribute " + std::to_string(i) +
                   " has an invalid parent link");
      }
    }
  }
  for (const auto& [child, uses] : candidate_uses) {
    if (uses > 1) {
      report(DiagnosticCode::kOverlappingChildSelect, child,
             "'" + child + "' is named by " + std::to_string(uses) +
                 " explore-child-id options");
    }
  }
  return out;
}

namespace {

nlohmann::json TreeToJson(const HierarchyNode& node) {
  nlohmann::json children = nlohmann::json::array();
  for (const HierarchyNode& child : node.children) {
    children.push_back(TreeToJson(child));
  }
  return {{"element_id", node.element_id},
          {"attr_ids", node.attr_ids},
          {"children", std::move(children)}};
}

}  // namespace

nlohmann::json ToJson(const DesignSpec& spec) {
  nlohmann::json attributes = nlohmann::json::array();
  for (const ExploreAttribute& attr : spec.attributes) {
    nlohmann::json options = nlohmann::json::array();
    for (const OptionValue& option : attr.options) {
      options.push_back(option.segments);
    }
    nlohmann::json parent = nullptr;
    if (attr.parent) {
      parent = {{"attr_id", attr.parent->attr_id},
                {"option", attr.parent->option}};
    }
    attributes.push_back({{"attr_id", attr.attr_id},
                          {"owner_element_id", attr.owner_element_id},
                          {"kind", AttributeKindName(attr.kind)},
                          {"property_names", attr.property_names},
                          {"options", std::move(options)},
                          {"parent", std::move(parent)}});
  }
  return {{"attributes", std::move(attributes)},
          {"tree", TreeToJson(spec.tree)},
          {"base_html", spec.base_html}};
}

}  // namespace designsearch
