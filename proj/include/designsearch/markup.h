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

// Parser for HTML annotated with the exploration markup:
//
//   <div explore-background="url(bg1.jpg) url(bg2.jpg) #333">   one property
//   <div explore-height-and-width="10px;20px 30px;40px">        joint properties
//   <div explore-child-id="nav-1 nav-2">                        pick one child
//   <head><explore-css> rules --- rules </explore-css></head>   rule-set groups
//
// Options are whitespace-delimited. Joint options carry one `;`-separated
// segment per property. Rule-set groups are separated by a line made only of
// dashes.

#ifndef DESIGNSEARCH_MARKUP_H_
#define DESIGNSEARCH_MARKUP_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlohmann/json_fwd.hpp"

namespace designsearch {

inline constexpr std::string_view kExplorePrefix = "explore-";
inline constexpr std::string_view kChildIdAttribute = "explore-child-id";
inline constexpr std::string_view kCssBlockTag = "explore-css";
inline constexpr std::string_view kGeneratedIdPrefix = "sw-id-";
inline constexpr std::string_view kCssGroupIdPrefix = "explore-css-";

enum class AttributeKind {
  kCssProperty,
  kJointProperties,
  kChildSelect,
  kCssBlockGroup,
};

std::string_view AttributeKindName(AttributeKind kind);

struct OptionValue {
  std::vector<std::string> segments;

  friend bool operator==(const OptionValue&, const OptionValue&) = default;
};

struct ParentLink {
  int attr_id = 0;
  int option = 0;

  friend bool operator==(const ParentLink&, const ParentLink&) = default;
};

struct ExploreAttribute {
  int attr_id = 0;
  std::string owner_element_id;
  AttributeKind kind = AttributeKind::kCssProperty;
  std::vector<std::string> property_names;
  std::vector<OptionValue> options;
  std::optional<ParentLink> parent;

  friend bool operator==(const ExploreAttribute&,
                         const ExploreAttribute&) = default;
};

// Explored elements in document nesting order. The root node has an empty
// element id and stands for the document itself.
struct HierarchyNode {
  std::string element_id;
  std::vector<int> attr_ids;
  std::vector<HierarchyNode> children;

  friend bool operator==(const HierarchyNode&, const HierarchyNode&) = default;
};

struct DesignSpec {
  std::string base_html;
  std::vector<ExploreAttribute> attributes;
  HierarchyNode tree;
};

enum class DiagnosticCode {
  kTooFewOptions,
  kEmptyOption,
  kJointArityMismatch,
  kUnknownChildId,
  kChildNotDirect,
  kOverlappingChildSelect,
  kNestingTooDeep,
  kDuplicateId,
  kNonDenseIds,
  kBadParentLink,
  kUnparseableDocument,
};

std::string_view DiagnosticCodeName(DiagnosticCode code);

struct Diagnostic {
  DiagnosticCode code;
  std::string element_id;
  std::string message;
};

// Child-select nesting deeper than this is reported by Validate.
inline constexpr int kMaxChildSelectDepth = 3;

// Parses an annotated document. Throws Error with kMalformedMarkup,
// kUnknownChildId, kDuplicateId or kJointArityMismatch. Elements carrying
// explore markup without an id get `sw-id-<n>` ids, skipping any n whose id
// already occurs in the document.
DesignSpec Parse(std::string_view document);

struct JointParse {
  std::vector<std::string> property_names;
  std::vector<OptionValue> options;
};

// Splits `explore-a-and-b` / "a1;b1 a2;b2". Throws kJointArityMismatch when an
// option's segment count differs from the property count.
JointParse ParseJoint(std::string_view name, std::string_view value);

// Empty iff every DesignSpec invariant holds.
std::vector<Diagnostic> Validate(const DesignSpec& spec);

// Splits on runs of whitespace, dropping empty tokens.
std::vector<std::string> SplitWhitespace(std::string_view text);

// Splits `<explore-css>` content on dash-only lines into trimmed rule sets.
// Empty groups are returned as empty strings so callers can reject them.
std::vector<std::string> SplitCssGroups(std::string_view text);

nlohmann::json ToJson(const DesignSpec& spec);

}  // namespace designsearch

#endif  // DESIGNSEARCH_MARKUP_H_
