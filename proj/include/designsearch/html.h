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

// A lenient HTML DOM that serializes back to the exact source text for every
// node that was not modified. It is only as strict as the markup extension
// needs: void elements may be left unclosed, elements with optional end tags
// (p, li, td, ...) are closed implicitly, and any other mismatched end tag is
// rejected with ErrorCode::kMalformedMarkup.

#ifndef DESIGNSEARCH_HTML_H_
#define DESIGNSEARCH_HTML_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace designsearch::html {

struct Attribute {
  std::string name;   // lowercased
  std::string value;  // entity-decoded
  bool has_value = false;
};

class Node {
 public:
  enum class Kind { kRoot, kElement, kText, kComment, kDoctype };

  static Node MakeRoot() { return Node(Kind::kRoot); }
  static Node MakeText(std::string text);
  static Node MakeElement(std::string tag);

  Kind kind() const { return kind_; }
  bool is_element() const { return kind_ == Kind::kElement; }
  const std::string& tag() const { return tag_; }

  // Raw source text of text/comment/doctype nodes.
  const std::string& text() const { return text_; }

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const Attribute* FindAttribute(std::string_view name) const;
  std::optional<std::string> GetAttribute(std::string_view name) const;
  // Sets (or appends) an attribute; marks the start tag for re-serialization.
  void SetAttribute(std::string_view name, std::string value);
  // Returns true if an attribute was removed.
  bool RemoveAttribute(std::string_view name);
  // Removes every attribute matching `pred`; returns how many were removed.
  int RemoveAttributesIf(const std::function<bool(const Attribute&)>& pred);

  std::vector<Node>& children() { return children_; }
  const std::vector<Node>& children() const { return children_; }

  // Concatenated raw text of the direct text children (for raw-text elements
  // such as <style> and <explore-css> this is the full content).
  std::string InnerText() const;

  void Serialize(std::string& out) const;

 private:
  friend class Parser;
  explicit Node(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::string tag_;
  std::string text_;
  std::vector<Attribute> attributes_;
  std::vector<Node> children_;
  // Source spelling of the start and end tags; reused while the attributes
  // are untouched so unmodified markup round-trips byte for byte.
  std::string raw_start_tag_;
  std::string raw_end_tag_;
  bool self_closing_ = false;
  bool start_tag_dirty_ = false;
  bool has_end_tag_ = false;
};

class Document {
 public:
  // Throws Error(kMalformedMarkup) on structurally mismatched tags.
  static Document Parse(std::string_view source);

  Node& root() { return root_; }
  const Node& root() const { return root_; }

  std::string Serialize() const;

 private:
  Node root_ = Node::MakeRoot();
};

bool IsVoidElement(std::string_view tag);

// Pre-order traversal over elements. The visitor receives the element and the
// chain of its element ancestors (outermost first).
void ForEachElement(
    const Node& root,
    const std::function<void(const Node&, const std::vector<const Node*>&)>&
        visit);
void ForEachElementMutable(Node& root, const std::function<void(Node&)>& visit);

// Finds the first element satisfying `pred` in document order.
Node* FindElement(Node& root, const std::function<bool(const Node&)>& pred);

std::string EscapeAttributeValue(std::string_view value);

}  // namespace designsearch::html

#endif  // DESIGNSEARCH_HTML_H_
