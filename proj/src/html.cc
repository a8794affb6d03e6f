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

#include "designsearch/html.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>

#include "designsearch/error.h"

namespace designsearch::html {
namespace {

constexpr std::array<std::string_view, 14> kVoidElements = {
    "area", "base", "br",   "col",   "embed",  "hr",    "img",
    "input", "link", "meta", "param", "source", "track", "wbr"};

// Elements whose end tag may be omitted; they are closed implicitly when an
// enclosing element ends or the document ends.
constexpr std::array<std::string_view, 19> kOptionalEndElements = {
    "p",     "li",    "dt",    "dd",       "option", "optgroup", "tr",
    "td",    "th",    "thead", "tbody",    "tfoot",  "colgroup", "caption",
    "rp",    "rt",    "html",  "head",     "body"};

// Start tags that implicitly end an open <p>.
constexpr std::array<std::string_view, 28> kClosesParagraph = {
    "address", "article", "aside", "blockquote", "details", "div",
    "dl",      "fieldset", "figure", "footer",   "form",    "h1",
    "h2",      "h3",      "h4",     "h5",       "h6",      "header",
    "hr",      "main",    "nav",    "ol",       "p",       "pre",
    "section", "table",   "ul",     "menu"};

constexpr std::array<std::string_view, 6> kRawTextElements = {
    "script", "style", "textarea", "title", "xmp", "explore-css"};

template <size_t N>
bool Contains(const std::array<std::string_view, N>& set,
              std::string_view tag) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool IsTagNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool IsTagNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' ||
         c == '_' || c == ':' || c == '.';
}

void AppendUtf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string DecodeEntities(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    if (in[i] != '&') {
      out += in[i];
      continue;
    }
    const size_t semi = in.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += in[i];
      continue;
    }
    const std::string_view name = in.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out += '&';
    } else if (name == "lt") {
      out += '<';
    } else if (name == "gt") {
      out += '>';
    } else if (name == "quot") {
      out += '"';
    } else if (name == "apos") {
      out += '\'';
    } else if (name.size() > 1 && name[0] == '#') {
      uint32_t cp = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      bool ok = name.size() > (hex ? 2u : 1u);
      for (size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
        const char c = name[k];
        if (hex && std::isxdigit(static_cast<unsigned char>(c))) {
          cp = cp * 16 + static_cast<uint32_t>(
                             std::isdigit(static_cast<unsigned char>(c))
                                 ? c - '0'
                                 : std::tolower(c) - 'a' + 10);
        } else if (!hex && std::isdigit(static_cast<unsigned char>(c))) {
          cp = cp * 10 + static_cast<uint32_t>(c - '0');
        } else {
          ok = false;
        }
        if (cp > 0x10FFFF) ok = false;
      }
      if (!ok) {
        out += in[i];
        continue;
      }
      AppendUtf8(out, cp);
    } else {
      out += in[i];
      continue;
    }
    i = semi;
  }
  return out;
}

}  // namespace

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Document Run() {
    Document doc;
    stack_.push_back(&doc.root());
    while (pos_ < src_.size()) {
      if (src_[pos_] == '<') {
        if (StartsWith("<!--")) {
          ParseComment();
          continue;
        }
        if (StartsWith("<!") || StartsWith("<?")) {
          ParseDeclaration();
          continue;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == '/' &&
            IsTagNameStart(src_[pos_ + 2])) {
          ParseEndTag();
          continue;
        }
        if (pos_ + 1 < src_.size() && IsTagNameStart(src_[pos_ + 1])) {
          ParseStartTag();
          continue;
        }
      }
      ParseText();
    }
    for (size_t i = stack_.size(); i-- > 1;) {
      if (!Contains(kOptionalEndElements, stack_[i]->tag_)) {
        Fail("unclosed <" + stack_[i]->tag_ + "> at end of document");
      }
    }
    return doc;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kMalformedMarkup,
                "HTML: " + what + " (offset " + std::to_string(pos_) + ")");
  }

  bool StartsWith(std::string_view prefix) const {
    return src_.substr(pos_, prefix.size()) == prefix;
  }

  Node& Top() { return *stack_.back(); }

  void AppendText(std::string_view raw, Node::Kind kind) {
    Node node(kind);
    node.text_ = std::string(raw);
    Top().children_.push_back(std::move(node));
  }

  void ParseText() {
    size_t end = src_.find('<', pos_ + 1);
    if (end == std::string_view::npos) end = src_.size();
    // Merge with a preceding text node so stray '<' stays one text run.
    auto& siblings = Top().children_;
    if (!siblings.empty() && siblings.back().kind_ == Node::Kind::kText) {
      siblings.back().text_.append(src_.substr(pos_, end - pos_));
    } else {
      AppendText(src_.substr(pos_, end - pos_), Node::Kind::kText);
    }
    pos_ = end;
  }

  void ParseComment() {
    const size_t end = src_.find("-->", pos_ + 4);
    if (end == std::string_view::npos) Fail("unterminated comment");
    AppendText(src_.substr(pos_, end + 3 - pos_), Node::Kind::kComment);
    pos_ = end + 3;
  }

  void ParseDeclaration() {
    const size_t end = src_.find('>', pos_);
    if (end == std::string_view::npos) Fail("unterminated declaration");
    AppendText(src_.substr(pos_, end + 1 - pos_), Node::Kind::kDoctype);
    pos_ = end + 1;
  }

  void ParseEndTag() {
    const size_t start = pos_;
    size_t p = pos_ + 2;
    while (p < src_.size() && IsTagNameChar(src_[p])) ++p;
    const std::string tag = Lower(src_.substr(pos_ + 2, p - pos_ - 2));
    const size_t close = src_.find('>', p);
    if (close == std::string_view::npos) Fail("unterminated end tag </" + tag + ">");
    pos_ = close + 1;
    const std::string_view raw = src_.substr(start, pos_ - start);
    if (IsVoidElement(tag)) {
      // Stray </br> and friends are kept verbatim as text.
      AppendText(raw, Node::Kind::kText);
      return;
    }
    size_t match = stack_.size();
    for (size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag_ == tag) {
        match = i;
        break;
      }
    }
    if (match == stack_.size()) {
      pos_ = start;
      Fail("end tag </" + tag + "> has no matching start tag");
    }
    for (size_t i = stack_.size() - 1; i > match; --i) {
      if (!Contains(kOptionalEndElements, stack_[i]->tag_)) {
        pos_ = start;
        Fail("end tag </" + tag + "> does not match open <" +
             stack_[i]->tag_ + ">");
      }
    }
    stack_.resize(match + 1);
    Top().raw_end_tag_ = std::string(raw);
    Top().has_end_tag_ = true;
    stack_.pop_back();
  }

  void ParseStartTag() {
    const size_t start = pos_;
    size_t p = pos_ + 1;
    while (p < src_.size() && IsTagNameChar(src_[p])) ++p;
    Node node(Node::Kind::kElement);
    node.tag_ = Lower(src_.substr(pos_ + 1, p - pos_ - 1));
    bool closed = false;
    while (p < src_.size()) {
      while (p < src_.size() && IsSpace(src_[p])) ++p;
      if (p >= src_.size()) break;
      if (src_[p] == '>') {
        ++p;
        closed = true;
        break;
      }
      if (src_[p] == '/') {
        if (p + 1 < src_.size() && src_[p + 1] == '>') {
          node.self_closing_ = true;
          p += 2;
          closed = true;
          break;
        }
        ++p;
        continue;
      }
      const size_t name_start = p;
      while (p < src_.size() && !IsSpace(src_[p]) && src_[p] != '=' &&
             src_[p] != '>' &&
             !(src_[p] == '/' && p + 1 < src_.size() && src_[p + 1] == '>')) {
        ++p;
      }
      Attribute attr;
      attr.name = Lower(src_.substr(name_start, p - name_start));
      size_t q = p;
      while (q < src_.size() && IsSpace(src_[q])) ++q;
      if (q < src_.size() && src_[q] == '=') {
        ++q;
        while (q < src_.size() && IsSpace(src_[q])) ++q;
        if (q >= src_.size()) break;
        attr.has_value = true;
        if (src_[q] == '"' || src_[q] == '\'') {
          const char quote = src_[q];
          const size_t end = src_.find(quote, q + 1);
          if (end == std::string_view::npos) {
            pos_ = name_start;
            Fail("unterminated attribute value for '" + attr.name + "'");
          }
          attr.value = DecodeEntities(src_.substr(q + 1, end - q - 1));
          p = end + 1;
        } else {
          const size_t value_start = q;
          while (q < src_.size() && !IsSpace(src_[q]) && src_[q] != '>') ++q;
          attr.value = DecodeEntities(src_.substr(value_start, q - value_start));
          p = q;
        }
      }
      node.attributes_.push_back(std::move(attr));
    }
    if (!closed) {
      pos_ = start;
      Fail("unterminated start tag <" + node.tag_ + ">");
    }
    pos_ = p;
    node.raw_start_tag_ = std::string(src_.substr(start, pos_ - start));

    const std::string tag = node.tag_;
    CloseImpliedEnds(tag);
    if (IsVoidElement(tag) || node.self_closing_) {
      Top().children_.push_back(std::move(node));
      return;
    }
    if (Contains(kRawTextElements, tag)) {
      const size_t end = FindRawTextEnd(tag);
      if (end == std::string_view::npos) Fail("unclosed <" + tag + ">");
      if (end > pos_) {
        Node text(Node::Kind::kText);
        text.text_ = std::string(src_.substr(pos_, end - pos_));
        node.children_.push_back(std::move(text));
      }
      const size_t close = src_.find('>', end);
      if (close == std::string_view::npos) Fail("unterminated </" + tag + ">");
      node.raw_end_tag_ = std::string(src_.substr(end, close + 1 - end));
      node.has_end_tag_ = true;
      pos_ = close + 1;
      Top().children_.push_back(std::move(node));
      return;
    }
    Top().children_.push_back(std::move(node));
    stack_.push_back(&Top().children_.back());
  }

  // Pops open optional-end elements that the start tag `tag` implicitly ends.
  void CloseImpliedEnds(std::string_view tag) {
    while (stack_.size() > 1) {
      const std::string_view top = Top().tag_;
      bool ends = false;
      if (top == "p") {
        ends = Contains(kClosesParagraph, tag);
      } else if (top == "li") {
        ends = tag == "li";
      } else if (top == "dt" || top == "dd") {
        ends = tag == "dt" || tag == "dd";
      } else if (top == "option") {
        ends = tag == "option" || tag == "optgroup";
      } else if (top == "td" || top == "th") {
        ends = tag == "td" || tag == "th" || tag == "tr";
      } else if (top == "tr") {
        ends = tag == "tr";
      } else if (top == "thead" || top == "tbody") {
        ends = tag == "tbody" || tag == "tfoot";
      }
      if (!ends) return;
      stack_.pop_back();
    }
  }

  size_t FindRawTextEnd(const std::string& tag) const {
    for (size_t p = src_.find("</", pos_); p != std::string_view::npos;
         p = src_.find("</", p + 2)) {
      const size_t after = p + 2 + tag.size();
      if (after > src_.size()) return std::string_view::npos;
      if (Lower(src_.substr(p + 2, tag.size())) == tag &&
          (after == src_.size() || IsSpace(src_[after]) || src_[after] == '>')) {
        return p;
      }
    }
    return std::string_view::npos;
  }

  std::string_view src_;
  size_t pos_ = 0;
  std::vector<Node*> stack_;
};

Node Node::MakeText(std::string text) {
  Node node(Kind::kText);
  node.text_ = std::move(text);
  return node;
}

Node Node::MakeElement(std::string tag) {
  Node node(Kind::kElement);
  node.tag_ = std::move(tag);
  node.start_tag_dirty_ = true;
  node.has_end_tag_ = !IsVoidElement(node.tag_);
  node.raw_end_tag_ = "</" + node.tag_ + ">";
  return node;
}

const Attribute* Node::FindAttribute(std::string_view name) const {
  for (const Attribute& attr : attributes_) {
    if (attr.name == name) return &attr;
  }
  return nullptr;
}

std::optional<std::string> Node::GetAttribute(std::string_view name) const {
  const Attribute* attr = FindAttribute(name);
  if (attr == nullptr) return std::nullopt;
  return attr->value;
}

void Node::SetAttribute(std::string_view name, std::string value) {
  for (Attribute& attr : attributes_) {
    if (attr.name == name) {
      attr.value = std::move(value);
      attr.has_value = true;
      start_tag_dirty_ = true;
      return;
    }
  }
  if (!start_tag_dirty_ && !raw_start_tag_.empty()) {
    // Splice the new attribute in right after the tag name so the rest of the
    // source spelling survives.
    const size_t insert_at = 1 + tag_.size();
    raw_start_tag_.insert(insert_at, " " + std::string(name) + "=\"" +
                                         EscapeAttributeValue(value) + "\"");
    attributes_.insert(attributes_.begin(),
                       Attribute{std::string(name), std::move(value), true});
    return;
  }
  start_tag_dirty_ = true;
  attributes_.push_back(Attribute{std::string(name), std::move(value), true});
}

bool Node::RemoveAttribute(std::string_view name) {
  return RemoveAttributesIf(
             [name](const Attribute& attr) { return attr.name == name; }) > 0;
}

int Node::RemoveAttributesIf(
    const std::function<bool(const Attribute&)>& pred) {
  const auto it = std::remove_if(attributes_.begin(), attributes_.end(), pred);
  const int removed = static_cast<int>(attributes_.end() - it);
  if (removed > 0) {
    attributes_.erase(it, attributes_.end());
    start_tag_dirty_ = true;
  }
  return removed;
}

std::string Node::InnerText() const {
  std::string out;
  for (const Node& child : children_) {
    if (child.kind_ == Kind::kText) out += child.text_;
  }
  return out;
}

void Node::Serialize(std::string& out) const {
  switch (kind_) {
    case Kind::kText:
    case Kind::kComment:
    case Kind::kDoctype:
      out += text_;
      return;
    case Kind::kRoot:
      for (const Node& child : children_) child.Serialize(out);
      return;
    case Kind::kElement:
      break;
  }
  if (!start_tag_dirty_) {
    out += raw_start_tag_;
  } else {
    out += '<';
    out += tag_;
    for (const Attribute& attr : attributes_) {
      out += ' ';
      out += attr.name;
      if (attr.has_value) {
        out += "=\"";
        out += EscapeAttributeValue(attr.value);
        out += '"';
      }
    }
    out += self_closing_ ? " />" : ">";
  }
  for (const Node& child : children_) child.Serialize(out);
  if (has_end_tag_) out += raw_end_tag_;
}

Document Document::Parse(std::string_view source) {
  return Parser(source).Run();
}

std::string Document::Serialize() const {
  std::string out;
  root_.Serialize(out);
  return out;
}

bool IsVoidElement(std::string_view tag) {
  return Contains(kVoidElements, tag);
}

namespace {

void VisitConst(
    const Node& node, std::vector<const Node*>& ancestors,
    const std::function<void(const Node&, const std::vector<const Node*>&)>&
        visit) {
  for (const Node& child : node.children()) {
    if (!child.is_element()) continue;
    visit(child, ancestors);
    ancestors.push_back(&child);
    VisitConst(child, ancestors, visit);
    ancestors.pop_back();
  }
}

}  // namespace

void ForEachElement(
    const Node& root,
    const std::function<void(const Node&, const std::vector<const Node*>&)>&
        visit) {
  std::vector<const Node*> ancestors;
  VisitConst(root, ancestors, visit);
}

void ForEachElementMutable(Node& root, const std::function<void(Node&)>& visit) {
  for (Node& child : root.children()) {
    if (!child.is_element()) continue;
    visit(child);
    ForEachElementMutable(child, visit);
  }
}

Node* FindElement(Node& root, const std::function<bool(const Node&)>& pred) {
  for (Node& child : root.children()) {
    if (!child.is_element()) continue;
    if (pred(child)) return &child;
    if (Node* found = FindElement(child, pred)) return found;
  }
  return nullptr;
}

std::string EscapeAttributeValue(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace designsearch::html
