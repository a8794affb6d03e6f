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

#include <gtest/gtest.h>

#include <string>

#include "designsearch/error.h"
#include "test_util.h"

namespace designsearch::html {
namespace {

TEST(HtmlTest, UnmodifiedDocumentRoundTripsByteForByte) {
  for (const auto& path : testing::CorpusFiles()) {
    const std::string source = testing::ReadFile(path);
    EXPECT_EQ(Document::Parse(source).Serialize(), source) << path;
  }
}

TEST(HtmlTest, VoidElementsNeedNoEndTag) {
  Document doc = Document::Parse("<p>a<br>b<img src=x></p>");
  const Node& p = doc.root().children()[0];
  ASSERT_EQ(p.tag(), "p");
  ASSERT_EQ(p.children().size(), 4u);
  EXPECT_EQ(p.children()[1].tag(), "br");
  EXPECT_TRUE(p.children()[1].children().empty());
}

TEST(HtmlTest, OptionalEndTagsCloseImplicitly) {
  Document doc = Document::Parse("<ul><li>one<li>two</ul><p>x<p>y");
  const Node& ul = doc.root().children()[0];
  EXPECT_EQ(ul.children().size(), 2u);
  EXPECT_EQ(doc.root().children().size(), 3u);
  EXPECT_EQ(doc.Serialize(), "<ul><li>one<li>two</ul><p>x<p>y");
}

TEST(HtmlTest, BlockStartTagEndsOpenParagraph) {
  Document doc = Document::Parse("<div><p>a<div>b</div></div>");
  const Node& outer = doc.root().children()[0];
  ASSERT_EQ(outer.children().size(), 2u);
  EXPECT_EQ(outer.children()[1].tag(), "div");
}

TEST(HtmlTest, MismatchedTagIsRejected) {
  try {
    Document::Parse("<div><span></div></span>");
    FAIL() << "expected MalformedMarkup";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedMarkup);
  }
}

TEST(HtmlTest, UnclosedStructuralTagIsRejected) {
  EXPECT_THROW(Document::Parse("<div><section>text</div>"), Error);
  EXPECT_THROW(Document::Parse("<div>text"), Error);
}

TEST(HtmlTest, RawTextElementsAreNotParsed) {
  Document doc = Document::Parse(
      "<script>if (a < b) { x = '<div explore-x=\"1 2\">'; }</script>");
  const Node& script = doc.root().children()[0];
  ASSERT_EQ(script.children().size(), 1u);
  EXPECT_FALSE(script.children()[0].is_element());
}

TEST(HtmlTest, AttributeValuesAreEntityDecoded) {
  Document doc = Document::Parse(
      "<a title=\"&quot;x&quot; &amp; &#65;&#x42;\" data-u=bare></a>");
  const Node& a = doc.root().children()[0];
  EXPECT_EQ(a.GetAttribute("title"), "\"x\" & AB");
  EXPECT_EQ(a.GetAttribute("data-u"), "bare");
}

TEST(HtmlTest, SpacesAroundEqualsAreAccepted) {
  Document doc = Document::Parse("<div explore-background =\n   \"a b\"></div>");
  EXPECT_EQ(doc.root().children()[0].GetAttribute("explore-background"),
            "a b");
}

TEST(HtmlTest, NewAttributeOnCleanTagIsSplicedAfterName) {
  Document doc = Document::Parse("<p  class='x'   data-k=1>t</p>");
  Node& p = doc.root().children()[0];
  p.SetAttribute("id", "new");
  EXPECT_EQ(doc.Serialize(), "<p id=\"new\"  class='x'   data-k=1>t</p>");
}

TEST(HtmlTest, ModifiedTagIsRebuiltWithEscapedValues) {
  Document doc = Document::Parse("<p class='x' explore-color=\"a b\">t</p>");
  Node& p = doc.root().children()[0];
  p.RemoveAttribute("explore-color");
  p.SetAttribute("style", "font-family: \"Fira\"");
  EXPECT_EQ(doc.Serialize(),
            "<p class=\"x\" style=\"font-family: &quot;Fira&quot;\">t</p>");
}

TEST(HtmlTest, TagNamesAreCaseInsensitive) {
  Document doc = Document::Parse("<DIV ID=a><P>x</P></div>");
  const Node& div = doc.root().children()[0];
  EXPECT_EQ(div.tag(), "div");
  EXPECT_EQ(div.GetAttribute("id"), "a");
}

TEST(HtmlTest, ForEachElementReportsAncestors) {
  Document doc = Document::Parse("<div id=a><p id=b><span id=c></span></p></div>");
  std::string trail;
  ForEachElement(doc.root(), [&](const Node& node,
                                 const std::vector<const Node*>& ancestors) {
    if (node.GetAttribute("id") == "c") {
      for (const Node* a : ancestors) {
        if (a->is_element()) trail += *a->GetAttribute("id");
      }
    }
  });
  EXPECT_EQ(trail, "ab");
}

TEST(HtmlTest, EscapeAttributeValue) {
  EXPECT_EQ(EscapeAttributeValue("a\"b&c"), "a&quot;b&amp;c");
}

}  // namespace
}  // namespace designsearch::html
