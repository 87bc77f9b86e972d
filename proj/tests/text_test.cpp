/*
 * Copyright 2026 The polads Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "polads/text.hpp"

#include <gtest/gtest.h>

#include "polads/stemmer.hpp"
#include "test_util.hpp"

namespace polads {
namespace {

using testing::MakeRecord;

AdRecord TitleMessage(std::string title, std::string message) {
  AdRecord r = MakeRecord("a", 1, 0);
  r.title = std::move(title);
  r.message = std::move(message);
  return r;
}

TEST(StripMarkupTest, TagsAndEntities) {
  EXPECT_EQ(StripMarkup("<p>for change</p>"), "for change");
  EXPECT_EQ(StripMarkup("a &amp; b &lt;c&gt; &quot;d&quot; &#39;e&#39;"), "a & b <c> \"d\" 'e'");
  EXPECT_EQ(StripMarkup("x<br/>y"), "x y");
  EXPECT_EQ(StripMarkup("&amp;lt;"), "&lt;");
}

TEST(BuildTextTest, Examples) {
  EXPECT_EQ(BuildText(TitleMessage("Vote Now", "<p>for change</p>")), "Vote Now ⊥ for change");
  EXPECT_EQ(BuildText(TitleMessage("", "hello")), "hello");
  EXPECT_EQ(BuildText(TitleMessage("A", "")), "A");
}

TEST(TokenizeTest, Examples) {
  EXPECT_EQ(TokenizeAndStem("Vote for Trump!").tokens, (std::vector<std::string>{"vote", "trump"}));
  EXPECT_EQ(TokenizeAndStem("elections").tokens, (std::vector<std::string>{"elect"}));
  EXPECT_TRUE(TokenizeAndStem("a I .").tokens.empty());
}

TEST(TokenizeTest, StopWordsRemovedBeforeStemming) {
  // "detail" is a stop word; "details" is not, and its stem survives.
  EXPECT_EQ(TokenizeAndStem("detail details").tokens, (std::vector<std::string>{"detail"}));
}

TEST(TokenizeTest, SegmentBoundary) {
  const TokenStream s = TokenizeAndStem(BuildText(TitleMessage("Vote Now", "<p>for change</p>")));
  EXPECT_EQ(s.tokens, (std::vector<std::string>{"vote", "chang"}));
  EXPECT_EQ(s.segment_starts, (std::vector<std::size_t>{1}));
  EXPECT_TRUE(TokenizeAndStem("only ⊥ the ⊥ end").segment_starts.empty() ||
              TokenizeAndStem("only ⊥ the ⊥ end").segment_starts.front() > 0);
}

TEST(TokenizeTest, WordCharacters) {
  EXPECT_EQ(TokenizeAndStem("COVID19 x y2k e-mail").tokens, (std::vector<std::string>{"covid19", "y2k", "mail"}));
  EXPECT_EQ(TokenizeAndStem("café señor").tokens.size(), 2u);
  EXPECT_EQ(TokenizeAndStem("don't").tokens, (std::vector<std::string>{"don"}));
}

TEST(TokenizeTest, PropertyTokenInvariants) {
  const std::string text =
      "Paid for by the Committee to Re-elect! <b>VOTE</b> on Nov. 6th &amp; join 10,000 neighbours; "
      "healthcare, taxes and immigration matter. a b c ... i";
  const TokenStream s = TokenizeAndStem(text);
  ASSERT_FALSE(s.tokens.empty());
  for (const auto& t : s.tokens) {
    EXPECT_GE(t.size(), 2u);
    EXPECT_FALSE(StopList::English().Contains(t)) << t;
    for (char c : t) EXPECT_FALSE(std::isupper(static_cast<unsigned char>(c))) << t;
  }
}

TEST(StopListTest, BundledList) {
  EXPECT_EQ(StopList::English().size(), 318u);
  EXPECT_TRUE(StopList::English().Contains("for"));
  EXPECT_TRUE(StopList::English().Contains("the"));
  EXPECT_FALSE(StopList::English().Contains("vote"));
  EXPECT_EQ(StopList::FromText(StopList::EnglishText()).size(), 318u);
}

TEST(StopListTest, DataFileMatchesBundledList) {
  const StopList file = StopList::FromFile(POLADS_STOP_LIST_PATH);
  EXPECT_EQ(file.size(), StopList::English().size());
  EXPECT_TRUE(file.Contains("whereafter"));
}

TEST(StopListTest, CustomList) {
  const StopList custom = StopList::FromText(" vote \n\nshoe\n");
  EXPECT_EQ(custom.size(), 2u);
  EXPECT_EQ(TokenizeAndStem("vote for shoes", custom).tokens, (std::vector<std::string>{"for", "shoe"}));
}

}  // namespace
}  // namespace polads
