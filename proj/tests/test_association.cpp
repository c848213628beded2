#include <gtest/gtest.h>

#include "support.hpp"
#include "synthetic.hpp"
#include "timeflow/association.hpp"

using namespace timeflow;
using timeflow::testing::extract;
using timeflow::testing::make_doc;

TEST(HourBags, SingleSentenceWindow) {
  const std::vector<Document> docs = {make_doc("Breakfast at 7 a.m. was cold.")};
  const auto bags = build_hour_bags(docs, extract(docs[0]));
  EXPECT_EQ(bags.raw_count("breakfast", 7), 1);
  EXPECT_EQ(bags.raw_count("cold", 7), 1);
  EXPECT_EQ(bags.raw_count(".", 7), 0);  // punctuation is not a word
  EXPECT_EQ(bags.raw_total(7), 6);       // breakfast at 7 a.m. was cold
  for (int h : {6, 7, 8}) EXPECT_EQ(bags.merged_count("breakfast", h), 1);
  EXPECT_EQ(bags.merged_count("breakfast", 9), 0);
  EXPECT_EQ(bags.global_total(), 6);
}

TEST(HourBags, WindowClipsAtThreeSentences) {
  const std::vector<Document> docs = {make_doc(
      "Alpha one. Beta two. Gamma three. Delta four. At noon it rang. Eps five. Zeta six. "
      "Eta seven. Theta eight.")};
  const auto bags = build_hour_bags(docs, extract(docs[0]));
  EXPECT_EQ(bags.raw_count("alpha", 12), 0);
  EXPECT_EQ(bags.raw_count("beta", 12), 1);
  EXPECT_EQ(bags.raw_count("eta", 12), 1);
  EXPECT_EQ(bags.raw_count("theta", 12), 0);
  EXPECT_EQ(bags.global_count("theta"), 1);
}

TEST(HourBags, NoExpressionsGiveEmptyBags) {
  const std::vector<Document> docs = {make_doc("Nothing happened at all.")};
  const auto bags = build_hour_bags(docs, {});
  for (int h = 0; h < kHours; ++h) EXPECT_EQ(bags.merged_total(h), 0);
  EXPECT_EQ(bags.global_total(), 4);
}

TEST(HourBags, NeighborMergeCombinesAdjacentHours) {
  const std::vector<Document> docs = {
      make_doc("Porridge at 9 a.m. today.", "a"),
      make_doc("Sermon at 10 a.m. today.", "b")};
  std::vector<TimeExpression> exprs = extract(docs[0]);
  const auto more = extract(docs[1]);
  exprs.insert(exprs.end(), more.begin(), more.end());
  const auto bags = build_hour_bags(docs, exprs);
  EXPECT_EQ(bags.merged_count("porridge", 10), 1);
  EXPECT_EQ(bags.merged_count("sermon", 10), 1);
  EXPECT_EQ(bags.merged_count("today", 10), 2);
  EXPECT_EQ(bags.merged_total(10), bags.raw_total(9) + bags.raw_total(10) + bags.raw_total(11));
}

TEST(HourBags, MergeWrapsAroundMidnight) {
  const std::vector<Document> docs = {make_doc("Ghosts walk at midnight.")};
  const auto bags = build_hour_bags(docs, extract(docs[0]));
  for (int h : {23, 0, 1}) EXPECT_EQ(bags.merged_count("ghosts", h), 1);
  EXPECT_EQ(bags.merged_count("ghosts", 2), 0);
}

TEST(HourBags, MergedCountsAreSumsOfRawNeighbors) {
  const auto c = timeflow::testing::planted_corpus();
  const auto bags = build_hour_bags(c.documents, c.expressions);
  for (int h = 0; h < kHours; ++h) {
    std::int64_t total = 0;
    for (const auto& [w, n] : bags.merged(h)) {
      EXPECT_EQ(n, bags.raw_count(w, (h + 23) % 24) + bags.raw_count(w, h) +
                       bags.raw_count(w, (h + 1) % 24));
      total += n;
    }
    EXPECT_EQ(total, bags.merged_total(h));
  }
}

TEST(Score, UnseenWordIsAnError) {
  const std::vector<Document> docs = {make_doc("Tea at 4 p.m. sharp.")};
  const auto bags = build_hour_bags(docs, extract(docs[0]));
  try {
    score("coffee", 16, bags);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWordUnseen);
  }
  EXPECT_THROW(top_hours("coffee", bags, 3), Error);
}

TEST(Score, InRangeAndFullAtSaturation) {
  const auto c = timeflow::testing::planted_corpus();
  const auto bags = build_hour_bags(c.documents, c.expressions);
  for (const auto& [w, n] : bags.global()) {
    for (int h = 0; h < kHours; ++h) {
      const double s = score(w, h, bags);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
}

TEST(TopHours, PlantedWordRanksFirst) {
  const auto c = timeflow::testing::planted_corpus();
  const auto bags = build_hour_bags(c.documents, c.expressions);
  for (int h = 0; h < kHours; ++h) {
    const auto top = top_hours(timeflow::testing::planted_word(h), bags, 3);
    ASSERT_EQ(top.size(), 3u);
    EXPECT_EQ(top[0], h);
    // The two neighbors follow, lower hour first.
    EXPECT_EQ(std::min(top[1], top[2]), std::min((h + 23) % 24, (h + 1) % 24));
  }
  EXPECT_TRUE(top_hours("lamp", bags, 0).empty());
  EXPECT_EQ(top_hours("lamp", bags, 99).size(), 24u);
}

TEST(BagsFile, RoundTrip) {
  const auto c = timeflow::testing::planted_corpus();
  const auto bags = build_hour_bags(c.documents, c.expressions);
  const std::string s = serialize_bags(bags);
  EXPECT_EQ(parse_bags(s), bags);
  EXPECT_EQ(serialize_bags(parse_bags(s)), s);
  EXPECT_THROW(parse_bags("timeflow-bags\t2\n"), Error);
  std::string tampered = s;
  tampered.replace(tampered.find("total\t"), 7, "total\t9");
  EXPECT_THROW(parse_bags(tampered), Error);
}
