#include <gtest/gtest.h>

#include <cmath>

#include "timeflow/naive_bayes.hpp"
#include "timeflow/text.hpp"

using namespace timeflow;

namespace {

NaiveBayes tiny(double alpha = 1.0) {
  const std::vector<LabeledTokens> ex = {
      {0, {"a", "b"}}, {0, {"a", "a"}}, {1, {"b", "c"}}};
  return NaiveBayes::train({"am", "pm"}, alpha, ex);
}

}  // namespace

TEST(NaiveBayes, HandComputedScores) {
  // Vocabulary {a,b,c} plus the unseen slot gives 4 smoothing slots.
  // Presence totals: am a=2 b=1 (3), pm b=1 c=1 (2).
  const auto nb = tiny();
  EXPECT_EQ(nb.vocabulary_size(), 3u);
  EXPECT_DOUBLE_EQ(nb.log_prior(0), std::log(2.0 / 3.0));
  EXPECT_DOUBLE_EQ(nb.log_likelihood("a", 0), std::log(3.0 / 7.0));
  EXPECT_DOUBLE_EQ(nb.log_likelihood("c", 0), std::log(1.0 / 7.0));
  EXPECT_DOUBLE_EQ(nb.log_likelihood("zzz", 1), std::log(1.0 / 6.0));
  const std::vector<std::string> doc = {"a", "a", "zzz"};
  const auto s = nb.joint_log_scores(doc);
  EXPECT_NEAR(s[0], std::log(2.0 / 3.0) + std::log(3.0 / 7.0) + std::log(1.0 / 7.0), 1e-12);
  EXPECT_NEAR(s[1], std::log(1.0 / 3.0) + std::log(1.0 / 6.0) + std::log(1.0 / 6.0), 1e-12);
}

TEST(NaiveBayes, AlphaChangesSmoothing) {
  const auto nb = tiny(0.5);
  EXPECT_DOUBLE_EQ(nb.log_likelihood("a", 0), std::log(2.5 / 5.0));
  EXPECT_THROW(tiny(0.0), Error);
}

TEST(NaiveBayes, LikelihoodsSumToOnePerClass) {
  const auto nb = tiny(0.7);
  for (std::size_t c = 0; c < 2; ++c) {
    double sum = std::exp(nb.log_likelihood("<unseen>", c));
    for (const char* t : {"a", "b", "c"}) sum += std::exp(nb.log_likelihood(t, c));
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(NaiveBayes, RepeatsDoNotCount) {
  const auto nb = tiny();
  const std::vector<std::string> once = {"b", "c"};
  const std::vector<std::string> many = {"c", "b", "b", "c", "c"};
  EXPECT_EQ(nb.joint_log_scores(once), nb.joint_log_scores(many));
}

TEST(NaiveBayes, EmptyClassNeverWins) {
  const std::vector<LabeledTokens> ex = {{0, {"x"}}};
  const auto nb = NaiveBayes::train({"a", "b", "c"}, 1.0, ex);
  const std::vector<std::string> doc = {"y"};
  const auto s = nb.joint_log_scores(doc);
  EXPECT_TRUE(std::isfinite(s[0]));
  EXPECT_TRUE(std::isinf(s[1]) && s[1] < 0);
  EXPECT_TRUE(std::isinf(s[2]) && s[2] < 0);
  EXPECT_THROW(NaiveBayes::train({"a"}, 1.0, std::vector<LabeledTokens>{{3, {}}}), Error);
}

TEST(NaiveBayes, SerializeRoundTrip) {
  const auto nb = tiny(0.25);
  std::string out;
  nb.serialize(out);
  const auto lines = text::split(out, '\n');
  std::vector<std::string> owned(lines.begin(), lines.end());
  std::size_t pos = 0;
  const auto back = NaiveBayes::parse(owned, pos);
  EXPECT_EQ(back, nb);
  EXPECT_EQ(pos, 3u + nb.vocabulary_size());
  owned.resize(4);
  pos = 0;
  EXPECT_THROW(NaiveBayes::parse(owned, pos), Error);
}
