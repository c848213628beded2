#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "support.hpp"
#include "timeflow/segment.hpp"

using namespace timeflow;
using timeflow::testing::extract;
using timeflow::testing::make_doc;

namespace {

HourDistribution one_hot(int h) {
  HourDistribution d{};
  d[h] = 1.0;
  return d;
}

// Eight units of 1/8 scattered over random hours: every partial sum is exact
// in binary floating point, so optimal objectives compare with ==.
std::vector<HourDistribution> dyadic(std::mt19937_64& rng, std::size_t n) {
  std::vector<HourDistribution> out(n, HourDistribution{});
  for (auto& d : out) {
    const int center = static_cast<int>(rng() % 24);
    for (int u = 0; u < 8; ++u) d[(center + static_cast<int>(rng() % 3)) % 24] += 0.125;
  }
  return out;
}

// Every way to cut n windows into k non-empty runs, each run scored at its
// heaviest hour.
double brute_force_best(const std::vector<HourDistribution>& p, std::size_t k) {
  const std::size_t n = p.size();
  double best = -1.0;
  std::vector<std::size_t> starts = {0};
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (starts.size() == k) {
      double total = 0.0;
      for (std::size_t s = 0; s < k; ++s) {
        const std::size_t end = s + 1 < k ? starts[s + 1] : n;
        double seg_best = 0.0;
        for (int h = 0; h < 24; ++h) {
          double sum = 0.0;
          for (std::size_t j = starts[s]; j < end; ++j) sum += p[j][h];
          seg_best = std::max(seg_best, sum);
        }
        total += seg_best;
      }
      best = std::max(best, total);
      return;
    }
    for (std::size_t b = from; b + (k - starts.size()) <= n - 1; ++b) {
      starts.push_back(b + 1);
      rec(b + 1);
      starts.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace

TEST(Partition, MatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 9;
    const auto p = dyadic(rng, n);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto seg = dp_partition(p, k);
      ASSERT_EQ(seg.k(), k);
      EXPECT_EQ(seg.objective, brute_force_best(p, k)) << "n=" << n << " k=" << k;
      EXPECT_EQ(seg.starts.front(), 0u);
      EXPECT_TRUE(std::is_sorted(seg.starts.begin(), seg.starts.end()));
      EXPECT_EQ(std::adjacent_find(seg.starts.begin(), seg.starts.end()), seg.starts.end());
    }
  }
}

TEST(Partition, ObjectiveGrowsWithK) {
  std::mt19937_64 rng(5);
  const auto p = dyadic(rng, 30);
  double previous = 0.0;
  for (std::size_t k = 1; k <= 30; ++k) {
    const double obj = dp_partition(p, k).objective;
    EXPECT_GE(obj, previous);
    EXPECT_GE(obj, max_hour_baseline(p, k).objective);
    EXPECT_GE(obj, noon_baseline(std::span<const HourDistribution>(p)).objective);
    previous = obj;
  }
  EXPECT_EQ(dp_partition(p, 30).objective, brute_force_best(p, 30));
}

TEST(Partition, RecoversPlantedBlocks) {
  std::vector<HourDistribution> p;
  for (int i = 0; i < 3; ++i) p.push_back(one_hot(3));
  for (int i = 0; i < 4; ++i) p.push_back(one_hot(15));
  for (int i = 0; i < 2; ++i) p.push_back(one_hot(22));
  const auto seg = dp_partition(p, 3);
  EXPECT_EQ(seg.starts, (std::vector<std::size_t>{0, 3, 7}));
  EXPECT_EQ(seg.hours, (std::vector<int>{3, 15, 22}));
  EXPECT_EQ(seg.objective, 9.0);
  EXPECT_EQ(hour_track(seg, p.size()), (std::vector<int>{3, 3, 3, 15, 15, 15, 15, 22, 22}));
  EXPECT_EQ(segment_ids(seg, p.size()),
            (std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 1, 2, 2}));
}

TEST(Partition, TiesPreferLaterBreakThenLowerHour) {
  const std::vector<HourDistribution> p(3, uniform_distribution());
  const auto seg = dp_partition(p, 2);
  EXPECT_EQ(seg.starts, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(seg.hours, (std::vector<int>{0, 0}));
}

TEST(Partition, KBounds) {
  const std::vector<HourDistribution> p(4, uniform_distribution());
  EXPECT_THROW(dp_partition(p, 0), Error);
  EXPECT_THROW(dp_partition(p, 5), Error);
  EXPECT_THROW(dp_partition(std::span<const HourDistribution>(), 1), Error);
  EXPECT_EQ(dp_partition(p, 4).k(), 4u);
}

TEST(Baselines, MaxHourUsesEqualBlocks) {
  std::vector<HourDistribution> p;
  for (int i = 0; i < 7; ++i) p.push_back(one_hot(i < 4 ? 8 : 20));
  const auto seg = max_hour_baseline(p, 2);
  EXPECT_EQ(seg.starts, (std::vector<std::size_t>{0, 4}));
  EXPECT_EQ(seg.hours, (std::vector<int>{8, 20}));
  const auto noon = noon_baseline(p.size());
  EXPECT_EQ(hour_track(noon, 7), std::vector<int>(7, 12));
}

TEST(Baselines, ChooseK) {
  EXPECT_EQ(choose_k(1), 1u);
  EXPECT_EQ(choose_k(4), 1u);
  EXPECT_EQ(choose_k(11), 1u);
  EXPECT_EQ(choose_k(12), 2u);
  EXPECT_EQ(choose_k(20), 3u);
  EXPECT_EQ(choose_k(80), 10u);
  EXPECT_EQ(choose_k(10, 2.0), 5u);
  EXPECT_THROW(choose_k(0), Error);
  EXPECT_THROW(choose_k(5, 0.0), Error);
}

TEST(Distributions, ModelScoresAreScaledAndSmoothed) {
  HourScores s{};
  s[0] = 7.0;
  const auto d = model_distribution(s);
  EXPECT_DOUBLE_EQ(d[23], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(d[0], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(d[1], 1.0 / 3.0);
  EXPECT_EQ(d[2], 0.0);
  HourScores flat;
  flat.fill(-4.0);
  EXPECT_EQ(model_distribution(flat), uniform_distribution());
  s[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(model_distribution(s), Error);
}

TEST(Distributions, AlwaysNormalized) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 30.0);
  for (int t = 0; t < 200; ++t) {
    HourScores s{};
    for (auto& v : s) v = g(rng);
    const auto d = model_distribution(s);
    double sum = 0.0;
    for (double v : d) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Distributions, DayPartTags) {
  const std::vector<DayPart> night = {DayPart::kNight};
  const auto n = *tag_distribution(night);
  for (int h = 0; h < 24; ++h) {
    EXPECT_DOUBLE_EQ(n[h], (h >= 21 || h <= 5) ? 1.0 / 9.0 : 0.0) << h;
  }
  const std::vector<DayPart> two = {DayPart::kMorning, DayPart::kEvening, DayPart::kMorning};
  const auto m = *tag_distribution(two);
  EXPECT_DOUBLE_EQ(m[6], 0.1);
  EXPECT_DOUBLE_EQ(m[20], 0.1);
  EXPECT_EQ(m[12], 0.0);
  EXPECT_FALSE(tag_distribution({}).has_value());
  EXPECT_EQ(daypart_hours(DayPart::kAfternoon), (std::vector<int>{12, 13, 14, 15, 16}));
}

TEST(Distributions, ForwardFill) {
  const auto a = one_hot(4);
  const auto b = one_hot(9);
  const auto filled = forward_fill({std::nullopt, a, std::nullopt, b, std::nullopt});
  EXPECT_EQ(filled[0], uniform_distribution());
  EXPECT_EQ(filled[1], a);
  EXPECT_EQ(filled[2], a);
  EXPECT_EQ(filled[3], b);
  EXPECT_EQ(filled[4], b);
  const auto merged = merge_distributions(a, uniform_distribution());
  EXPECT_DOUBLE_EQ(merged[4], 0.5 + 0.5 / 24.0);
}

TEST(BookWindows, FixedSizeWithShortTail) {
  const auto w = book_windows(16, 7);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[2].first_sentence, 14u);
  EXPECT_EQ(w[2].last_sentence, 15u);
  EXPECT_THROW(book_windows(0, 7), Error);
  EXPECT_THROW(book_windows(5, 0), Error);
}

TEST(Evaluation, NearestReferenceCounts) {
  const std::vector<int> pred = {12, 3, 22};
  const ReferenceTrack refs = {{}, {5, 1}, {1}};
  EXPECT_DOUBLE_EQ(evaluate_track(pred, refs), (2.0 + 3.0) / 2.0);
  EXPECT_THROW(evaluate_track(pred, ReferenceTrack(3)), Error);
  EXPECT_THROW(evaluate_track(pred, ReferenceTrack(2)), Error);
}

TEST(Evaluation, PseudoTruth) {
  const Document d = make_doc(
      "At noon they ate. Bee. Cee. Dee. Ee. Ef. Gee. Aitch. Tea at 3 p.m. was late. Jay. At noon again.");
  const auto truth = build_pseudo_truth(d, extract(d), 7);
  ASSERT_EQ(truth.track.size(), 2u);
  EXPECT_EQ(truth.track[0], std::vector<int>{12});
  EXPECT_EQ(truth.track[1], (std::vector<int>{12, 15}));
  EXPECT_EQ(truth.references, 3u);
  EXPECT_TRUE(truth.eligible);

  const Document dull = make_doc("At noon. At midnight. At noon.");
  EXPECT_FALSE(build_pseudo_truth(dull, extract(dull)).eligible);
  const Document single = make_doc("Tea at 3 p.m. was late.");
  EXPECT_FALSE(build_pseudo_truth(single, extract(single)).eligible);
}

TEST(Evaluation, BookDistributionsMergeTags) {
  const Document d = make_doc("Ay. Bee. Cee. Dee. Ee. Ef. Gee. The morning was grey. Eye. Jay.");
  const auto p = book_distributions(d, extract(d), ConstantHourScorer(12), 7);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0][12], 0.5 / 3.0 + 0.5 / 24.0);
  EXPECT_DOUBLE_EQ(p[1][12], 0.5 / 3.0);
  EXPECT_DOUBLE_EQ(p[1][7], 0.5 / 6.0);
  EXPECT_DOUBLE_EQ(p[1][13], 0.0 + 0.5 / 3.0);
}
