// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any
// criterion fails.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "pipeline_support.hpp"
#include "support.hpp"
#include "synthetic.hpp"
#include "timeflow/timeflow.hpp"

using namespace timeflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << name << "  " << o.detail
            << std::endl;
}

template <typename... Args>
std::string str(const Args&... args) {
  std::ostringstream s;
  s.precision(6);
  (s << ... << args);
  return s.str();
}

// Best objective over every cut of p into k runs; run sums added in window
// order.
double exhaustive(const std::vector<HourDistribution>& p, std::size_t k) {
  const std::size_t n = p.size();
  double best = -1.0;
  std::vector<std::size_t> starts = {0};
  std::function<void()> rec = [&] {
    if (starts.size() == k) {
      double total = 0.0;
      for (std::size_t s = 0; s < k; ++s) {
        const std::size_t end = s + 1 < k ? starts[s + 1] : n;
        double seg_best = -1.0;
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
    // Leave at least one window for each start still to place.
    for (std::size_t b = starts.back() + 1; b + (k - starts.size()) <= n; ++b) {
      starts.push_back(b);
      rec();
      starts.pop_back();
    }
  };
  rec();
  return best;
}

Outcome dp_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(4, n);
    std::vector<HourDistribution> p(n);
    for (auto& d : p) {
      double sum = 0.0;
      for (auto& v : d) sum += (v = u(rng));
      for (auto& v : d) v /= sum;
    }
    if (dp_partition(p, k).objective != exhaustive(p, k)) ++mismatches;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {mismatches == 0 && secs < 10.0,
          str("200 instances, ", mismatches, " mismatches, ", secs, " s")};
}

Outcome dp_dominance() {
  testing::TempDir tmp("accept2");
  const auto seg = testing::run_all(testing::bundled_config(tmp.path() / "out"));
  double dp = 0.0, mh = 0.0, noon = 0.0;
  std::size_t books = 0;
  for (const auto& b : seg.books) {
    if (!b.truth.eligible) continue;
    dp += *b.dp_error;
    mh += *b.max_hour_error;
    noon += *b.noon_error;
    ++books;
  }
  if (books == 0) return {false, "no evaluated books"};
  dp /= static_cast<double>(books);
  mh /= static_cast<double>(books);
  noon /= static_cast<double>(books);
  return {dp <= mh && mh <= noon && noon - dp >= 1.5,
          str(books, " books; mean error DP ", dp, ", MaxHour ", mh, ", Noon ", noon)};
}

Outcome circular_metric() {
  int violations = 0;
  for (int a = 0; a < 24; ++a) {
    for (int b = 0; b < 24; ++b) {
      const int e = hour_error(a, b);
      if (e != hour_error(b, a) || e < 0 || e > 12 || (e == 0) != (a == b)) ++violations;
      for (int c = 0; c < 24; ++c) {
        if (e > hour_error(a, c) + hour_error(c, b)) ++violations;
      }
    }
  }
  return {violations == 0 && hour_error(0, 12) == 12,
          str(violations, " violations over 24x24(x24); hour_error(0,12)=", hour_error(0, 12))};
}

Outcome binomial_score() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const auto exact = [](std::int64_t k, std::int64_t n, double p) {
    const Big bp(p);
    const Big bq = Big(1) - bp;
    Big term = boost::multiprecision::pow(bq, static_cast<int>(n));
    Big sum = term;
    for (std::int64_t i = 1; i <= k; ++i) {
      term *= Big(n - i + 1) / Big(i) * bp / bq;
      sum += term;
    }
    return sum;
  };
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> up(1e-4, 0.9999);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 1000);
    const std::int64_t k = static_cast<std::int64_t>(rng() % (n + 1));
    const double p = up(rng);
    const double got = binomial::cdf(k, n, p);
    const Big want = exact(k, n, p);
    double rel;
    if (static_cast<double>(want) >= DBL_MIN) {
      rel = std::fabs(got - static_cast<double>(want)) / static_cast<double>(want);
    } else {
      // Not representable as a normal double: compare logarithms.
      const double lw = static_cast<double>(boost::multiprecision::log(want));
      rel = std::fabs(binomial::log_cdf(k, n, p) - lw) / std::fabs(lw);
    }
    worst = std::max(worst, rel);
  }
  bool monotone = true;
  bool full = true;
  for (std::int64_t n : {1, 10, 100, 1000}) {
    for (double p : {0.01, 0.5, 0.97}) {
      double prev = 0.0;
      for (std::int64_t k = 0; k <= n; ++k) {
        const double c = binomial::cdf(k, n, p);
        monotone = monotone && c >= prev;
        prev = c;
      }
      full = full && binomial::cdf(n, n, p) == 1.0;
    }
  }
  return {worst <= 1e-9 && monotone && full,
          str("worst relative error ", worst, "; monotone ", monotone, "; cdf(N,N)=1 ", full)};
}

Outcome planted_words() {
  const auto c = testing::planted_corpus();
  const auto bags = build_hour_bags(c.documents, c.expressions);
  int hits = 0;
  for (int h = 0; h < 24; ++h) {
    if (top_hours(testing::planted_word(h), bags, 3).front() == h) ++hits;
  }
  return {hits == 24, str(hits, "/24 planted words rank their hour first")};
}

Outcome meridiem_learning() {
  const auto sep = testing::meridiem_data(7, 50, 1.0, 0.0);
  const double sep_acc = evaluate_meridiem(train_meridiem(sep.train), sep.test).micro.accuracy;
  const auto noisy = testing::meridiem_data(11, 80, 0.8, 0.1);
  const double nb = evaluate_meridiem(train_meridiem(noisy.train), noisy.test).micro.accuracy;
  const double base =
      evaluate_meridiem(majority_baseline(noisy.train), noisy.test).micro.accuracy;
  return {sep_acc == 1.0 && nb - base >= 0.15,
          str("separable accuracy ", sep_acc, "; noisy NB ", nb, " vs majority ", base)};
}

Outcome constant_noon() {
  const auto ws = testing::uniform_hour_windows(5);
  const double e = evaluate_hour(ConstantHourScorer(12), ws).mean_error;
  return {std::fabs(e - 6.0) <= 0.1, str("mean error ", e, " over ", ws.size(), " windows")};
}

// Expected classifier tokens of sentences [first, last], rebuilt position by
// position; counts expression tokens that would leak through unmasked.
std::size_t leaks(const Document& doc, const std::vector<TimeExpression>& exprs,
                  const SentenceWindow& w) {
  const auto refs = doc.sentence_refs();
  std::vector<std::string> expected;
  for (std::size_t g = w.first_sentence; g <= w.last_sentence; ++g) {
    const auto& toks = doc.sentence(refs[g]).tokens;
    for (std::size_t t = 0; t < toks.size(); ++t) {
      bool covered = false;
      for (const auto& e : exprs) {
        covered = covered || (e.sentence_ref() == refs[g] && t >= e.span_start && t < e.span_end);
      }
      if (covered) {
        expected.emplace_back(kMaskToken);
      } else if (is_word_token(toks[t].text)) {
        expected.push_back(text::to_lower(toks[t].text));
      }
    }
  }
  if (expected.size() != w.tokens.size()) return expected.size() + w.tokens.size();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected[i] == kMaskToken && w.tokens[i] != kMaskToken) ++bad;
    if (expected[i] != w.tokens[i]) ++bad;
  }
  return bad;
}

Outcome masking() {
  testing::TempDir tmp("accept8");
  const auto result = run_extract(testing::bundled_config(tmp.path() / "out"));
  std::size_t windows = 0;
  std::size_t bad = 0;
  std::size_t masked = 0;
  for (const auto& doc : result.corpus.documents) {
    std::vector<TimeExpression> exprs;
    for (const auto& e : result.corpus.expressions) {
      if (e.doc_id == doc.meta.id) exprs.push_back(e);
    }
    auto all = make_windows(doc, exprs, 3);
    const auto book = book_window_inputs(doc, exprs, book_windows(doc, 7));
    all.insert(all.end(), book.begin(), book.end());
    for (const auto& w : all) {
      ++windows;
      bad += leaks(doc, exprs, w);
      masked += static_cast<std::size_t>(
          std::count(w.tokens.begin(), w.tokens.end(), std::string(kMaskToken)));
    }
  }
  return {bad == 0 && windows > 0,
          str(windows, " windows scanned, ", masked, " masked tokens, ", bad, " unmasked")};
}

Outcome tag_supports() {
  const std::vector<std::pair<DayPart, std::vector<int>>> expected = {
      {DayPart::kMorning, {6, 7, 8, 9, 10, 11}},
      {DayPart::kAfternoon, {12, 13, 14, 15, 16}},
      {DayPart::kEvening, {17, 18, 19, 20}},
      {DayPart::kNight, {21, 22, 23, 0, 1, 2, 3, 4, 5}}};
  bool ok = true;
  for (const auto& [part, hours] : expected) {
    const std::vector<DayPart> tags = {part};
    const auto d = *tag_distribution(tags);
    for (int h = 0; h < 24; ++h) {
      const bool in = std::find(hours.begin(), hours.end(), h) != hours.end();
      // Uniform weight 1/|support|: weight * |support| must be exactly 1.
      const double want = in ? 1.0 / static_cast<double>(hours.size()) : 0.0;
      ok = ok && d[h] == want;
      if (in) ok = ok && d[h] * static_cast<double>(hours.size()) == 1.0;
    }
  }
  return {ok, "morning 6-11, afternoon 12-16, evening 17-20, night 21-5"};
}

Outcome determinism() {
  testing::TempDir a("accept10a");
  testing::TempDir b("accept10b");
  testing::run_all(testing::bundled_config(a.path() / "out", 1));
  testing::run_all(testing::bundled_config(b.path() / "out", 4));
  const auto sa = testing::snapshot(a.path() / "out");
  const auto sb = testing::snapshot(b.path() / "out");
  std::size_t differing = 0;
  for (const auto& [name, content] : sa) {
    if (!sb.count(name) || sb.at(name) != content) ++differing;
  }
  return {sa.size() == sb.size() && differing == 0 && !sa.empty(),
          str(sa.size(), " artifacts compared (1 vs 4 threads), ", differing, " differ")};
}

Outcome trends() {
  testing::TempDir tmp("accept11");
  const auto config = testing::bundled_config(tmp.path() / "out");
  testing::run_all(config);
  auto tracks = load_tracks(config);
  const auto rows = cohort_shares(tracks);
  double worst = 0.0;
  for (const auto& r : rows) {
    double sum = 0.0;
    for (double s : r.shares) sum += s;
    worst = std::max(worst, std::fabs(sum - 1.0));
  }
  // Every book of the earliest populated cohort moved to 23:00.
  const CohortScheme scheme;
  const auto target = scheme.index(tracks.front().birth_year);
  for (auto& t : tracks) {
    if (scheme.index(t.birth_year) == target) std::fill(t.hours.begin(), t.hours.end(), 23);
  }
  double late = -1.0;
  for (const auto& r : cohort_shares(tracks)) {
    if (r.cohort.label == scheme.cohorts()[*target].label) late = r.late_night;
  }
  return {worst <= 1e-12 && late == 1.0,
          str(rows.size(), " cohorts, max |sum-1| ", worst, "; all-23 cohort late-night ", late)};
}

}  // namespace

int main() {
  report(1, "dp-matches-exhaustive-search", dp_oracle);
  report(2, "dp-beats-baselines-on-bundled-corpus", dp_dominance);
  report(3, "circular-hour-metric", circular_metric);
  report(4, "binomial-score-exact", binomial_score);
  report(5, "planted-word-top-hour", planted_words);
  report(6, "ampm-learning", meridiem_learning);
  report(7, "constant-noon-error-six", constant_noon);
  report(8, "masking-complete", masking);
  report(9, "daypart-tag-supports", tag_supports);
  report(10, "end-to-end-determinism", determinism);
  report(11, "cohort-shares", trends);
  std::cout << (failures == 0 ? "all criteria passed" : str(failures, " criteria failed"))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
