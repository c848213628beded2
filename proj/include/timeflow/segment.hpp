#pragma once

// Whole-book time flow: per-window hour distributions, day-part priors, and
// the optimal k-segment partition.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "timeflow/association.hpp"
#include "timeflow/classify.hpp"
#include "timeflow/error.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/timex.hpp"

namespace timeflow {

using HourDistribution = std::array<double, kHours>;

inline HourDistribution uniform_distribution() {
  HourDistribution d;
  d.fill(1.0 / kHours);
  return d;
}

inline HourDistribution normalized(HourDistribution d) {
  double sum = 0.0;
  for (double v : d) sum += v;
  if (!(sum > 0.0) || !std::isfinite(sum)) return uniform_distribution();
  for (auto& v : d) v /= sum;
  return d;
}

// ---------------------------------------------------------------------------
// Book windows

struct BookWindow {
  std::size_t first_sentence = 0;  // global sentence index, inclusive
  std::size_t last_sentence = 0;   // inclusive
};

inline std::vector<BookWindow> book_windows(std::size_t sentence_count,
                                            std::size_t window_sentences = 7) {
  if (sentence_count == 0) throw Error(ErrorCode::kEmptyInput, "no sentences");
  if (window_sentences == 0) {
    throw Error(ErrorCode::kInvalidArgument, "window size must be positive");
  }
  std::vector<BookWindow> out;
  for (std::size_t s = 0; s < sentence_count; s += window_sentences) {
    out.push_back({s, std::min(sentence_count, s + window_sentences) - 1});
  }
  return out;
}

inline std::vector<BookWindow> book_windows(const Document& doc,
                                            std::size_t window_sentences = 7) {
  return book_windows(doc.sentence_count(), window_sentences);
}

// Masked classifier input for each book window. Only the index and tokens
// are meaningful; book windows have no anchor.
inline std::vector<SentenceWindow> book_window_inputs(
    const Document& doc, const std::vector<TimeExpression>& expressions,
    const std::vector<BookWindow>& windows) {
  const auto refs = doc.sentence_refs();
  const auto masked = masked_positions(doc, expressions);
  std::vector<SentenceWindow> out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    SentenceWindow w;
    w.anchor.doc_id = doc.meta.id;
    w.index = i;
    w.first_sentence = windows[i].first_sentence;
    w.last_sentence = windows[i].last_sentence;
    w.tokens = masked_tokens(doc, refs, masked, w.first_sentence, w.last_sentence);
    out.push_back(std::move(w));
  }
  return out;
}

// Index of the book window holding each expression.
inline std::vector<std::size_t> window_of_expressions(
    const Document& doc, const std::vector<TimeExpression>& expressions,
    std::size_t window_sentences) {
  const auto positions = sentence_positions(doc);
  std::vector<std::size_t> out;
  for (const auto& e : expressions) {
    out.push_back(positions.at(e.sentence_ref()) / window_sentences);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distributions

// Min-max scaling, circular 3-tap mean, renormalization. Constant input maps
// to the uniform distribution.
inline HourDistribution model_distribution(const HourScores& scores) {
  for (double v : scores) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "scores must be finite");
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return uniform_distribution();
  HourDistribution y{};
  for (int h = 0; h < kHours; ++h) y[h] = (scores[h] - lo) / (hi - lo);
  HourDistribution smooth{};
  for (int h = 0; h < kHours; ++h) {
    smooth[h] = (y[(h + kHours - 1) % kHours] + y[h] + y[(h + 1) % kHours]) / 3.0;
  }
  return normalized(smooth);
}

// Hours covered by a day part: morning 6-11, afternoon 12-16, evening 17-20,
// night 21-5.
inline std::vector<int> daypart_hours(DayPart part) {
  const auto range = [](int lo, int hi) {
    std::vector<int> out;
    for (int h = lo; h != (hi + 1) % kHours; h = (h + 1) % kHours) out.push_back(h);
    return out;
  };
  switch (part) {
    case DayPart::kMorning: return range(6, 11);
    case DayPart::kAfternoon: return range(12, 16);
    case DayPart::kEvening: return range(17, 20);
    case DayPart::kNight: return range(21, 5);
  }
  return {};
}

// Uniform over the union of the tags' hour ranges; nullopt without tags.
inline std::optional<HourDistribution> tag_distribution(
    std::span<const DayPart> tags) {
  if (tags.empty()) return std::nullopt;
  std::set<int> hours;
  for (DayPart t : tags) {
    for (int h : daypart_hours(t)) hours.insert(h);
  }
  HourDistribution d{};
  for (int h : hours) d[h] = 1.0 / static_cast<double>(hours.size());
  return d;
}

// Untagged windows take the last preceding tag distribution; windows before
// the first tag are uniform.
inline std::vector<HourDistribution> forward_fill(
    const std::vector<std::optional<HourDistribution>>& tags) {
  std::vector<HourDistribution> out;
  out.reserve(tags.size());
  HourDistribution current = uniform_distribution();
  for (const auto& t : tags) {
    if (t) current = *t;
    out.push_back(current);
  }
  return out;
}

inline HourDistribution merge_distributions(const HourDistribution& model,
                                            const HourDistribution& tag) {
  HourDistribution d{};
  for (int h = 0; h < kHours; ++h) d[h] = 0.5 * (model[h] + tag[h]);
  return normalized(d);
}

// ---------------------------------------------------------------------------
// Partitioning

struct Segmentation {
  std::vector<std::size_t> starts;  // 0-based window index of each segment
  std::vector<int> hours;
  double objective = 0.0;

  std::size_t k() const { return starts.size(); }
  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

namespace segment_detail {

// prefix[j][h] = sum of p[0..j-1][h]
class PrefixSums {
 public:
  explicit PrefixSums(std::span<const HourDistribution> p)
      : prefix_(p.size() + 1) {
    prefix_[0].fill(0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      for (int h = 0; h < kHours; ++h) prefix_[j + 1][h] = prefix_[j][h] + p[j][h];
    }
  }

  double sum(std::size_t begin, std::size_t end, int h) const {
    return prefix_[end][h] - prefix_[begin][h];
  }

  // Best hour for windows [begin, end); ties go to the lower hour.
  std::pair<int, double> best(std::size_t begin, std::size_t end) const {
    int arg = 0;
    double val = sum(begin, end, 0);
    for (int h = 1; h < kHours; ++h) {
      const double v = sum(begin, end, h);
      if (v > val) {
        val = v;
        arg = h;
      }
    }
    return {arg, val};
  }

 private:
  std::vector<HourDistribution> prefix_;
};

inline void check_k(std::size_t n, std::size_t k) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no windows");
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "k must be in [1, " + std::to_string(n) + "]");
  }
}

// Objective recomputed from scratch: each segment's summed mass at its hour,
// added in window order.
inline double objective(std::span<const HourDistribution> p,
                        const std::vector<std::size_t>& starts,
                        const std::vector<int>& hours) {
  double total = 0.0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const std::size_t end = s + 1 < starts.size() ? starts[s + 1] : p.size();
    double seg = 0.0;
    for (std::size_t j = starts[s]; j < end; ++j) seg += p[j][hours[s]];
    total += seg;
  }
  return total;
}

}  // namespace segment_detail

// Exactly k contiguous non-empty segments maximizing the summed mass of each
// segment's best hour. best[m][i] is the optimum for the first i windows in
// m segments; the last segment of that prefix starts at j:
//   best[m][i] = max_j best[m-1][j] + max_h sum_{t=j}^{i-1} p[t][h]
// Ties prefer the later j, then the lower hour.
inline Segmentation dp_partition(std::span<const HourDistribution> p,
                                 std::size_t k) {
  const std::size_t n = p.size();
  segment_detail::check_k(n, k);
  const segment_detail::PrefixSums sums(p);
  constexpr double kUnset = -1.0;
  std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 1, kUnset));
  std::vector<std::vector<std::size_t>> from(k + 1, std::vector<std::size_t>(n + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t m = 1; m <= k; ++m) {
    // Prefix length i needs at least m windows and must leave k-m for later.
    for (std::size_t i = m; i + (k - m) <= n; ++i) {
      for (std::size_t j = m - 1; j < i; ++j) {
        if (best[m - 1][j] < 0.0) continue;
        const double cand = best[m - 1][j] + sums.best(j, i).second;
        if (cand >= best[m][i]) {
          best[m][i] = cand;
          from[m][i] = j;
        }
      }
    }
  }
  Segmentation seg;
  seg.starts.resize(k);
  seg.hours.resize(k);
  std::size_t i = n;
  for (std::size_t m = k; m >= 1; --m) {
    const std::size_t j = from[m][i];
    seg.starts[m - 1] = j;
    seg.hours[m - 1] = sums.best(j, i).first;
    i = j;
  }
  seg.objective = segment_detail::objective(p, seg.starts, seg.hours);
  return seg;
}

// k equal-size segments, the first n mod k one window longer, each taking its
// best hour.
inline Segmentation max_hour_baseline(std::span<const HourDistribution> p,
                                      std::size_t k) {
  const std::size_t n = p.size();
  segment_detail::check_k(n, k);
  const segment_detail::PrefixSums sums(p);
  Segmentation seg;
  std::size_t start = 0;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t size = n / k + (s < n % k ? 1 : 0);
    seg.starts.push_back(start);
    seg.hours.push_back(sums.best(start, start + size).first);
    start += size;
  }
  seg.objective = segment_detail::objective(p, seg.starts, seg.hours);
  return seg;
}

inline Segmentation noon_baseline(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no windows");
  return {{0}, {12}, 0.0};
}

inline Segmentation noon_baseline(std::span<const HourDistribution> p) {
  Segmentation seg = noon_baseline(p.size());
  seg.objective = segment_detail::objective(p, seg.starts, seg.hours);
  return seg;
}

// max(1, round(n / ratio)) with halves rounded up.
inline std::size_t choose_k(std::size_t n, double ratio = 8.0) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no windows");
  if (!(ratio > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ratio must be > 0");
  const double k = std::floor(static_cast<double>(n) / ratio + 0.5);
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n);
}

inline std::vector<int> hour_track(const Segmentation& seg, std::size_t n) {
  if (seg.starts.empty() || seg.starts.front() != 0 ||
      seg.starts.size() != seg.hours.size()) {
    throw Error(ErrorCode::kInvalidArgument, "malformed segmentation");
  }
  std::vector<int> track;
  track.reserve(n);
  for (std::size_t s = 0; s < seg.k(); ++s) {
    const std::size_t end = s + 1 < seg.k() ? seg.starts[s + 1] : n;
    if (end <= seg.starts[s] || end > n) {
      throw Error(ErrorCode::kInvalidArgument, "malformed segmentation");
    }
    track.insert(track.end(), end - seg.starts[s], seg.hours[s]);
  }
  return track;
}

// Per-window segment number for a segmentation over n windows.
inline std::vector<std::size_t> segment_ids(const Segmentation& seg,
                                            std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t s = 0; s < seg.k(); ++s) {
    const std::size_t end = s + 1 < seg.k() ? seg.starts[s + 1] : n;
    for (std::size_t j = seg.starts[s]; j < end; ++j) out[j] = s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

// One or more reference hours per window; empty entries are unannotated.
using ReferenceTrack = std::vector<std::vector<int>>;

// Mean over annotated windows of the smallest circular error against any of
// that window's reference hours.
inline double evaluate_track(std::span<const int> predicted,
                             const ReferenceTrack& references) {
  if (references.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch, "reference and prediction lengths differ");
  }
  double total = 0.0;
  std::size_t annotated = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (references[i].empty()) continue;
    int err = 12;
    for (int r : references[i]) err = std::min(err, hour_error(predicted[i], r));
    total += err;
    ++annotated;
  }
  if (annotated == 0) throw Error(ErrorCode::kEmptyReference, "no annotated windows");
  return total / static_cast<double>(annotated);
}

struct PseudoTruth {
  ReferenceTrack track;
  bool eligible = false;
  std::size_t references = 0;
};

// Book windows holding resolved clock references are annotated with their
// hours. A book qualifies with at least two references, one of them neither
// noon nor midnight.
inline PseudoTruth build_pseudo_truth(const Document& doc,
                                      const std::vector<TimeExpression>& expressions,
                                      std::size_t window_sentences = 7) {
  PseudoTruth out;
  out.track.assign(book_windows(doc, window_sentences).size(), {});
  const auto positions = sentence_positions(doc);
  bool informative = false;
  for (const auto& e : expressions) {
    if (e.doc_id != doc.meta.id || !e.is_resolved()) continue;
    const std::size_t w = positions.at(e.sentence_ref()) / window_sentences;
    auto& refs = out.track[w];
    if (std::find(refs.begin(), refs.end(), *e.hour24) == refs.end()) {
      refs.push_back(*e.hour24);
      std::sort(refs.begin(), refs.end());
    }
    ++out.references;
    if (*e.hour24 != 0 && *e.hour24 != 12) informative = true;
  }
  out.eligible = out.references >= 2 && informative;
  return out;
}

// Merged per-window distributions for one book: model scores (min-max,
// smoothed) averaged with forward-filled day-part priors.
inline std::vector<HourDistribution> book_distributions(
    const Document& doc, const std::vector<TimeExpression>& expressions,
    const HourScorer& scorer, std::size_t window_sentences = 7) {
  const auto windows = book_windows(doc, window_sentences);
  const auto inputs = book_window_inputs(doc, expressions, windows);
  std::vector<std::vector<DayPart>> tags(windows.size());
  const auto positions = sentence_positions(doc);
  for (const auto& e : expressions) {
    if (e.doc_id != doc.meta.id || !e.daypart) continue;
    tags[positions.at(e.sentence_ref()) / window_sentences].push_back(*e.daypart);
  }
  std::vector<std::optional<HourDistribution>> tag_dists;
  for (const auto& t : tags) tag_dists.push_back(tag_distribution(t));
  const auto filled = forward_fill(tag_dists);
  std::vector<HourDistribution> out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out.push_back(
        merge_distributions(model_distribution(scorer.scores(inputs[i])), filled[i]));
  }
  return out;
}

}  // namespace timeflow
