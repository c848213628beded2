#pragma once

// Windowed classifiers: twelve binary AM/PM models (one per 12-hour value,
// each trained on its neighbors too), a majority-class baseline, and a
// 24-class hour-of-day model, plus the metrics used to evaluate them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "timeflow/association.hpp"
#include "timeflow/error.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/naive_bayes.hpp"
#include "timeflow/text.hpp"
#include "timeflow/timex.hpp"

namespace timeflow {

// Replaces every token of every time phrase. Brackets are always split off
// by the tokenizer, so this string never occurs as a natural token.
inline constexpr std::string_view kMaskToken = "[TIME]";

struct WindowKey {
  std::string doc_id;
  std::size_t paragraph = 0;
  std::size_t sentence = 0;
  std::size_t span_start = 0;

  friend auto operator<=>(const WindowKey&, const WindowKey&) = default;
};

struct SentenceWindow {
  WindowKey anchor;
  std::size_t index = 0;           // position among the document's windows
  std::size_t first_sentence = 0;  // global sentence indices, inclusive
  std::size_t last_sentence = 0;
  std::vector<std::string> tokens;  // lowercased words and mask tokens
  int anchor_hour12 = 0;
  std::optional<Meridiem> meridiem;  // label, when resolved
  std::optional<int> hour24;         // label, when resolved
};

// Lowercased word tokens of sentences [first, last] with every token covered
// by an expression replaced by the mask token.
inline std::vector<std::string> masked_tokens(
    const Document& doc, const std::vector<SentenceRef>& refs,
    const std::set<std::pair<std::size_t, std::size_t>>& masked,
    std::size_t first, std::size_t last) {
  std::vector<std::string> out;
  for (std::size_t g = first; g <= last; ++g) {
    const auto& toks = doc.sentence(refs[g]).tokens;
    for (std::size_t t = 0; t < toks.size(); ++t) {
      if (masked.count({g, t}) > 0) {
        out.emplace_back(kMaskToken);
      } else if (is_word_token(toks[t].text)) {
        out.push_back(text::to_lower(toks[t].text));
      }
    }
  }
  return out;
}

// (global sentence, token) positions covered by the document's expressions.
inline std::set<std::pair<std::size_t, std::size_t>> masked_positions(
    const Document& doc, const std::vector<TimeExpression>& expressions) {
  const auto positions = sentence_positions(doc);
  std::set<std::pair<std::size_t, std::size_t>> masked;
  for (const auto& e : expressions) {
    if (e.doc_id != doc.meta.id) continue;
    const auto it = positions.find(e.sentence_ref());
    if (it == positions.end()) {
      throw Error(ErrorCode::kInvalidArgument, "expression outside document");
    }
    for (std::size_t t = e.span_start; t < e.span_end; ++t) {
      masked.emplace(it->second, t);
    }
  }
  return masked;
}

// One window per clock expression of `doc`: the anchor sentence and up to
// `context` sentences on either side. Day-part tags are masked but do not
// anchor windows.
inline std::vector<SentenceWindow> make_windows(
    const Document& doc, const std::vector<TimeExpression>& expressions,
    int context = 3) {
  const auto refs = doc.sentence_refs();
  const auto positions = sentence_positions(doc);
  const auto masked = masked_positions(doc, expressions);
  std::vector<SentenceWindow> out;
  for (const auto& e : expressions) {
    if (e.doc_id != doc.meta.id || !e.is_clock()) continue;
    const std::size_t g = positions.at(e.sentence_ref());
    SentenceWindow w;
    w.anchor = {e.doc_id, e.paragraph, e.sentence, e.span_start};
    w.index = out.size();
    w.first_sentence = g >= static_cast<std::size_t>(context) ? g - context : 0;
    w.last_sentence = std::min(refs.size() - 1, g + context);
    w.tokens = masked_tokens(doc, refs, masked, w.first_sentence, w.last_sentence);
    w.anchor_hour12 = e.hour12;
    if (e.is_resolved()) {
      w.meridiem = e.meridiem;
      w.hour24 = e.hour24;
    }
    out.push_back(std::move(w));
  }
  return out;
}

namespace classify_detail {

inline std::vector<std::string> features(const SentenceWindow& w) {
  std::vector<std::string> out;
  out.reserve(w.tokens.size());
  for (const auto& t : w.tokens) {
    if (t != kMaskToken) out.push_back(t);
  }
  return out;
}

inline void check_disjoint(const std::set<WindowKey>& training,
                           std::span<const SentenceWindow> test) {
  if (test.empty()) throw Error(ErrorCode::kEmptyTestSet, "no test windows");
  for (const auto& w : test) {
    if (training.count(w.anchor) > 0) {
      throw Error(ErrorCode::kTrainTestOverlap,
                  "test window " + w.anchor.doc_id + " seen in training");
    }
  }
}

}  // namespace classify_detail

// ---------------------------------------------------------------------------
// AM/PM

class MeridiemClassifier {
 public:
  virtual ~MeridiemClassifier() = default;
  // Uses the window's anchor_hour12 to pick the per-hour model.
  virtual Meridiem predict(const SentenceWindow& window) const = 0;
  virtual const std::set<WindowKey>& training_keys() const = 0;
};

class MeridiemPredictor final : public MeridiemClassifier {
 public:
  struct Scores {
    double am = 0.0;
    double pm = 0.0;
  };

  MeridiemPredictor() = default;
  MeridiemPredictor(std::array<std::optional<NaiveBayes>, 12> models,
                    double alpha, std::uint64_t seed, std::set<WindowKey> keys)
      : models_(std::move(models)),
        alpha_(alpha),
        seed_(seed),
        keys_(std::move(keys)) {}

  bool has_model(int hour12) const { return models_.at(hour12).has_value(); }
  const NaiveBayes& model(int hour12) const {
    if (!has_model(hour12)) {
      throw Error(ErrorCode::kNoTrainingData,
                  "no AM/PM model for hour " + std::to_string(hour12));
    }
    return *models_[hour12];
  }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }

  Scores scores(const SentenceWindow& window, int hour12) const {
    const auto s = model(hour12).joint_log_scores(classify_detail::features(window));
    return {s[0], s[1]};
  }

  // Ties go to pm.
  Meridiem predict(const SentenceWindow& window, int hour12) const {
    const Scores s = scores(window, hour12);
    return s.am > s.pm ? Meridiem::kAm : Meridiem::kPm;
  }

  Meridiem predict(const SentenceWindow& window) const override {
    return predict(window, window.anchor_hour12);
  }

  const std::set<WindowKey>& training_keys() const override { return keys_; }

  friend bool operator==(const MeridiemPredictor& a, const MeridiemPredictor& b) {
    return a.models_ == b.models_ && a.alpha_ == b.alpha_ && a.seed_ == b.seed_ &&
           a.keys_ == b.keys_;
  }

 private:
  std::array<std::optional<NaiveBayes>, 12> models_{};
  double alpha_ = 1.0;
  std::uint64_t seed_ = 0;
  std::set<WindowKey> keys_;
};

// Model h learns from windows labeled h-1, h and h+1 (mod 12).
inline MeridiemPredictor train_meridiem(std::span<const SentenceWindow> windows,
                                        double alpha = 1.0,
                                        std::uint64_t seed = 0) {
  std::array<std::vector<LabeledTokens>, 12> per_hour;
  std::set<WindowKey> keys;
  for (const auto& w : windows) {
    if (!w.meridiem || *w.meridiem == Meridiem::kUnknown) continue;
    keys.insert(w.anchor);
    const LabeledTokens ex{*w.meridiem == Meridiem::kPm ? 1u : 0u,
                           classify_detail::features(w)};
    for (int d = -1; d <= 1; ++d) {
      per_hour[(w.anchor_hour12 + d + 12) % 12].push_back(ex);
    }
  }
  if (keys.empty()) {
    throw Error(ErrorCode::kNoTrainingData, "no labeled AM/PM windows");
  }
  std::array<std::optional<NaiveBayes>, 12> models;
  for (int h = 0; h < 12; ++h) {
    if (per_hour[h].empty()) continue;
    models[h] = NaiveBayes::train({"am", "pm"}, alpha, per_hour[h]);
  }
  return MeridiemPredictor(std::move(models), alpha, seed, std::move(keys));
}

class MajorityBaseline final : public MeridiemClassifier {
 public:
  explicit MajorityBaseline(std::array<std::optional<Meridiem>, 12> majority,
                            std::set<WindowKey> keys)
      : majority_(majority), keys_(std::move(keys)) {}

  bool has(int hour12) const { return majority_.at(hour12).has_value(); }

  Meridiem predict(const SentenceWindow& window) const override {
    const auto& m = majority_.at(window.anchor_hour12);
    if (!m) {
      throw Error(ErrorCode::kNoTrainingData,
                  "no baseline for hour " + std::to_string(window.anchor_hour12));
    }
    return *m;
  }

  const std::set<WindowKey>& training_keys() const override { return keys_; }

 private:
  std::array<std::optional<Meridiem>, 12> majority_;
  std::set<WindowKey> keys_;
};

// Majority meridiem of the windows labeled with each hour; 50/50 gives pm.
inline MajorityBaseline majority_baseline(std::span<const SentenceWindow> windows) {
  std::array<std::array<long, 2>, 12> counts{};
  std::set<WindowKey> keys;
  for (const auto& w : windows) {
    if (!w.meridiem || *w.meridiem == Meridiem::kUnknown) continue;
    keys.insert(w.anchor);
    ++counts[w.anchor_hour12][*w.meridiem == Meridiem::kPm ? 1 : 0];
  }
  std::array<std::optional<Meridiem>, 12> majority;
  for (int h = 0; h < 12; ++h) {
    if (counts[h][0] + counts[h][1] == 0) continue;
    majority[h] = counts[h][0] > counts[h][1] ? Meridiem::kAm : Meridiem::kPm;
  }
  return MajorityBaseline(majority, std::move(keys));
}

// Fills hour24 on unlabeled windows from the classifier's AM/PM call.
// Windows whose hour has no model stay unlabeled. Returns how many were
// filled.
inline std::size_t impute_hours(std::vector<SentenceWindow>& windows,
                                const MeridiemPredictor& predictor) {
  std::size_t filled = 0;
  for (auto& w : windows) {
    if (w.hour24 || !predictor.has_model(w.anchor_hour12)) continue;
    const Meridiem m = predictor.predict(w);
    w.hour24 = w.anchor_hour12 + (m == Meridiem::kPm ? 12 : 0);
    ++filled;
  }
  return filled;
}

// ---------------------------------------------------------------------------
// Hour of day

using HourScores = std::array<double, kHours>;

class HourScorer {
 public:
  virtual ~HourScorer() = default;
  // Higher is more likely; always 24 finite values.
  virtual HourScores scores(const SentenceWindow& window) const = 0;
  virtual const std::set<WindowKey>& training_keys() const {
    static const std::set<WindowKey> kNone;
    return kNone;
  }
};

class HourPredictor final : public HourScorer {
 public:
  HourPredictor() = default;
  HourPredictor(NaiveBayes model, std::uint64_t seed, std::set<WindowKey> keys)
      : model_(std::move(model)), seed_(seed), keys_(std::move(keys)) {}

  const NaiveBayes& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

  // Hours without training windows score one below the lowest trained hour.
  HourScores scores(const SentenceWindow& window) const override {
    const auto s = model_.joint_log_scores(classify_detail::features(window));
    HourScores out{};
    double lowest = std::numeric_limits<double>::infinity();
    for (int h = 0; h < kHours; ++h) {
      out[h] = s[h];
      if (std::isfinite(s[h])) lowest = std::min(lowest, s[h]);
    }
    for (auto& v : out) {
      if (!std::isfinite(v)) v = lowest - 1.0;
    }
    return out;
  }

  const std::set<WindowKey>& training_keys() const override { return keys_; }

  friend bool operator==(const HourPredictor& a, const HourPredictor& b) {
    return a.model_ == b.model_ && a.seed_ == b.seed_ && a.keys_ == b.keys_;
  }

 private:
  NaiveBayes model_;
  std::uint64_t seed_ = 0;
  std::set<WindowKey> keys_;
};

inline std::vector<std::string> hour_class_names() {
  std::vector<std::string> out;
  for (int h = 0; h < kHours; ++h) out.push_back(std::to_string(h));
  return out;
}

inline HourPredictor train_hour(std::span<const SentenceWindow> windows,
                                double alpha = 1.0, std::uint64_t seed = 0) {
  std::vector<LabeledTokens> examples;
  std::set<WindowKey> keys;
  std::set<int> classes;
  for (const auto& w : windows) {
    if (!w.hour24) continue;
    if (*w.hour24 < 0 || *w.hour24 >= kHours) {
      throw Error(ErrorCode::kInvalidArgument, "hour label out of range");
    }
    examples.push_back({static_cast<std::size_t>(*w.hour24),
                        classify_detail::features(w)});
    keys.insert(w.anchor);
    classes.insert(*w.hour24);
  }
  if (classes.size() < 2) {
    throw Error(ErrorCode::kTooFewClasses,
                "hour model needs at least two distinct hours");
  }
  return HourPredictor(NaiveBayes::train(hour_class_names(), alpha, examples),
                       seed, std::move(keys));
}

inline HourScores predict_hour_scores(const HourScorer& scorer,
                                      const SentenceWindow& window) {
  return scorer.scores(window);
}

// Highest score; ties go to the lower hour.
inline int argmax_hour(const HourScores& scores) {
  int best = 0;
  for (int h = 1; h < kHours; ++h) {
    if (scores[h] > scores[best]) best = h;
  }
  return best;
}

// Distance on the 24-hour cycle.
inline int hour_error(int predicted, int truth) {
  if (predicted < 0 || predicted >= kHours || truth < 0 || truth >= kHours) {
    throw Error(ErrorCode::kInvalidArgument, "hours must be in [0,23]");
  }
  const int d = std::abs(predicted - truth);
  return std::min(d, kHours - d);
}

// Scores read from externally produced records: doc_id, window index, then
// 24 values, tab separated.
class ExternalHourScores final : public HourScorer {
 public:
  void add(const std::string& doc_id, std::size_t index, const HourScores& s) {
    for (double v : s) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite external score");
      }
    }
    table_[{doc_id, index}] = s;
  }

  bool contains(const std::string& doc_id, std::size_t index) const {
    return table_.count({doc_id, index}) > 0;
  }

  HourScores scores(const SentenceWindow& window) const override {
    const auto it = table_.find({window.anchor.doc_id, window.index});
    if (it == table_.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no external scores for " + window.anchor.doc_id + " window " +
                      std::to_string(window.index));
    }
    return it->second;
  }

  static ExternalHourScores parse(std::string_view content) {
    ExternalHourScores out;
    std::size_t line_no = 0;
    for (std::string_view line : text::split(content, '\n')) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      const auto f = text::split(line, '\t');
      if (f.size() != 2 + kHours) {
        throw Error(ErrorCode::kParse, "external scores line " +
                                           std::to_string(line_no) +
                                           ": expected 26 fields");
      }
      HourScores s{};
      for (int h = 0; h < kHours; ++h) s[h] = text::parse_double(f[2 + h]);
      out.add(text::unescape_field(f[0]), text::parse_int<std::size_t>(f[1]), s);
    }
    return out;
  }

 private:
  std::map<std::pair<std::string, std::size_t>, HourScores> table_;
};

// ---------------------------------------------------------------------------
// Metrics

struct MeridiemMetrics {
  std::size_t n = 0;
  double accuracy = 0.0;
  double am_f1 = 0.0;
  double pm_f1 = 0.0;
};

struct MeridiemReport {
  std::array<std::optional<MeridiemMetrics>, 12> per_hour;
  MeridiemMetrics micro;
  MeridiemMetrics macro;  // unweighted mean over hours with test windows
};

namespace classify_detail {

struct Confusion {
  // [truth][prediction], 0 = am, 1 = pm
  std::array<std::array<std::size_t, 2>, 2> m{};

  void add(Meridiem truth, Meridiem pred) {
    ++m[truth == Meridiem::kPm][pred == Meridiem::kPm];
  }

  std::size_t n() const { return m[0][0] + m[0][1] + m[1][0] + m[1][1]; }

  // F1 of one class; a class absent from both truth and predictions scores 1.
  double f1(int c) const {
    const double tp = static_cast<double>(m[c][c]);
    const double fp = static_cast<double>(m[1 - c][c]);
    const double fn = static_cast<double>(m[c][1 - c]);
    if (tp + fp + fn == 0.0) return 1.0;
    return 2.0 * tp / (2.0 * tp + fp + fn);
  }

  MeridiemMetrics metrics() const {
    MeridiemMetrics out;
    out.n = n();
    out.accuracy = out.n == 0 ? 0.0
                              : static_cast<double>(m[0][0] + m[1][1]) /
                                    static_cast<double>(out.n);
    out.am_f1 = f1(0);
    out.pm_f1 = f1(1);
    return out;
  }
};

}  // namespace classify_detail

inline MeridiemReport evaluate_meridiem(const MeridiemClassifier& classifier,
                                        std::span<const SentenceWindow> test) {
  std::vector<SentenceWindow> labeled;
  for (const auto& w : test) {
    if (w.meridiem && *w.meridiem != Meridiem::kUnknown) labeled.push_back(w);
  }
  classify_detail::check_disjoint(classifier.training_keys(), labeled);
  std::array<classify_detail::Confusion, 12> per_hour;
  classify_detail::Confusion pooled;
  for (const auto& w : labeled) {
    const Meridiem pred = classifier.predict(w);
    per_hour[w.anchor_hour12].add(*w.meridiem, pred);
    pooled.add(*w.meridiem, pred);
  }
  MeridiemReport report;
  report.micro = pooled.metrics();
  std::size_t hours = 0;
  for (int h = 0; h < 12; ++h) {
    if (per_hour[h].n() == 0) continue;
    const auto m = per_hour[h].metrics();
    report.per_hour[h] = m;
    report.macro.accuracy += m.accuracy;
    report.macro.am_f1 += m.am_f1;
    report.macro.pm_f1 += m.pm_f1;
    report.macro.n += m.n;
    ++hours;
  }
  report.macro.accuracy /= static_cast<double>(hours);
  report.macro.am_f1 /= static_cast<double>(hours);
  report.macro.pm_f1 /= static_cast<double>(hours);
  return report;
}

struct HourReport {
  std::array<std::optional<double>, kHours> mean_error_by_hour;
  std::array<std::size_t, kHours> count_by_hour{};
  double mean_error = 0.0;
  std::size_t n = 0;
};

// Mean circular error per true hour and over all labeled windows, using the
// argmax of the scorer's output as the prediction.
inline HourReport evaluate_hour(const HourScorer& scorer,
                                std::span<const SentenceWindow> test) {
  std::vector<SentenceWindow> labeled;
  for (const auto& w : test) {
    if (w.hour24) labeled.push_back(w);
  }
  classify_detail::check_disjoint(scorer.training_keys(), labeled);
  std::array<double, kHours> sums{};
  HourReport report;
  double total = 0.0;
  for (const auto& w : labeled) {
    const int pred = argmax_hour(scorer.scores(w));
    const int err = hour_error(pred, *w.hour24);
    sums[*w.hour24] += err;
    ++report.count_by_hour[*w.hour24];
    total += err;
  }
  for (int h = 0; h < kHours; ++h) {
    if (report.count_by_hour[h] > 0) {
      report.mean_error_by_hour[h] =
          sums[h] / static_cast<double>(report.count_by_hour[h]);
    }
  }
  report.n = labeled.size();
  report.mean_error = total / static_cast<double>(report.n);
  return report;
}

// Always predicts one hour (noon by default).
class ConstantHourScorer final : public HourScorer {
 public:
  explicit ConstantHourScorer(int hour = 12) : hour_(hour) {}
  HourScores scores(const SentenceWindow&) const override {
    HourScores s{};
    s[hour_] = 1.0;
    return s;
  }

 private:
  int hour_;
};

// Fraction of positions where the two lists agree.
template <typename T>
double agreement(std::span<const T> predictions, std::span<const T> annotations) {
  if (predictions.size() != annotations.size()) {
    throw Error(ErrorCode::kLengthMismatch, "lists differ in length");
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmptyInput, "empty lists");
  std::size_t same = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    same += predictions[i] == annotations[i];
  }
  return static_cast<double>(same) / static_cast<double>(predictions.size());
}

// ---------------------------------------------------------------------------
// Splits

// Fisher-Yates over mt19937_64, which produces the same sequence on every
// platform (std::shuffle does not promise that).
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

// Per stratum, round(fraction * size) items go to the first part.
template <typename T, typename StratumFn>
std::pair<std::vector<T>, std::vector<T>> stratified_split(
    const std::vector<T>& items, double fraction, std::uint64_t seed,
    StratumFn stratum) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < items.size(); ++i) {
    groups[stratum(items[i])].push_back(i);
  }
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  for (auto& [key, idx] : groups) {
    deterministic_shuffle(idx, seed ^ (0x9E3779B97F4A7C15ULL *
                                       static_cast<std::uint64_t>(key + 1)));
    const auto cut = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(idx.size()) + 0.5));
    first.insert(first.end(), idx.begin(), idx.begin() + cut);
    second.insert(second.end(), idx.begin() + cut, idx.end());
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  std::pair<std::vector<T>, std::vector<T>> out;
  for (auto i : first) out.first.push_back(items[i]);
  for (auto i : second) out.second.push_back(items[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Model files

inline constexpr int kModelFormatVersion = 1;

namespace classify_detail {

inline void serialize_keys(const std::set<WindowKey>& keys, std::string& out) {
  out += "keys\t" + std::to_string(keys.size()) + '\n';
  for (const auto& k : keys) {
    out += "k\t" + text::escape_field(k.doc_id) + '\t' +
           std::to_string(k.paragraph) + '\t' + std::to_string(k.sentence) +
           '\t' + std::to_string(k.span_start) + '\n';
  }
}

inline std::set<WindowKey> parse_keys(std::span<const std::string> lines,
                                      std::size_t& pos) {
  if (pos >= lines.size()) throw Error(ErrorCode::kParse, "missing keys");
  const auto head = text::split(lines[pos++], '\t');
  if (head.size() != 2 || head[0] != "keys") {
    throw Error(ErrorCode::kParse, "expected keys header");
  }
  const auto n = text::parse_int<std::size_t>(head[1]);
  std::set<WindowKey> keys;
  for (std::size_t i = 0; i < n; ++i) {
    if (pos >= lines.size()) throw Error(ErrorCode::kParse, "keys truncated");
    const auto f = text::split(lines[pos++], '\t');
    if (f.size() != 5 || f[0] != "k") throw Error(ErrorCode::kParse, "bad key row");
    keys.insert({text::unescape_field(f[1]), text::parse_int<std::size_t>(f[2]),
                 text::parse_int<std::size_t>(f[3]),
                 text::parse_int<std::size_t>(f[4])});
  }
  return keys;
}

inline std::vector<std::string> lines_of(std::string_view content) {
  std::vector<std::string> out;
  for (auto l : text::split(content, '\n')) out.emplace_back(l);
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

inline void expect_header(std::span<const std::string> lines, std::size_t& pos,
                          std::string_view magic) {
  if (pos >= lines.size() ||
      lines[pos] != std::string(magic) + '\t' + std::to_string(kModelFormatVersion)) {
    throw Error(ErrorCode::kParse, "not a version " +
                                       std::to_string(kModelFormatVersion) +
                                       " " + std::string(magic) + " file");
  }
  ++pos;
}

inline std::string expect_value(std::span<const std::string> lines,
                                std::size_t& pos, std::string_view tag) {
  if (pos >= lines.size()) throw Error(ErrorCode::kParse, "model truncated");
  const auto f = text::split(lines[pos], '\t');
  if (f.size() != 2 || f[0] != tag) {
    throw Error(ErrorCode::kParse, "expected '" + std::string(tag) + "'");
  }
  ++pos;
  return std::string(f[1]);
}

}  // namespace classify_detail

inline std::string serialize_meridiem(const MeridiemPredictor& p) {
  std::string out = "timeflow-meridiem\t" + std::to_string(kModelFormatVersion) + '\n';
  out += "alpha\t" + text::format_double(p.alpha()) + '\n';
  out += "seed\t" + std::to_string(p.seed()) + '\n';
  for (int h = 0; h < 12; ++h) {
    out += "hour\t" + std::to_string(h) + '\t' +
           (p.has_model(h) ? "trained" : "empty") + '\n';
    if (p.has_model(h)) p.model(h).serialize(out);
  }
  classify_detail::serialize_keys(p.training_keys(), out);
  return out;
}

inline MeridiemPredictor parse_meridiem(std::string_view content) {
  using namespace classify_detail;
  const auto lines = lines_of(content);
  std::size_t pos = 0;
  expect_header(lines, pos, "timeflow-meridiem");
  const double alpha = text::parse_double(expect_value(lines, pos, "alpha"));
  const auto seed = text::parse_int<std::uint64_t>(expect_value(lines, pos, "seed"));
  std::array<std::optional<NaiveBayes>, 12> models;
  for (int h = 0; h < 12; ++h) {
    if (pos >= lines.size()) throw Error(ErrorCode::kParse, "model truncated");
    const auto f = text::split(lines[pos++], '\t');
    if (f.size() != 3 || f[0] != "hour" || text::parse_int<int>(f[1]) != h) {
      throw Error(ErrorCode::kParse, "expected hour " + std::to_string(h));
    }
    if (f[2] == "trained") models[h] = NaiveBayes::parse(lines, pos);
  }
  auto keys = parse_keys(lines, pos);
  return MeridiemPredictor(std::move(models), alpha, seed, std::move(keys));
}

inline std::string serialize_hour(const HourPredictor& p) {
  std::string out = "timeflow-hour\t" + std::to_string(kModelFormatVersion) + '\n';
  out += "alpha\t" + text::format_double(p.model().alpha()) + '\n';
  out += "seed\t" + std::to_string(p.seed()) + '\n';
  p.model().serialize(out);
  classify_detail::serialize_keys(p.training_keys(), out);
  return out;
}

inline HourPredictor parse_hour(std::string_view content) {
  using namespace classify_detail;
  const auto lines = lines_of(content);
  std::size_t pos = 0;
  expect_header(lines, pos, "timeflow-hour");
  expect_value(lines, pos, "alpha");
  const auto seed = text::parse_int<std::uint64_t>(expect_value(lines, pos, "seed"));
  NaiveBayes nb = NaiveBayes::parse(lines, pos);
  if (nb.classes().size() != kHours) {
    throw Error(ErrorCode::kParse, "hour model must have 24 classes");
  }
  auto keys = parse_keys(lines, pos);
  return HourPredictor(std::move(nb), seed, std::move(keys));
}

}  // namespace timeflow
