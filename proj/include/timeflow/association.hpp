#pragma once

// Per-hour bags of words around resolved clock references, and the binomial
// tail score that measures how over-represented a word is at an hour.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "timeflow/binomial.hpp"
#include "timeflow/error.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/text.hpp"
#include "timeflow/timex.hpp"

namespace timeflow {

inline constexpr int kHours = 24;

inline bool is_word_token(std::string_view tok) {
  return std::any_of(tok.begin(), tok.end(), [](char c) {
    return text::is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
  });
}

using CountTable = std::map<std::string, std::int64_t, std::less<>>;

class HourBags {
 public:
  HourBags() = default;

  // Rebuilds the neighbor-merged bags from raw per-hour counts:
  // merged[h] = raw[h-1] + raw[h] + raw[h+1] with indices mod 24.
  HourBags(std::array<CountTable, kHours> raw, CountTable global)
      : raw_(std::move(raw)), global_(std::move(global)) {
    global_total_ = 0;
    for (const auto& [w, c] : global_) global_total_ += c;
    for (int h = 0; h < kHours; ++h) {
      raw_totals_[h] = 0;
      for (const auto& [w, c] : raw_[h]) raw_totals_[h] += c;
    }
    for (int h = 0; h < kHours; ++h) {
      merged_[h].clear();
      merged_totals_[h] = 0;
      for (int d = -1; d <= 1; ++d) {
        const int src = (h + d + kHours) % kHours;
        for (const auto& [w, c] : raw_[src]) merged_[h][w] += c;
        merged_totals_[h] += raw_totals_[src];
      }
    }
  }

  const CountTable& raw(int hour) const { return raw_.at(hour); }
  const CountTable& merged(int hour) const { return merged_.at(hour); }
  const CountTable& global() const { return global_; }
  std::int64_t raw_total(int hour) const { return raw_totals_.at(hour); }
  // N_h: total tokens of the merged bag.
  std::int64_t merged_total(int hour) const { return merged_totals_.at(hour); }
  std::int64_t global_total() const { return global_total_; }

  std::int64_t raw_count(std::string_view w, int hour) const {
    return lookup(raw_.at(hour), w);
  }
  std::int64_t merged_count(std::string_view w, int hour) const {
    return lookup(merged_.at(hour), w);
  }
  std::int64_t global_count(std::string_view w) const {
    return lookup(global_, w);
  }

  friend bool operator==(const HourBags& a, const HourBags& b) {
    return a.raw_ == b.raw_ && a.global_ == b.global_;
  }

 private:
  static std::int64_t lookup(const CountTable& t, std::string_view w) {
    const auto it = t.find(w);
    return it == t.end() ? 0 : it->second;
  }

  std::array<CountTable, kHours> raw_{};
  std::array<CountTable, kHours> merged_{};
  CountTable global_;
  std::array<std::int64_t, kHours> raw_totals_{};
  std::array<std::int64_t, kHours> merged_totals_{};
  std::int64_t global_total_ = 0;
};

// Global index of every sentence, keyed by its (paragraph, sentence) slot.
inline std::map<SentenceRef, std::size_t> sentence_positions(
    const Document& doc) {
  std::map<SentenceRef, std::size_t> out;
  const auto refs = doc.sentence_refs();
  for (std::size_t i = 0; i < refs.size(); ++i) out.emplace(refs[i], i);
  return out;
}

inline HourBags build_hour_bags(const std::vector<Document>& documents,
                                const std::vector<TimeExpression>& expressions,
                                int context_sentences = 3) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : documents) by_id.emplace(d.meta.id, &d);

  std::array<CountTable, kHours> raw{};
  CountTable global;
  for (const auto& doc : documents) {
    for (const auto& para : doc.paragraphs) {
      for (const auto& s : para.sentences) {
        for (const auto& t : s.tokens) {
          if (is_word_token(t.text)) ++global[text::to_lower(t.text)];
        }
      }
    }
  }

  std::unordered_map<std::string, std::pair<std::vector<SentenceRef>,
                                            std::map<SentenceRef, std::size_t>>>
      layout;
  for (const auto& e : expressions) {
    if (!e.is_resolved()) continue;
    const auto it = by_id.find(e.doc_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "expression refers to unknown document " + e.doc_id);
    }
    const Document& doc = *it->second;
    auto& [refs, positions] = layout[e.doc_id];
    if (refs.empty()) {
      refs = doc.sentence_refs();
      positions = sentence_positions(doc);
    }
    const auto pos = positions.find(e.sentence_ref());
    if (pos == positions.end()) {
      throw Error(ErrorCode::kInvalidArgument, "expression outside document");
    }
    const auto g = static_cast<std::ptrdiff_t>(pos->second);
    const auto lo = std::max<std::ptrdiff_t>(0, g - context_sentences);
    const auto hi = std::min<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(refs.size()) - 1, g + context_sentences);
    for (auto i = lo; i <= hi; ++i) {
      for (const auto& t : doc.sentence(refs[static_cast<std::size_t>(i)]).tokens) {
        if (is_word_token(t.text)) ++raw[*e.hour24][text::to_lower(t.text)];
      }
    }
  }
  return HourBags(std::move(raw), std::move(global));
}

namespace association_detail {

inline double word_probability(std::string_view w, const HourBags& bags) {
  const std::int64_t g = bags.global_count(w);
  if (g == 0 || bags.global_total() == 0) {
    throw Error(ErrorCode::kWordUnseen, "'" + std::string(w) + "'");
  }
  return static_cast<double>(g) / static_cast<double>(bags.global_total());
}

}  // namespace association_detail

// s(w,h): binomial CDF at k = count of w in merged bag h, with N_h trials and
// success probability p[w] = global frequency of w.
inline double score(std::string_view w, int hour, const HourBags& bags) {
  const double p = association_detail::word_probability(w, bags);
  return binomial::cdf(bags.merged_count(w, hour), bags.merged_total(hour), p);
}

// log(1 - s(w,h)); decreasing in s and still informative where s rounds to 1.
inline double log_tail_score(std::string_view w, int hour,
                             const HourBags& bags) {
  const double p = association_detail::word_probability(w, bags);
  return binomial::log_sf(bags.merged_count(w, hour), bags.merged_total(hour),
                          p);
}

// Hours by descending score. Exact score ties go to the hour whose own
// (unmerged) bag holds more occurrences of w, then to the lower hour.
inline std::vector<int> top_hours(std::string_view w, const HourBags& bags,
                                  std::size_t m) {
  std::array<double, kHours> tail{};
  for (int h = 0; h < kHours; ++h) tail[h] = log_tail_score(w, h, bags);
  std::vector<int> hours(kHours);
  std::iota(hours.begin(), hours.end(), 0);
  std::stable_sort(hours.begin(), hours.end(), [&](int a, int b) {
    if (tail[a] != tail[b]) return tail[a] < tail[b];
    return bags.raw_count(w, a) > bags.raw_count(w, b);
  });
  hours.resize(std::min<std::size_t>(m, kHours));
  return hours;
}

// ---------------------------------------------------------------------------
// Persistence: "timeflow-bags <version>" header, then global ("g") and raw
// per-hour ("r") counts. Merged bags are rebuilt on load.

inline constexpr int kBagsFormatVersion = 1;

inline std::string serialize_bags(const HourBags& bags) {
  std::string out = "timeflow-bags\t" + std::to_string(kBagsFormatVersion) + '\n';
  out += "total\t" + std::to_string(bags.global_total()) + '\n';
  for (const auto& [w, c] : bags.global()) {
    out += "g\t" + w + '\t' + std::to_string(c) + '\n';
  }
  for (int h = 0; h < kHours; ++h) {
    for (const auto& [w, c] : bags.raw(h)) {
      out += "r\t" + std::to_string(h) + '\t' + w + '\t' + std::to_string(c) + '\n';
    }
  }
  return out;
}

inline HourBags parse_bags(std::string_view content) {
  const auto lines = text::split(content, '\n');
  if (lines.empty() ||
      lines[0] != "timeflow-bags\t" + std::to_string(kBagsFormatVersion)) {
    throw Error(ErrorCode::kParse, "not a version " +
                                       std::to_string(kBagsFormatVersion) +
                                       " bags file");
  }
  std::array<CountTable, kHours> raw{};
  CountTable global;
  std::int64_t declared_total = -1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = text::split(lines[i], '\t');
    if (f[0] == "total" && f.size() == 2) {
      declared_total = text::parse_int<std::int64_t>(f[1]);
    } else if (f[0] == "g" && f.size() == 3) {
      global[std::string(f[1])] = text::parse_int<std::int64_t>(f[2]);
    } else if (f[0] == "r" && f.size() == 4) {
      const int h = text::parse_int<int>(f[1]);
      if (h < 0 || h >= kHours) throw Error(ErrorCode::kParse, "bad hour");
      raw[h][std::string(f[2])] = text::parse_int<std::int64_t>(f[3]);
    } else {
      throw Error(ErrorCode::kParse, "bad bags line " + std::to_string(i + 1));
    }
  }
  HourBags bags(std::move(raw), std::move(global));
  if (declared_total != bags.global_total()) {
    throw Error(ErrorCode::kParse, "bags total does not match counts");
  }
  return bags;
}

}  // namespace timeflow
