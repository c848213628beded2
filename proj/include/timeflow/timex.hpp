#pragma once

// Rule-based extraction of clock times ("half past nine", "three in the
// afternoon", "noon") and day-part tags ("morning", "night").
//
// Rules, tried at every token position; the longest match wins and matches
// never overlap:
//   1. [twelve|12] [o'clock] noon|midday|mid-day|midnight
//   2. [a] half|quarter|MIN [minute(s)] past|after|to|before|of HOUR [o'clock] [SUFFIX]
//   3. HOUR o'clock [SUFFIX]
//   4. HOUR:MM [SUFFIX]          (H from 0 to 23; hours 0 and 13-23 resolve directly)
//   5. HOUR.MM SUFFIX
//   6. HOUR MINUTE-WORD SUFFIX   ("nine thirty p.m.")
//   7. HOUR SUFFIX
//   8. morning|afternoon|evening|night (and plurals) as a day-part tag
// HOUR is one..twelve or 1..12. SUFFIX is a meridiem marker (am, a.m., pm,
// p.m., with or without periods) or an attachment: "in the morning",
// "in the forenoon", "this morning" (am); "in/this afternoon",
// "in/this evening" (pm); "at night", "in the night" (twelve -> 0,
// one to four -> am, otherwise pm). Minutes only shift the hour bucket:
// "quarter to five" lands in hour 4.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "timeflow/error.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/text.hpp"

namespace timeflow {

enum class ExpressionKind { kClock, kDayPart };
enum class Meridiem { kAm, kPm, kUnknown };
enum class DayPart { kMorning, kAfternoon, kEvening, kNight };

inline std::string_view meridiem_name(Meridiem m) {
  switch (m) {
    case Meridiem::kAm: return "am";
    case Meridiem::kPm: return "pm";
    case Meridiem::kUnknown: return "unknown";
  }
  return "unknown";
}

inline std::string_view daypart_name(DayPart d) {
  switch (d) {
    case DayPart::kMorning: return "morning";
    case DayPart::kAfternoon: return "afternoon";
    case DayPart::kEvening: return "evening";
    case DayPart::kNight: return "night";
  }
  return "night";
}

struct TimeExpression {
  std::string doc_id;
  std::size_t paragraph = 0;
  std::size_t sentence = 0;  // index within the paragraph
  std::size_t span_start = 0;
  std::size_t span_end = 0;  // exclusive token index
  std::string surface;
  ExpressionKind kind = ExpressionKind::kClock;
  int hour12 = 0;  // 0..11, "twelve" is 0
  Meridiem meridiem = Meridiem::kUnknown;
  std::optional<int> hour24;
  std::optional<DayPart> daypart;

  bool is_clock() const { return kind == ExpressionKind::kClock; }
  bool is_resolved() const { return is_clock() && hour24.has_value(); }
  SentenceRef sentence_ref() const { return {paragraph, sentence}; }

  friend bool operator==(const TimeExpression&,
                         const TimeExpression&) = default;
};

namespace timex_detail {

inline std::optional<int> number_word(std::string_view w) {
  static constexpr std::array<std::string_view, 60> kWords = {
      "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
      "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
      "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
      "twenty-one", "twenty-two", "twenty-three", "twenty-four",
      "twenty-five", "twenty-six", "twenty-seven", "twenty-eight",
      "twenty-nine", "thirty", "thirty-one", "thirty-two", "thirty-three",
      "thirty-four", "thirty-five", "thirty-six", "thirty-seven",
      "thirty-eight", "thirty-nine", "forty", "forty-one", "forty-two",
      "forty-three", "forty-four", "forty-five", "forty-six", "forty-seven",
      "forty-eight", "forty-nine", "fifty", "fifty-one", "fifty-two",
      "fifty-three", "fifty-four", "fifty-five", "fifty-six", "fifty-seven",
      "fifty-eight", "fifty-nine"};
  for (std::size_t i = 0; i < kWords.size(); ++i) {
    if (kWords[i] == w) return static_cast<int>(i);
  }
  return std::nullopt;
}

inline std::optional<int> digits(std::string_view w, std::size_t max_len) {
  if (w.empty() || w.size() > max_len) return std::nullopt;
  int v = 0;
  for (char c : w) {
    if (!text::is_ascii_digit(c)) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

// one..twelve or 1..12
inline std::optional<int> hour_token(std::string_view w) {
  std::optional<int> v = digits(w, 2);
  if (!v) v = number_word(w);
  if (v && *v >= 1 && *v <= 12) return v;
  return std::nullopt;
}

inline bool is_oclock(std::string_view w) {
  return w == "o'clock" || w == "oclock" || w == "o'clock.";
}

inline bool is_noon_word(std::string_view w) {
  return w == "noon" || w == "midday" || w == "mid-day" || w == "noonday";
}

enum class Suffix { kAm, kPm, kNight };

struct SuffixMatch {
  std::size_t end;
  Suffix suffix;
};

inline std::optional<SuffixMatch> suffix_at(const std::vector<std::string>& t,
                                            std::size_t i) {
  if (i >= t.size()) return std::nullopt;
  const std::string& w = t[i];
  if (w == "am" || w == "a.m." || w == "a.m") return SuffixMatch{i + 1, Suffix::kAm};
  if (w == "pm" || w == "p.m." || w == "p.m") return SuffixMatch{i + 1, Suffix::kPm};
  if (i + 1 < t.size()) {
    const std::string& n = t[i + 1];
    if (w == "at" && n == "night") return SuffixMatch{i + 2, Suffix::kNight};
    if (w == "this") {
      if (n == "morning") return SuffixMatch{i + 2, Suffix::kAm};
      if (n == "afternoon" || n == "evening") {
        return SuffixMatch{i + 2, Suffix::kPm};
      }
    }
  }
  if (i + 2 < t.size() && w == "in" && t[i + 1] == "the") {
    const std::string& n = t[i + 2];
    if (n == "morning" || n == "forenoon") return SuffixMatch{i + 3, Suffix::kAm};
    if (n == "afternoon" || n == "evening") return SuffixMatch{i + 3, Suffix::kPm};
    if (n == "night") return SuffixMatch{i + 3, Suffix::kNight};
  }
  return std::nullopt;
}

struct ClockValue {
  int hour12 = 0;
  Meridiem meridiem = Meridiem::kUnknown;
  std::optional<int> hour24;
};

// named_hour in 1..12, offset in minutes (may be negative).
inline ClockValue resolve(int named_hour, int offset_minutes,
                          std::optional<Suffix> suffix) {
  const int h12 = named_hour % 12;
  ClockValue v;
  if (!suffix) {
    const int minutes = ((h12 * 60 + offset_minutes) % 720 + 720) % 720;
    v.hour12 = minutes / 60;
    return v;
  }
  int base24 = h12;
  switch (*suffix) {
    case Suffix::kAm: base24 = h12; break;
    case Suffix::kPm: base24 = h12 + 12; break;
    case Suffix::kNight: base24 = (named_hour == 12 || named_hour <= 4) ? h12 : h12 + 12; break;
  }
  const int minutes = ((base24 * 60 + offset_minutes) % 1440 + 1440) % 1440;
  const int hour24 = minutes / 60;
  v.hour24 = hour24;
  v.hour12 = hour24 % 12;
  v.meridiem = hour24 >= 12 ? Meridiem::kPm : Meridiem::kAm;
  return v;
}

inline ClockValue from_hour24(int hour24) {
  return {hour24 % 12, hour24 >= 12 ? Meridiem::kPm : Meridiem::kAm, hour24};
}

struct ClockMatch {
  std::size_t end;
  ClockValue value;
};

inline std::optional<ClockMatch> noon_rule(const std::vector<std::string>& t,
                                           std::size_t i) {
  std::size_t j = i;
  if (j < t.size() && (t[j] == "twelve" || t[j] == "12")) {
    ++j;
    if (j < t.size() && is_oclock(t[j])) ++j;
  }
  if (j >= t.size()) return std::nullopt;
  if (is_noon_word(t[j])) return ClockMatch{j + 1, from_hour24(12)};
  if (t[j] == "midnight") return ClockMatch{j + 1, from_hour24(0)};
  return std::nullopt;
}

inline std::optional<int> minute_amount(const std::vector<std::string>& t,
                                        std::size_t& j) {
  const std::string& w = t[j];
  if (w == "half") {
    ++j;
    return 30;
  }
  if (w == "quarter") {
    ++j;
    return 15;
  }
  std::optional<int> m = digits(w, 2);
  if (!m) m = number_word(w);
  if (!m || *m < 1 || *m > 59) return std::nullopt;
  const bool has_unit =
      j + 1 < t.size() && (t[j + 1] == "minutes" || t[j + 1] == "minute");
  if (has_unit) {
    j += 2;
    return m;
  }
  if (*m == 5 || *m == 10 || *m == 20 || *m == 25) {
    ++j;
    return m;
  }
  return std::nullopt;
}

inline std::optional<ClockMatch> minute_prefix_rule(
    const std::vector<std::string>& t, std::size_t i) {
  std::size_t j = i;
  if (j < t.size() && t[j] == "a") ++j;
  if (j >= t.size()) return std::nullopt;
  const std::string& minute_word = t[j];
  const bool ranged = i > 0 && (t[i - 1] == "from" || t[i - 1] == "between");
  if (ranged && minute_word != "half" && minute_word != "quarter") {
    return std::nullopt;
  }
  const std::optional<int> minutes = minute_amount(t, j);
  if (!minutes || j >= t.size()) return std::nullopt;
  int sign = 0;
  if (t[j] == "past" || t[j] == "after") sign = 1;
  if (t[j] == "to" || t[j] == "before" || t[j] == "of") sign = -1;
  if (sign == 0 || (sign < 0 && minute_word == "half")) return std::nullopt;
  ++j;
  if (j >= t.size()) return std::nullopt;
  const std::optional<int> hour = hour_token(t[j]);
  if (!hour) return std::nullopt;
  ++j;
  if (j < t.size() && is_oclock(t[j])) ++j;
  std::optional<Suffix> suffix;
  if (const auto s = suffix_at(t, j)) {
    suffix = s->suffix;
    j = s->end;
  }
  return ClockMatch{j, resolve(*hour, sign * *minutes, suffix)};
}

// "9:30", "14:05", "9.30"
inline std::optional<std::pair<int, int>> hour_minute_token(std::string_view w,
                                                            char sep) {
  const auto pos = w.find(sep);
  if (pos == std::string_view::npos) return std::nullopt;
  const auto h = digits(w.substr(0, pos), 2);
  const auto m = digits(w.substr(pos + 1), 2);
  if (!h || !m || w.size() - pos - 1 != 2 || *h > 23 || *m > 59) {
    return std::nullopt;
  }
  return std::make_pair(*h, *m);
}

inline bool is_minute_word(std::string_view w) {
  const auto m = number_word(w);
  return m && *m >= 5 && *m <= 59 && *m % 5 == 0;
}

inline std::optional<ClockMatch> hour_rule(const std::vector<std::string>& t,
                                           std::size_t i) {
  const std::string& w = t[i];
  if (const auto hm = hour_minute_token(w, ':')) {
    std::size_t j = i + 1;
    const auto s = suffix_at(t, j);
    if (hm->first == 0 || hm->first > 12) {
      const bool meridiem_suffix = s && s->suffix != Suffix::kNight;
      return ClockMatch{meridiem_suffix ? s->end : j, from_hour24(hm->first)};
    }
    if (s) return ClockMatch{s->end, resolve(hm->first, hm->second, s->suffix)};
    return ClockMatch{j, resolve(hm->first, hm->second, std::nullopt)};
  }
  if (const auto hm = hour_minute_token(w, '.')) {
    if (hm->first < 1 || hm->first > 12) return std::nullopt;
    if (const auto s = suffix_at(t, i + 1)) {
      return ClockMatch{s->end, resolve(hm->first, hm->second, s->suffix)};
    }
    return std::nullopt;
  }
  const std::optional<int> hour = hour_token(w);
  if (!hour) return std::nullopt;
  std::size_t j = i + 1;
  if (j < t.size() && is_oclock(t[j])) {
    ++j;
    if (const auto s = suffix_at(t, j)) {
      return ClockMatch{s->end, resolve(*hour, 0, s->suffix)};
    }
    return ClockMatch{j, resolve(*hour, 0, std::nullopt)};
  }
  if (j < t.size() && is_minute_word(t[j])) {
    if (const auto s = suffix_at(t, j + 1)) {
      return ClockMatch{s->end, resolve(*hour, 0, s->suffix)};
    }
  }
  if (const auto s = suffix_at(t, j)) {
    return ClockMatch{s->end, resolve(*hour, 0, s->suffix)};
  }
  return std::nullopt;
}

inline std::optional<DayPart> daypart_word(std::string_view w) {
  if (w.size() > 2 && w.substr(w.size() - 2) == "'s") {
    w.remove_suffix(2);
  }
  if (w == "morning" || w == "mornings") return DayPart::kMorning;
  if (w == "afternoon" || w == "afternoons") return DayPart::kAfternoon;
  if (w == "evening" || w == "evenings") return DayPart::kEvening;
  if (w == "night" || w == "nights") return DayPart::kNight;
  return std::nullopt;
}

}  // namespace timex_detail

// Matches within one sentence, left to right, longest match first.
inline std::vector<TimeExpression> extract_from_sentence(
    const Sentence& sentence, const std::string& doc_id, SentenceRef ref) {
  using namespace timex_detail;
  std::vector<std::string> t;
  t.reserve(sentence.tokens.size());
  for (const auto& tok : sentence.tokens) t.push_back(text::to_lower(tok.text));

  std::vector<TimeExpression> out;
  std::size_t i = 0;
  while (i < t.size()) {
    std::optional<ClockMatch> best;
    for (const auto& m : {noon_rule(t, i), minute_prefix_rule(t, i),
                          hour_rule(t, i)}) {
      if (m && (!best || m->end > best->end)) best = m;
    }
    TimeExpression e;
    e.doc_id = doc_id;
    e.paragraph = ref.paragraph;
    e.sentence = ref.sentence;
    e.span_start = i;
    if (best) {
      e.span_end = best->end;
      e.kind = ExpressionKind::kClock;
      e.hour12 = best->value.hour12;
      e.meridiem = best->value.meridiem;
      e.hour24 = best->value.hour24;
    } else if (const auto d = daypart_word(t[i])) {
      e.span_end = i + 1;
      e.kind = ExpressionKind::kDayPart;
      e.daypart = d;
    } else {
      ++i;
      continue;
    }
    const auto& toks = sentence.tokens;
    for (std::size_t k = e.span_start; k < e.span_end; ++k) {
      if (k > e.span_start) e.surface += ' ';
      e.surface += toks[k].text;
    }
    i = e.span_end;
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<TimeExpression> extract_expressions(const Document& doc) {
  std::vector<TimeExpression> out;
  for (const SentenceRef ref : doc.sentence_refs()) {
    auto found = extract_from_sentence(doc.sentence(ref), doc.meta.id, ref);
    out.insert(out.end(), std::make_move_iterator(found.begin()),
               std::make_move_iterator(found.end()));
  }
  return out;
}

// Drops "1 am" matches that are OCR misreads of "I am": the meridiem is the
// bare word "am" and no time preposition precedes the digit.
inline std::vector<TimeExpression> filter_ocr_artifacts(
    const std::vector<TimeExpression>& expressions, const Document& doc) {
  static const std::array<std::string_view, 9> kCues = {
      "at", "about", "around", "until", "till", "by", "before", "after", "past"};
  std::vector<TimeExpression> out;
  for (const auto& e : expressions) {
    bool drop = false;
    if (e.is_clock() && e.span_end - e.span_start == 2) {
      const auto& toks = doc.sentence(e.sentence_ref()).tokens;
      const bool bare = toks[e.span_start].text == "1" &&
                        text::to_lower(toks[e.span_start + 1].text) == "am";
      bool cue = false;
      if (e.span_start > 0) {
        const std::string prev = text::to_lower(toks[e.span_start - 1].text);
        for (auto c : kCues) cue = cue || prev == c;
      }
      drop = bare && !cue;
    }
    if (!drop) out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hour counts

struct HourCountTable {
  // resolved[hour12][0] counts am, [1] counts pm. Midnight sits in (0, am)
  // and noon in (0, pm).
  std::array<std::array<long, 2>, 12> resolved{};
  std::array<long, 12> ambiguous{};

  long total() const {
    long n = 0;
    for (int h = 0; h < 12; ++h) n += resolved[h][0] + resolved[h][1] + ambiguous[h];
    return n;
  }

  friend bool operator==(const HourCountTable&, const HourCountTable&) = default;
};

// Counts clock expressions; day-part tags are not hour references and are
// skipped, so total() equals the number of clock expressions in the input.
inline HourCountTable tabulate_hours(
    const std::vector<TimeExpression>& expressions) {
  HourCountTable table;
  for (const auto& e : expressions) {
    if (!e.is_clock()) continue;
    if (e.meridiem == Meridiem::kUnknown) {
      ++table.ambiguous[e.hour12];
    } else {
      ++table.resolved[e.hour12][e.meridiem == Meridiem::kPm ? 1 : 0];
    }
  }
  return table;
}

// resolved / (resolved + unresolved) over hours 1..11.
inline double resolution_rate(const HourCountTable& table) {
  long resolved = 0;
  long unresolved = 0;
  for (int h = 1; h < 12; ++h) {
    resolved += table.resolved[h][0] + table.resolved[h][1];
    unresolved += table.ambiguous[h];
  }
  if (resolved + unresolved == 0) {
    throw Error(ErrorCode::kEmptyTable, "no hour 1-11 references");
  }
  return static_cast<double>(resolved) /
         static_cast<double>(resolved + unresolved);
}

inline std::string hour_count_table_tsv(const HourCountTable& table) {
  std::string out = "hour\tam\tpm\tunknown\n";
  for (int h = 0; h < 12; ++h) {
    out += std::to_string(h) + '\t' + std::to_string(table.resolved[h][0]) +
           '\t' + std::to_string(table.resolved[h][1]) + '\t' +
           std::to_string(table.ambiguous[h]) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expression dump: one tab-separated record per expression.
// doc_id para sent span_start span_end surface kind hour12 meridiem hour24 daypart

inline std::string expression_record(const TimeExpression& e) {
  std::string out = text::escape_field(e.doc_id);
  out += '\t' + std::to_string(e.paragraph);
  out += '\t' + std::to_string(e.sentence);
  out += '\t' + std::to_string(e.span_start);
  out += '\t' + std::to_string(e.span_end);
  out += '\t' + text::escape_field(e.surface);
  if (e.is_clock()) {
    out += "\tclock\t" + std::to_string(e.hour12) + '\t' +
           std::string(meridiem_name(e.meridiem)) + '\t' +
           (e.hour24 ? std::to_string(*e.hour24) : "-") + "\t-";
  } else {
    out += "\tdaypart\t-\t-\t-\t" + std::string(daypart_name(*e.daypart));
  }
  return out;
}

inline TimeExpression parse_expression_record(std::string_view line) {
  const auto f = text::split(line, '\t');
  if (f.size() != 11) {
    throw Error(ErrorCode::kParse, "expression record needs 11 fields");
  }
  TimeExpression e;
  e.doc_id = text::unescape_field(f[0]);
  e.paragraph = text::parse_int<std::size_t>(f[1]);
  e.sentence = text::parse_int<std::size_t>(f[2]);
  e.span_start = text::parse_int<std::size_t>(f[3]);
  e.span_end = text::parse_int<std::size_t>(f[4]);
  e.surface = text::unescape_field(f[5]);
  if (f[6] == "clock") {
    e.kind = ExpressionKind::kClock;
    e.hour12 = text::parse_int<int>(f[7]);
    if (f[8] == "am") {
      e.meridiem = Meridiem::kAm;
    } else if (f[8] == "pm") {
      e.meridiem = Meridiem::kPm;
    } else if (f[8] == "unknown") {
      e.meridiem = Meridiem::kUnknown;
    } else {
      throw Error(ErrorCode::kParse, "bad meridiem '" + std::string(f[8]) + "'");
    }
    if (f[9] != "-") e.hour24 = text::parse_int<int>(f[9]);
    if (e.hour12 < 0 || e.hour12 > 11 ||
        (e.hour24 && (*e.hour24 < 0 || *e.hour24 > 23))) {
      throw Error(ErrorCode::kParse, "hour out of range");
    }
  } else if (f[6] == "daypart") {
    e.kind = ExpressionKind::kDayPart;
    const auto d = timex_detail::daypart_word(f[10]);
    if (!d) throw Error(ErrorCode::kParse, "bad daypart '" + std::string(f[10]) + "'");
    e.daypart = d;
  } else {
    throw Error(ErrorCode::kParse, "bad kind '" + std::string(f[6]) + "'");
  }
  if (e.span_end <= e.span_start) throw Error(ErrorCode::kParse, "empty span");
  return e;
}

inline std::string expression_dump(const std::vector<TimeExpression>& exprs) {
  std::string out;
  for (const auto& e : exprs) out += expression_record(e) + '\n';
  return out;
}

inline std::vector<TimeExpression> parse_expression_dump(std::string_view dump) {
  std::vector<TimeExpression> out;
  for (std::string_view line : text::split(dump, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    out.push_back(parse_expression_record(line));
  }
  return out;
}

}  // namespace timeflow
