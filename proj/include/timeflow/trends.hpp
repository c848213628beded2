#pragma once

// Hour-of-day activity shares per author birth-year cohort.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "timeflow/association.hpp"
#include "timeflow/error.hpp"
#include "timeflow/text.hpp"

namespace timeflow {

struct Cohort {
  std::string label;
  std::optional<int> year_lo;  // open below when absent
  std::optional<int> year_hi;  // open above when absent
};

// Buckets: up to the first edge, then right-inclusive spans between edges,
// then everything after the last edge.
class CohortScheme {
 public:
  CohortScheme() : CohortScheme({1800, 1820, 1840, 1860, 1880, 1900}) {}

  explicit CohortScheme(std::vector<int> edges) : edges_(std::move(edges)) {
    if (edges_.empty() || !std::is_sorted(edges_.begin(), edges_.end()) ||
        std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cohort edges must be strictly increasing");
    }
    cohorts_.push_back({"≤" + std::to_string(edges_.front()), std::nullopt,
                        edges_.front()});
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      const int lo = edges_[i - 1] + 1;
      const int hi = edges_[i];
      cohorts_.push_back({"[" + std::to_string(lo) + "," + std::to_string(hi) + "]",
                          lo, hi});
    }
    cohorts_.push_back({"≥" + std::to_string(edges_.back() + 1),
                        edges_.back() + 1, std::nullopt});
  }

  const std::vector<Cohort>& cohorts() const { return cohorts_; }
  const std::vector<int>& edges() const { return edges_; }

  // Position in cohorts(), or nullopt for an unknown year.
  std::optional<std::size_t> index(std::optional<int> year) const {
    if (!year) return std::nullopt;
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), *year);
    return static_cast<std::size_t>(it - edges_.begin());
  }

 private:
  std::vector<int> edges_;
  std::vector<Cohort> cohorts_;
};

inline constexpr std::string_view kUnknownCohort = "unknown";

inline std::string assign_cohort(std::optional<int> birth_year,
                                 const CohortScheme& scheme = CohortScheme()) {
  const auto i = scheme.index(birth_year);
  return i ? scheme.cohorts()[*i].label : std::string(kUnknownCohort);
}

struct BookTrack {
  std::string book_id;
  std::optional<int> birth_year;
  std::vector<int> hours;  // one per window
};

struct CohortRow {
  Cohort cohort;
  std::size_t books = 0;
  std::size_t windows = 0;
  std::array<double, kHours> shares{};
  double late_night = 0.0;
};

inline std::set<int> default_late_night_hours() {
  return {22, 23, 0, 1, 2, 3, 4};
}

inline double late_night_fraction(const std::array<double, kHours>& shares,
                                  const std::set<int>& hours = default_late_night_hours()) {
  double sum = 0.0;
  for (int h : hours) sum += shares.at(h);
  return sum;
}

// Rows for every cohort holding at least one window, in year order. Books of
// unknown birth year are left out.
inline std::vector<CohortRow> cohort_shares(
    std::span<const BookTrack> tracks, const CohortScheme& scheme = CohortScheme(),
    const std::set<int>& late_hours = default_late_night_hours()) {
  const auto& cohorts = scheme.cohorts();
  std::vector<std::array<std::size_t, kHours>> counts(cohorts.size());
  std::vector<std::size_t> books(cohorts.size(), 0);
  bool any = false;
  for (const auto& t : tracks) {
    const auto i = scheme.index(t.birth_year);
    if (!i) continue;
    ++books[*i];
    for (int h : t.hours) {
      if (h < 0 || h >= kHours) {
        throw Error(ErrorCode::kInvalidArgument, "track hour out of range");
      }
      ++counts[*i][h];
      any = true;
    }
  }
  if (!any) {
    throw Error(ErrorCode::kNoMetadataYears,
                "no windows from books with a known birth year");
  }
  std::vector<CohortRow> rows;
  for (std::size_t c = 0; c < cohorts.size(); ++c) {
    std::size_t total = 0;
    for (auto v : counts[c]) total += v;
    if (total == 0) continue;
    CohortRow row;
    row.cohort = cohorts[c];
    row.books = books[c];
    row.windows = total;
    for (int h = 0; h < kHours; ++h) {
      row.shares[h] = static_cast<double>(counts[c][h]) / static_cast<double>(total);
    }
    row.late_night = late_night_fraction(row.shares, late_hours);
    rows.push_back(row);
  }
  return rows;
}

inline std::string cohort_table_tsv(std::span<const CohortRow> rows) {
  std::string out = "cohort\tyear_lo\tyear_hi\tn_books";
  for (int h = 0; h < kHours; ++h) out += "\tshare_h" + std::to_string(h);
  out += "\tlate_night_fraction\n";
  const auto year = [](std::optional<int> y) {
    return y ? std::to_string(*y) : std::string("-");
  };
  for (const auto& r : rows) {
    out += r.cohort.label + '\t' + year(r.cohort.year_lo) + '\t' +
           year(r.cohort.year_hi) + '\t' + std::to_string(r.books);
    for (double s : r.shares) out += '\t' + text::format_fixed(s, 6);
    out += '\t' + text::format_fixed(r.late_night, 6) + '\n';
  }
  return out;
}

}  // namespace timeflow
