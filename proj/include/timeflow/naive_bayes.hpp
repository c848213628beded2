#pragma once

// Multinomial Naive Bayes over binary (presence) bag-of-words features.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "timeflow/error.hpp"
#include "timeflow/text.hpp"

namespace timeflow {

struct LabeledTokens {
  std::size_t label = 0;
  std::vector<std::string> tokens;
};

class NaiveBayes {
 public:
  NaiveBayes() = default;

  // Counts, per class, how many examples contain each token (presence only).
  static NaiveBayes train(std::vector<std::string> classes, double alpha,
                          std::span<const LabeledTokens> examples) {
    if (!(alpha > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "smoothing alpha must be > 0");
    }
    NaiveBayes nb;
    nb.classes_ = std::move(classes);
    nb.alpha_ = alpha;
    nb.doc_counts_.assign(nb.classes_.size(), 0);
    nb.totals_.assign(nb.classes_.size(), 0);
    for (const auto& ex : examples) {
      if (ex.label >= nb.classes_.size()) {
        throw Error(ErrorCode::kInvalidArgument, "label out of range");
      }
      ++nb.doc_counts_[ex.label];
      const std::set<std::string_view> present(ex.tokens.begin(),
                                               ex.tokens.end());
      for (std::string_view t : present) {
        auto& row = nb.counts_[std::string(t)];
        if (row.empty()) row.assign(nb.classes_.size(), 0);
        ++row[ex.label];
        ++nb.totals_[ex.label];
      }
    }
    return nb;
  }

  const std::vector<std::string>& classes() const { return classes_; }
  double alpha() const { return alpha_; }
  std::size_t vocabulary_size() const { return counts_.size(); }
  std::int64_t doc_count(std::size_t c) const { return doc_counts_.at(c); }
  std::int64_t total_examples() const {
    std::int64_t n = 0;
    for (auto c : doc_counts_) n += c;
    return n;
  }

  // log P(c); -inf for classes without examples.
  double log_prior(std::size_t c) const {
    const std::int64_t n = total_examples();
    if (doc_counts_.at(c) == 0 || n == 0) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::log(static_cast<double>(doc_counts_[c])) -
           std::log(static_cast<double>(n));
  }

  // log P(t|c) with additive smoothing over the vocabulary plus one slot
  // shared by unseen tokens.
  double log_likelihood(std::string_view token, std::size_t c) const {
    const auto it = counts_.find(token);
    const double count =
        it == counts_.end() ? 0.0 : static_cast<double>(it->second[c]);
    const double denom = static_cast<double>(totals_[c]) +
                         alpha_ * static_cast<double>(counts_.size() + 1);
    return std::log(count + alpha_) - std::log(denom);
  }

  // log P(c) + sum over distinct tokens of log P(t|c).
  std::vector<double> joint_log_scores(
      std::span<const std::string> tokens) const {
    const std::set<std::string_view> present(tokens.begin(), tokens.end());
    std::vector<double> out(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      out[c] = log_prior(c);
      if (std::isinf(out[c])) continue;
      for (std::string_view t : present) out[c] += log_likelihood(t, c);
    }
    return out;
  }

  // Section format:
  //   nb <n_classes> <vocab> ; classes ... ; docs ... ; totals ... ; t word counts...
  void serialize(std::string& out) const {
    out += "nb\t" + std::to_string(classes_.size()) + '\t' +
           std::to_string(counts_.size()) + '\t' + text::format_double(alpha_) +
           '\n';
    out += "classes";
    for (const auto& c : classes_) out += '\t' + c;
    out += "\ndocs";
    for (auto d : doc_counts_) out += '\t' + std::to_string(d);
    out += '\n';
    for (const auto& [tok, row] : counts_) {
      out += "t\t" + tok;
      for (auto v : row) out += '\t' + std::to_string(v);
      out += '\n';
    }
  }

  // Reads one section starting at lines[pos]; advances pos past it.
  static NaiveBayes parse(std::span<const std::string> lines, std::size_t& pos) {
    const auto need = [&](std::string_view tag) {
      if (pos >= lines.size()) {
        throw Error(ErrorCode::kParse, "model truncated before " + std::string(tag));
      }
      auto f = text::split(lines[pos], '\t');
      if (f.empty() || f[0] != tag) {
        throw Error(ErrorCode::kParse, "expected '" + std::string(tag) + "' line");
      }
      ++pos;
      return f;
    };
    NaiveBayes nb;
    const auto header = need("nb");
    if (header.size() != 4) throw Error(ErrorCode::kParse, "bad nb header");
    const auto n_classes = text::parse_int<std::size_t>(header[1]);
    const auto vocab = text::parse_int<std::size_t>(header[2]);
    nb.alpha_ = text::parse_double(header[3]);
    const auto classes = need("classes");
    const auto docs = need("docs");
    if (classes.size() != n_classes + 1 || docs.size() != n_classes + 1) {
      throw Error(ErrorCode::kParse, "class count mismatch");
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
      nb.classes_.emplace_back(classes[c + 1]);
      nb.doc_counts_.push_back(text::parse_int<std::int64_t>(docs[c + 1]));
    }
    nb.totals_.assign(n_classes, 0);
    for (std::size_t v = 0; v < vocab; ++v) {
      const auto f = need("t");
      if (f.size() != n_classes + 2) throw Error(ErrorCode::kParse, "bad token row");
      std::vector<std::int64_t> row(n_classes);
      for (std::size_t c = 0; c < n_classes; ++c) {
        row[c] = text::parse_int<std::int64_t>(f[c + 2]);
        nb.totals_[c] += row[c];
      }
      nb.counts_.emplace(std::string(f[1]), std::move(row));
    }
    return nb;
  }

  friend bool operator==(const NaiveBayes&, const NaiveBayes&) = default;

 private:
  std::vector<std::string> classes_;
  double alpha_ = 1.0;
  std::vector<std::int64_t> doc_counts_;
  std::vector<std::int64_t> totals_;
  std::map<std::string, std::vector<std::int64_t>, std::less<>> counts_;
};

}  // namespace timeflow
