#pragma once

// End-to-end commands over a corpus directory. Every command reads only the
// artifacts its predecessors wrote into the output directory:
//
//   extract      corpus.tsv clean/<id>.txt sentences.tsv expressions.tsv
//                hour_counts.tsv bags.tsv
//   score-words  word_scores.tsv                      (needs bags.tsv)
//   train        meridiem.model hour.model report.tsv (needs extract)
//   segment      tracks.tsv segment_summary.tsv       (needs extract, hour.model
//                                                      or external scores)
//   trends       cohorts.tsv                          (needs tracks.tsv)

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "timeflow/association.hpp"
#include "timeflow/classify.hpp"
#include "timeflow/error.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/parallel.hpp"
#include "timeflow/segment.hpp"
#include "timeflow/text.hpp"
#include "timeflow/timex.hpp"
#include "timeflow/trends.hpp"

namespace timeflow {

struct PipelineConfig {
  std::string corpus_dir = "corpus";
  std::string metadata = "corpus/metadata.tsv";
  std::string output_dir = "out";
  int train_window = 3;       // sentences on each side of a clock reference
  int book_window = 7;        // sentences per book window
  double ratio = 8.0;         // windows per segment when k is not fixed
  std::optional<int> k;
  double alpha = 1.0;
  double dedup_threshold = 0.8;
  std::uint64_t seed = 0;
  std::optional<std::string> external_scores;
  int jobs = 1;

  void validate() const {
    const auto fail = [](const std::string& what) {
      throw Error(ErrorCode::kInvalidArgument, "config: " + what);
    };
    if (train_window < 0 || train_window > 50) fail("train_window must be in [0,50]");
    if (book_window < 1 || book_window > 1000) fail("book_window must be in [1,1000]");
    if (!(ratio > 0.0) || ratio > 1e6) fail("ratio must be in (0,1e6]");
    if (k && *k < 1) fail("k must be >= 1");
    if (!(alpha > 0.0) || alpha > 1e6) fail("alpha must be in (0,1e6]");
    if (!(dedup_threshold >= 0.0 && dedup_threshold <= 1.0)) {
      fail("dedup_threshold must be in [0,1]");
    }
    if (jobs < 1 || jobs > 1024) fail("jobs must be in [1,1024]");
    if (corpus_dir.empty() || output_dir.empty()) fail("paths must not be empty");
  }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

inline void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = nlohmann::json{{"corpus_dir", c.corpus_dir},
                     {"metadata", c.metadata},
                     {"output_dir", c.output_dir},
                     {"train_window", c.train_window},
                     {"book_window", c.book_window},
                     {"ratio", c.ratio},
                     {"k", c.k ? nlohmann::json(*c.k) : nlohmann::json(nullptr)},
                     {"alpha", c.alpha},
                     {"dedup_threshold", c.dedup_threshold},
                     {"seed", c.seed},
                     {"external_scores", c.external_scores
                                             ? nlohmann::json(*c.external_scores)
                                             : nlohmann::json(nullptr)},
                     {"jobs", c.jobs}};
}

// Missing keys keep their defaults; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, PipelineConfig& c) {
  static const std::set<std::string> kKeys = {
      "corpus_dir", "metadata", "output_dir", "train_window",
      "book_window", "ratio", "k", "alpha", "dedup_threshold",
      "seed", "external_scores", "jobs"};
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (kKeys.count(key) == 0) {
      throw Error(ErrorCode::kParse, "unknown config key '" + key + "'");
    }
  }
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("corpus_dir", c.corpus_dir);
  get("metadata", c.metadata);
  get("output_dir", c.output_dir);
  get("train_window", c.train_window);
  get("book_window", c.book_window);
  get("ratio", c.ratio);
  get("alpha", c.alpha);
  get("dedup_threshold", c.dedup_threshold);
  get("seed", c.seed);
  get("jobs", c.jobs);
  if (j.contains("k")) {
    c.k = j.at("k").is_null() ? std::nullopt : std::optional<int>(j.at("k").get<int>());
  }
  if (j.contains("external_scores")) {
    const auto& v = j.at("external_scores");
    c.external_scores =
        v.is_null() ? std::nullopt : std::optional<std::string>(v.get<std::string>());
  }
}

inline std::string config_to_string(const PipelineConfig& c) {
  return nlohmann::json(c).dump(2) + '\n';
}

inline PipelineConfig config_from_string(std::string_view content) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  PipelineConfig c;
  try {
    c = j.get<PipelineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_string(text::read_file(path));
}

// ---------------------------------------------------------------------------
// extract

struct ExtractedCorpus {
  std::vector<Document> documents;
  std::vector<TimeExpression> expressions;  // document order, then position
};

struct ExtractResult {
  ExtractedCorpus corpus;
  std::size_t books_read = 0;
  std::size_t duplicates_dropped = 0;
  HourCountTable counts;
};

namespace pipeline_detail {

inline std::filesystem::path out(const PipelineConfig& c, const std::string& name) {
  return std::filesystem::path(c.output_dir) / name;
}

inline std::vector<TimeExpression> extract_document(const Document& doc) {
  return filter_ocr_artifacts(extract_expressions(doc), doc);
}

inline std::vector<std::vector<TimeExpression>> by_document(
    const ExtractedCorpus& corpus) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    index.emplace(corpus.documents[i].meta.id, i);
  }
  std::vector<std::vector<TimeExpression>> out(corpus.documents.size());
  for (const auto& e : corpus.expressions) {
    const auto it = index.find(e.doc_id);
    if (it == index.end()) {
      throw Error(ErrorCode::kParse, "expression for unknown book " + e.doc_id);
    }
    out[it->second].push_back(e);
  }
  return out;
}

}  // namespace pipeline_detail

inline ExtractResult run_extract(const PipelineConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  if (!fs::is_directory(config.corpus_dir)) {
    throw Error(ErrorCode::kIo, "corpus directory not found: " + config.corpus_dir);
  }
  const auto metas = load_metadata(config.metadata);
  if (metas.empty()) throw Error(ErrorCode::kEmptyCorpus, "metadata lists no books");

  Corpus raw;
  raw.documents.resize(metas.size());
  parallel_for(metas.size(), static_cast<std::size_t>(config.jobs), [&](std::size_t i) {
    const std::string text = load_raw_book(config.corpus_dir, metas[i]);
    raw.documents[i] = segment_document(clean_text(text, metas[i].source), metas[i]);
  });

  ExtractResult result;
  result.books_read = metas.size();
  Corpus kept = deduplicate(raw, config.dedup_threshold);
  result.duplicates_dropped = metas.size() - kept.documents.size();

  std::vector<std::vector<TimeExpression>> found(kept.documents.size());
  parallel_for(kept.documents.size(), static_cast<std::size_t>(config.jobs),
               [&](std::size_t i) {
                 found[i] = pipeline_detail::extract_document(kept.documents[i]);
               });
  for (auto& f : found) {
    result.corpus.expressions.insert(result.corpus.expressions.end(), f.begin(), f.end());
  }
  result.corpus.documents = std::move(kept.documents);
  result.counts = tabulate_hours(result.corpus.expressions);

  std::vector<BookMeta> kept_meta;
  std::string sentences;
  for (const auto& d : result.corpus.documents) {
    kept_meta.push_back(d.meta);
    text::write_file(pipeline_detail::out(config, "clean/" + d.meta.id + ".txt"), d.body);
    sentences += sentence_records(d);
  }
  text::write_file(pipeline_detail::out(config, "corpus.tsv"), metadata_table(kept_meta));
  text::write_file(pipeline_detail::out(config, "sentences.tsv"), sentences);
  text::write_file(pipeline_detail::out(config, "expressions.tsv"),
                   expression_dump(result.corpus.expressions));
  text::write_file(pipeline_detail::out(config, "hour_counts.tsv"),
                   hour_count_table_tsv(result.counts));
  const HourBags bags = build_hour_bags(result.corpus.documents,
                                        result.corpus.expressions,
                                        config.train_window);
  text::write_file(pipeline_detail::out(config, "bags.tsv"), serialize_bags(bags));
  return result;
}

// Rebuilds documents and expressions from extract's artifacts.
inline ExtractedCorpus load_extracted(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  const fs::path corpus_tsv = pipeline_detail::out(config, "corpus.tsv");
  const fs::path expr_tsv = pipeline_detail::out(config, "expressions.tsv");
  if (!fs::exists(corpus_tsv) || !fs::exists(expr_tsv)) {
    throw Error(ErrorCode::kIo, "extract output missing in " + config.output_dir);
  }
  const auto metas = load_metadata(corpus_tsv);
  ExtractedCorpus out;
  out.documents.resize(metas.size());
  parallel_for(metas.size(), static_cast<std::size_t>(config.jobs), [&](std::size_t i) {
    out.documents[i] = segment_document(
        text::read_file(pipeline_detail::out(config, "clean/" + metas[i].id + ".txt")),
        metas[i]);
  });
  out.expressions = parse_expression_dump(text::read_file(expr_tsv));
  return out;
}

// Summary of the hour count table, one row per 12-hour value.
inline std::string extract_summary(const ExtractResult& r) {
  std::string s = "books\t" + std::to_string(r.books_read) + "\nduplicates\t" +
                  std::to_string(r.duplicates_dropped) + "\nexpressions\t" +
                  std::to_string(r.corpus.expressions.size()) + '\n';
  s += hour_count_table_tsv(r.counts);
  try {
    s += "resolution_rate\t" + text::format_fixed(resolution_rate(r.counts), 4) + '\n';
  } catch (const Error&) {
    s += "resolution_rate\t-\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// score-words

// (word, hour, score) rows. With `top`, only the best `top` hours of each
// word, best first; otherwise all 24 in hour order. Without `words`, every
// word seen at least `min_count` times.
inline std::string run_score_words(const PipelineConfig& config,
                                   const std::vector<std::string>& words,
                                   std::optional<std::size_t> top,
                                   std::int64_t min_count = 5) {
  const HourBags bags =
      parse_bags(text::read_file(pipeline_detail::out(config, "bags.tsv")));
  std::vector<std::string> chosen;
  if (words.empty()) {
    for (const auto& [w, c] : bags.global()) {
      if (c >= min_count) chosen.push_back(w);
    }
  } else {
    for (const auto& w : words) chosen.push_back(text::to_lower(w));
  }
  std::string out = "word\thour\tscore\n";
  for (const auto& w : chosen) {
    std::vector<int> hours;
    if (top) {
      hours = top_hours(w, bags, *top);
    } else {
      for (int h = 0; h < kHours; ++h) hours.push_back(h);
    }
    for (int h : hours) {
      out += w + '\t' + std::to_string(h) + '\t' +
             text::format_double(score(w, h, bags)) + '\n';
    }
  }
  text::write_file(pipeline_detail::out(config, "word_scores.tsv"), out);
  return out;
}

// ---------------------------------------------------------------------------
// train

struct TrainResult {
  MeridiemPredictor meridiem;
  HourPredictor hour;
  std::string report;
  std::size_t imputed = 0;
};

namespace pipeline_detail {

class Report {
 public:
  void add(const std::string& hour, const std::string& metric, double value) {
    rows_ += hour + '\t' + metric + '\t' + text::format_fixed(value, 6) + '\n';
  }
  void add_count(const std::string& metric, std::size_t value) {
    rows_ += "all\t" + metric + '\t' + std::to_string(value) + '\n';
  }
  std::string str() const { return "hour\tmetric\tvalue\n" + rows_; }

 private:
  std::string rows_;
};

inline void report_meridiem(Report& r, const std::string& prefix,
                            const MeridiemReport& m) {
  const auto agg = [&](const std::string& name, const MeridiemMetrics& v) {
    r.add("all", prefix + "." + name + ".accuracy", v.accuracy);
    r.add("all", prefix + "." + name + ".am_f1", v.am_f1);
    r.add("all", prefix + "." + name + ".pm_f1", v.pm_f1);
  };
  agg("micro", m.micro);
  agg("macro", m.macro);
  for (int h = 0; h < 12; ++h) {
    if (!m.per_hour[h]) continue;
    const std::string hs = std::to_string(h);
    r.add(hs, prefix + ".accuracy", m.per_hour[h]->accuracy);
    r.add(hs, prefix + ".am_f1", m.per_hour[h]->am_f1);
    r.add(hs, prefix + ".pm_f1", m.per_hour[h]->pm_f1);
  }
}

inline void report_hour(Report& r, const std::string& prefix, const HourReport& m) {
  r.add("all", prefix + ".mean_error", m.mean_error);
  for (int h = 0; h < kHours; ++h) {
    if (m.mean_error_by_hour[h]) {
      r.add(std::to_string(h), prefix + ".mean_error", *m.mean_error_by_hour[h]);
    }
  }
}

inline std::vector<SentenceWindow> covered(const std::vector<SentenceWindow>& ws,
                                           const MajorityBaseline& baseline) {
  std::vector<SentenceWindow> out;
  for (const auto& w : ws) {
    if (baseline.has(w.anchor_hour12)) out.push_back(w);
  }
  return out;
}

}  // namespace pipeline_detail

// Splits resolved windows 70/30 (train/test) and the train part 90/10
// (fit/validation), stratified by hour. AM/PM models learn from the fit part;
// their calls label the unresolved windows, which join the fit part to train
// the hour model.
inline TrainResult run_train(const PipelineConfig& config) {
  config.validate();
  const ExtractedCorpus corpus = load_extracted(config);
  const auto per_doc = pipeline_detail::by_document(corpus);
  std::vector<std::vector<SentenceWindow>> doc_windows(corpus.documents.size());
  parallel_for(corpus.documents.size(), static_cast<std::size_t>(config.jobs),
               [&](std::size_t i) {
                 doc_windows[i] = make_windows(corpus.documents[i], per_doc[i],
                                               config.train_window);
               });
  std::vector<SentenceWindow> resolved;
  std::vector<SentenceWindow> unresolved;
  for (auto& ws : doc_windows) {
    for (auto& w : ws) (w.hour24 ? resolved : unresolved).push_back(std::move(w));
  }
  const auto by_hour = [](const SentenceWindow& w) { return *w.hour24; };
  auto [train, test] = stratified_split(resolved, 0.7, config.seed, by_hour);
  auto [fit, validation] = stratified_split(train, 0.9, config.seed + 1, by_hour);
  if (fit.empty() || test.empty()) {
    throw Error(ErrorCode::kInsufficientLabels,
                "need resolved clock references in both training and test parts (have " +
                    std::to_string(resolved.size()) + ")");
  }

  TrainResult result;
  result.meridiem = train_meridiem(fit, config.alpha, config.seed);
  const MajorityBaseline baseline = majority_baseline(fit);

  pipeline_detail::Report report;
  report.add_count("windows.resolved", resolved.size());
  report.add_count("windows.unresolved", unresolved.size());
  report.add_count("windows.fit", fit.size());
  report.add_count("windows.validation", validation.size());
  report.add_count("windows.test", test.size());
  for (const auto& [name, part] :
       {std::pair{std::string("validation"), &validation}, std::pair{std::string("test"), &test}}) {
    const auto eval = pipeline_detail::covered(*part, baseline);
    if (eval.empty()) continue;
    pipeline_detail::report_meridiem(report, "meridiem.nb." + name,
                                     evaluate_meridiem(result.meridiem, eval));
    pipeline_detail::report_meridiem(report, "meridiem.baseline." + name,
                                     evaluate_meridiem(baseline, eval));
  }

  result.imputed = impute_hours(unresolved, result.meridiem);
  report.add_count("windows.imputed", result.imputed);
  std::vector<SentenceWindow> hour_train = fit;
  for (const auto& w : unresolved) {
    if (w.hour24) hour_train.push_back(w);
  }
  result.hour = train_hour(hour_train, config.alpha, config.seed);
  pipeline_detail::report_hour(report, "hour.nb.test", evaluate_hour(result.hour, test));
  pipeline_detail::report_hour(report, "hour.noon.test",
                               evaluate_hour(ConstantHourScorer(12), test));
  result.report = report.str();

  text::write_file(pipeline_detail::out(config, "meridiem.model"),
                   serialize_meridiem(result.meridiem));
  text::write_file(pipeline_detail::out(config, "hour.model"), serialize_hour(result.hour));
  text::write_file(pipeline_detail::out(config, "report.tsv"), result.report);
  return result;
}

// ---------------------------------------------------------------------------
// segment

struct BookSegmentation {
  std::string book_id;
  std::vector<BookWindow> windows;
  Segmentation dp;
  Segmentation max_hour;
  Segmentation noon;
  PseudoTruth truth;
  std::optional<double> dp_error;
  std::optional<double> max_hour_error;
  std::optional<double> noon_error;
  std::size_t annotated = 0;
};

struct SegmentResult {
  std::vector<BookSegmentation> books;
  std::string tracks;
  std::string summary;
};

namespace pipeline_detail {

inline std::string error_field(const std::optional<double>& e) {
  return e ? text::format_fixed(*e, 4) : "-";
}

}  // namespace pipeline_detail

inline BookSegmentation segment_book(const Document& doc,
                                     const std::vector<TimeExpression>& expressions,
                                     const HourScorer& scorer,
                                     const PipelineConfig& config) {
  const auto window_size = static_cast<std::size_t>(config.book_window);
  BookSegmentation b;
  b.book_id = doc.meta.id;
  b.windows = book_windows(doc, window_size);
  const auto p = book_distributions(doc, expressions, scorer, window_size);
  const std::size_t n = p.size();
  const std::size_t k = config.k ? std::min<std::size_t>(static_cast<std::size_t>(*config.k), n)
                                 : choose_k(n, config.ratio);
  b.dp = dp_partition(p, k);
  b.max_hour = max_hour_baseline(p, k);
  b.noon = noon_baseline(std::span<const HourDistribution>(p));
  b.truth = build_pseudo_truth(doc, expressions, window_size);
  if (b.truth.eligible) {
    for (const auto& refs : b.truth.track) b.annotated += refs.empty() ? 0 : 1;
    b.dp_error = evaluate_track(hour_track(b.dp, n), b.truth.track);
    b.max_hour_error = evaluate_track(hour_track(b.max_hour, n), b.truth.track);
    b.noon_error = evaluate_track(hour_track(b.noon, n), b.truth.track);
  }
  return b;
}

// Segments the listed books (all when `book_ids` is empty) with external
// scores when configured, else the hour model at `model_path` (default: the
// one train wrote).
inline SegmentResult run_segment(
    const PipelineConfig& config, const std::vector<std::string>& book_ids = {},
    const std::optional<std::filesystem::path>& model_path = std::nullopt) {
  config.validate();
  const ExtractedCorpus corpus = load_extracted(config);
  const auto per_doc = pipeline_detail::by_document(corpus);

  std::unique_ptr<HourScorer> scorer;
  if (config.external_scores) {
    scorer = std::make_unique<ExternalHourScores>(
        ExternalHourScores::parse(text::read_file(*config.external_scores)));
  } else {
    scorer = std::make_unique<HourPredictor>(
        parse_hour(text::read_file(model_path ? *model_path
                                              : pipeline_detail::out(config, "hour.model"))));
  }

  std::vector<std::size_t> selected;
  if (book_ids.empty()) {
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) selected.push_back(i);
  } else {
    for (const auto& id : book_ids) {
      const auto it = std::find_if(corpus.documents.begin(), corpus.documents.end(),
                                   [&](const Document& d) { return d.meta.id == id; });
      if (it == corpus.documents.end()) {
        throw Error(ErrorCode::kUnknownBook, "unknown book id '" + id + "'");
      }
      selected.push_back(static_cast<std::size_t>(it - corpus.documents.begin()));
    }
  }

  SegmentResult result;
  result.books.resize(selected.size());
  parallel_for(selected.size(), static_cast<std::size_t>(config.jobs), [&](std::size_t i) {
    const std::size_t d = selected[i];
    result.books[i] = segment_book(corpus.documents[d], per_doc[d], *scorer, config);
  });

  std::string tracks = "book_id\twindow_index\tfirst_sentence\tlast_sentence\thour\tsegment_id\n";
  std::string summary =
      "book_id\tn_windows\tk\tobjective\tstatus\tannotated_windows\tdp_error\t"
      "max_hour_error\tnoon_error\n";
  double book_sum[3] = {0, 0, 0};
  double window_sum[3] = {0, 0, 0};
  std::size_t evaluated = 0;
  std::size_t annotated = 0;
  for (const auto& b : result.books) {
    const std::size_t n = b.windows.size();
    const auto track = hour_track(b.dp, n);
    const auto ids = segment_ids(b.dp, n);
    for (std::size_t j = 0; j < n; ++j) {
      tracks += b.book_id + '\t' + std::to_string(j) + '\t' +
                std::to_string(b.windows[j].first_sentence) + '\t' +
                std::to_string(b.windows[j].last_sentence) + '\t' +
                std::to_string(track[j]) + '\t' + std::to_string(ids[j]) + '\n';
    }
    summary += b.book_id + '\t' + std::to_string(n) + '\t' + std::to_string(b.dp.k()) +
               '\t' + text::format_fixed(b.dp.objective, 6) + '\t' +
               (b.truth.eligible ? "evaluated" : "excluded") + '\t' +
               std::to_string(b.annotated) + '\t' +
               pipeline_detail::error_field(b.dp_error) + '\t' +
               pipeline_detail::error_field(b.max_hour_error) + '\t' +
               pipeline_detail::error_field(b.noon_error) + '\n';
    if (b.truth.eligible) {
      const double errs[3] = {*b.dp_error, *b.max_hour_error, *b.noon_error};
      for (int m = 0; m < 3; ++m) {
        book_sum[m] += errs[m];
        window_sum[m] += errs[m] * static_cast<double>(b.annotated);
      }
      ++evaluated;
      annotated += b.annotated;
    }
  }
  if (evaluated > 0) {
    const auto row = [&](const std::string& name, const double* sums, double denom,
                         std::size_t count) {
      summary += name + "\t-\t-\t-\tevaluated\t" + std::to_string(count);
      for (int m = 0; m < 3; ++m) summary += '\t' + text::format_fixed(sums[m] / denom, 4);
      summary += '\n';
    };
    row("mean_per_book", book_sum, static_cast<double>(evaluated), evaluated);
    row("mean_per_window", window_sum, static_cast<double>(annotated), annotated);
  }
  result.tracks = tracks;
  result.summary = summary;
  text::write_file(pipeline_detail::out(config, "tracks.tsv"), tracks);
  text::write_file(pipeline_detail::out(config, "segment_summary.tsv"), summary);
  return result;
}

// ---------------------------------------------------------------------------
// trends

inline std::vector<BookTrack> load_tracks(const PipelineConfig& config) {
  const auto metas = load_metadata(pipeline_detail::out(config, "corpus.tsv"));
  std::map<std::string, std::optional<int>> years;
  for (const auto& m : metas) years[m.id] = m.author_birth_year;
  std::vector<BookTrack> out;
  std::map<std::string, std::size_t> index;
  const auto lines = text::read_lines(pipeline_detail::out(config, "tracks.tsv"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = text::split(lines[i], '\t');
    if (f.size() != 6) throw Error(ErrorCode::kParse, "bad tracks row " + std::to_string(i + 1));
    const std::string id(f[0]);
    const auto y = years.find(id);
    if (y == years.end()) throw Error(ErrorCode::kUnknownBook, "unknown book id '" + id + "'");
    auto [it, inserted] = index.emplace(id, out.size());
    if (inserted) out.push_back({id, y->second, {}});
    out[it->second].hours.push_back(text::parse_int<int>(f[4]));
  }
  return out;
}

inline std::vector<CohortRow> run_trends(const PipelineConfig& config) {
  config.validate();
  const auto tracks = load_tracks(config);
  const auto rows = cohort_shares(tracks);
  text::write_file(pipeline_detail::out(config, "cohorts.tsv"), cohort_table_tsv(rows));
  return rows;
}

}  // namespace timeflow
