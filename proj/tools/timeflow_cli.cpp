// timeflow: command-line driver for the corpus pipeline.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "timeflow/pipeline.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> corpus_dir;
  std::optional<std::string> metadata;
  std::optional<std::string> output_dir;
  std::optional<int> window_sentences;
  std::optional<double> ratio;
  std::optional<int> k;
  std::optional<std::string> external_scores;
  std::optional<std::string> model;
};

timeflow::PipelineConfig resolve(const Overrides& o) {
  timeflow::PipelineConfig c;
  if (!o.config_path.empty()) c = timeflow::load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.corpus_dir) c.corpus_dir = *o.corpus_dir;
  if (o.metadata) c.metadata = *o.metadata;
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.window_sentences) c.book_window = *o.window_sentences;
  if (o.ratio) c.ratio = *o.ratio;
  if (o.k) c.k = *o.k;
  if (o.external_scores) c.external_scores = *o.external_scores;
  c.validate();
  return c;
}

void print_error(std::string_view code, std::string_view message) {
  std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clock-time extraction, hour-of-day classification and book "
               "time-flow segmentation"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config_path, "JSON pipeline configuration");
  app.add_option("--seed", o.seed, "Seed for the train/test splits");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--corpus-dir", o.corpus_dir, "Directory with the raw books");
  app.add_option("--metadata", o.metadata, "Metadata TSV");
  app.add_option("--output-dir", o.output_dir, "Directory for all artifacts");

  auto* extract = app.add_subcommand("extract", "Clean, segment and tag the corpus");

  auto* score_words = app.add_subcommand("score-words", "Word/hour affinity scores");
  std::vector<std::string> words;
  std::optional<std::size_t> top;
  std::int64_t min_count = 5;
  score_words->add_option("--word", words, "Word to score (repeatable)");
  score_words->add_option("--top", top, "Only the best N hours per word");
  score_words->add_option("--min-count", min_count,
                          "Corpus frequency needed when no --word is given");

  auto* train = app.add_subcommand("train", "Train AM/PM and hour-of-day models");

  auto* segment = app.add_subcommand("segment", "Infer per-book hour tracks");
  std::vector<std::string> books;
  segment->add_option("--book", books, "Book id (repeatable; default all)");
  segment->add_option("--window-sentences", o.window_sentences, "Sentences per book window");
  auto* ratio_opt = segment->add_option("--ratio", o.ratio, "Windows per segment");
  segment->add_option("--k", o.k, "Fixed number of segments")->excludes(ratio_opt);
  segment->add_option("--model", o.model, "Hour model file (default <output>/hour.model)");
  segment->add_option("--external-scores", o.external_scores,
                      "Per-window score records to use instead of the model");

  auto* trends = app.add_subcommand("trends", "Hour shares per birth-year cohort");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }

  try {
    const timeflow::PipelineConfig config = resolve(o);
    if (extract->parsed()) {
      std::cout << timeflow::extract_summary(timeflow::run_extract(config));
    } else if (score_words->parsed()) {
      std::cout << timeflow::run_score_words(config, words, top, min_count);
    } else if (train->parsed()) {
      std::cout << timeflow::run_train(config).report;
    } else if (segment->parsed()) {
      std::optional<std::filesystem::path> model;
      if (o.model) model = *o.model;
      std::cout << timeflow::run_segment(config, books, model).summary;
    } else if (trends->parsed()) {
      std::cout << timeflow::cohort_table_tsv(timeflow::run_trends(config));
    }
  } catch (const timeflow::Error& e) {
    print_error(timeflow::error_code_name(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
