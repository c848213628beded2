#pragma once

// Book loading, cleaning, paragraph/sentence/token segmentation and corpus
// deduplication.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "timeflow/error.hpp"
#include "timeflow/text.hpp"

namespace timeflow {

enum class SourceKind { kGutenberg, kPageFolder };

inline std::string_view source_kind_name(SourceKind kind) {
  return kind == SourceKind::kGutenberg ? "gutenberg" : "page-folder";
}

inline SourceKind parse_source_kind(std::string_view s) {
  const std::string lower = text::to_lower(text::trim(s));
  if (lower == "gutenberg" || lower == "gutenberg-style") {
    return SourceKind::kGutenberg;
  }
  if (lower == "page-folder" || lower == "page-folder-style") {
    return SourceKind::kPageFolder;
  }
  throw Error(ErrorCode::kParse, "unknown source kind '" + std::string(s) + "'");
}

struct BookMeta {
  std::string id;
  std::string title;
  std::string author;
  std::optional<int> author_birth_year;
  SourceKind source = SourceKind::kGutenberg;

  friend bool operator==(const BookMeta&, const BookMeta&) = default;
};

inline constexpr int kMinBirthYear = 1000;
inline constexpr int kMaxBirthYear = 2100;

// A token is an exact slice [begin, end) of the document body.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Sentence {
  std::vector<Token> tokens;
};

struct Paragraph {
  std::vector<Sentence> sentences;
};

// Position of a sentence inside a document.
struct SentenceRef {
  std::size_t paragraph = 0;
  std::size_t sentence = 0;

  friend auto operator<=>(const SentenceRef&, const SentenceRef&) = default;
};

struct Document {
  BookMeta meta;
  std::string body;
  std::vector<Paragraph> paragraphs;

  // Sentences in reading order, independent of paragraph boundaries.
  std::vector<SentenceRef> sentence_refs() const {
    std::vector<SentenceRef> refs;
    for (std::size_t p = 0; p < paragraphs.size(); ++p) {
      for (std::size_t s = 0; s < paragraphs[p].sentences.size(); ++s) {
        refs.push_back({p, s});
      }
    }
    return refs;
  }

  const Sentence& sentence(SentenceRef ref) const {
    return paragraphs.at(ref.paragraph).sentences.at(ref.sentence);
  }

  std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto& p : paragraphs) n += p.sentences.size();
    return n;
  }
};

struct Corpus {
  std::vector<Document> documents;
};

// ---------------------------------------------------------------------------
// Cleaning

struct CleanOptions {
  std::vector<std::string> start_markers = {
      "*** START OF THIS PROJECT GUTENBERG",
      "*** START OF THE PROJECT GUTENBERG",
      "***START OF THE PROJECT GUTENBERG",
      "*END*THE SMALL PRINT",
  };
  std::vector<std::string> end_markers = {
      "*** END OF THIS PROJECT GUTENBERG",
      "*** END OF THE PROJECT GUTENBERG",
      "***END OF THE PROJECT GUTENBERG",
      "End of the Project Gutenberg",
      "End of Project Gutenberg",
  };
  // Skip front matter up to the first chapter heading that is followed by
  // prose, searching only this leading fraction of the remaining lines.
  bool skip_to_first_chapter = true;
  double max_front_matter_fraction = 0.5;
};

namespace detail {

inline std::string normalize_characters(std::string_view raw) {
  struct Mapping {
    std::string_view from;
    std::string_view to;
  };
  static constexpr Mapping kMappings[] = {
      {"\xE2\x80\x98", "'"},   {"\xE2\x80\x99", "'"},  {"\xE2\x80\x9C", "\""},
      {"\xE2\x80\x9D", "\""},  {"\xE2\x80\x94", "--"}, {"\xE2\x80\x93", "-"},
      {"\xE2\x80\xA6", "..."}, {"\xC2\xA0", " "},
  };
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  if (raw.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  while (i < raw.size()) {
    if (raw[i] == '\r') {
      out += '\n';
      i += (i + 1 < raw.size() && raw[i + 1] == '\n') ? 2 : 1;
      continue;
    }
    bool mapped = false;
    if (static_cast<unsigned char>(raw[i]) >= 0x80) {
      for (const auto& m : kMappings) {
        if (raw.substr(i, m.from.size()) == m.from) {
          out += m.to;
          i += m.from.size();
          mapped = true;
          break;
        }
      }
    }
    if (!mapped) out += raw[i++];
  }
  return out;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  return text::to_lower(haystack).find(text::to_lower(needle)) !=
         std::string::npos;
}

inline bool is_blank(std::string_view line) {
  return text::trim(line).empty();
}

inline bool is_chapter_heading(std::string_view line) {
  static const std::regex kHeading(
      R"(^(chapter|book|part)\s+([ivxlcdm]+|\d+|one|two|three|four|five|six|seven|eight|nine|ten|the\s+first|first)\b.*$)",
      std::regex::icase);
  const std::string_view t = text::trim(line);
  if (t.empty() || t.size() > 80) return false;
  return std::regex_match(std::string(t), kHeading);
}

}  // namespace detail

// Strips boilerplate around the body of a book. Output is newline-normalized,
// uses ASCII quotes/dashes, has no leading/trailing blank lines and ends with
// one '\n'. Applying it twice gives the same result as applying it once.
inline std::string clean_text(std::string_view raw, SourceKind source,
                              const CleanOptions& options = {}) {
  (void)source;  // both source styles share the same rules after loading
  if (raw.size() >= 2 &&
      ((raw[0] == '\xFF' && raw[1] == '\xFE') ||
       (raw[0] == '\xFE' && raw[1] == '\xFF'))) {
    throw Error(ErrorCode::kUnsupportedEncoding, "UTF-16 input");
  }
  if (!text::is_valid_utf8(raw)) {
    throw Error(ErrorCode::kUnsupportedEncoding, "input is not valid UTF-8");
  }
  const std::string normalized = detail::normalize_characters(raw);
  std::vector<std::string_view> lines = text::split(normalized, '\n');

  std::size_t first = 0;
  std::size_t last = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const bool is_start =
        std::any_of(options.start_markers.begin(), options.start_markers.end(),
                    [&](const std::string& m) {
                      return detail::contains_ci(lines[i], m);
                    });
    if (is_start) {
      first = i + 1;
      break;
    }
  }
  for (std::size_t i = first; i < lines.size(); ++i) {
    const bool is_end =
        std::any_of(options.end_markers.begin(), options.end_markers.end(),
                    [&](const std::string& m) {
                      return detail::contains_ci(lines[i], m);
                    });
    if (is_end) {
      last = i;
      break;
    }
  }

  if (options.skip_to_first_chapter && last > first) {
    const auto limit = first + static_cast<std::size_t>(
                                   options.max_front_matter_fraction *
                                   static_cast<double>(last - first));
    for (std::size_t i = first; i < last && i <= limit; ++i) {
      if (!detail::is_chapter_heading(lines[i])) continue;
      std::size_t next = i + 1;
      while (next < last && detail::is_blank(lines[next])) ++next;
      if (next < last && !detail::is_chapter_heading(lines[next])) {
        first = i;
        break;
      }
    }
  }

  while (first < last && detail::is_blank(lines[first])) ++first;
  while (last > first && detail::is_blank(lines[last - 1])) --last;
  if (first >= last) throw Error(ErrorCode::kEmptyBody, "no body text left");

  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    std::string_view line = lines[i];
    while (!line.empty() && text::is_space(line.back())) line.remove_suffix(1);
    out += line;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Segmentation

namespace detail {

inline const std::set<std::string, std::less<>>& abbreviations() {
  // Lowercased, without the trailing period.
  static const std::set<std::string, std::less<>> kList = {
      "mr", "mrs", "ms", "dr", "st", "jr", "sr", "prof", "rev", "capt",
      "col", "gen", "lt", "sgt", "hon", "mt", "messrs", "mme", "mlle", "no",
      "vs", "etc", "esq", "gov", "sen", "rep", "ft", "vol", "ch", "co"};
  return kList;
}

// Abbreviations after which a sentence never ends.
inline bool is_title_abbreviation(std::string_view lower_word) {
  static const std::set<std::string, std::less<>> kTitles = {
      "mr", "mrs", "ms", "dr", "st", "prof", "rev", "capt", "col", "gen",
      "lt", "sgt", "hon", "mt", "messrs", "mme", "mlle", "gov", "sen", "rep"};
  return kTitles.count(lower_word) > 0;
}

inline bool is_word_byte(char c) {
  return text::is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

inline bool is_closer(std::string_view tok) {
  return tok == "\"" || tok == "'" || tok == ")" || tok == "]" || tok == "''";
}

inline bool is_terminal(std::string_view tok) {
  return tok == "." || tok == "!" || tok == "?" || tok == "..." ||
         tok == "?!" || tok == "!?" || tok == "!!" || tok == "??";
}

inline bool is_dotted_letters(std::string_view tok) {
  // a.m. / p.m / U.S.A. / e.g.
  if (tok.size() < 3) return false;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    const bool letter_slot = (i % 2 == 0);
    if (letter_slot && !text::is_ascii_alnum(tok[i])) return false;
    if (!letter_slot && tok[i] != '.') return false;
  }
  return true;
}

struct RawToken {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<RawToken> tokenize_range(std::string_view body,
                                            std::size_t begin,
                                            std::size_t end) {
  std::vector<RawToken> out;
  std::size_t i = begin;
  while (i < end) {
    const char c = body[i];
    if (text::is_space(c)) {
      ++i;
      continue;
    }
    if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < end) {
        if (is_word_byte(body[j])) {
          ++j;
          continue;
        }
        const bool inner_next = j + 1 < end && is_word_byte(body[j + 1]);
        if ((body[j] == '\'' || body[j] == '-') && inner_next) {
          j += 1;
          continue;
        }
        if ((body[j] == ':' || body[j] == '.' || body[j] == ',') &&
            j > i && text::is_ascii_digit(body[j - 1]) && j + 1 < end &&
            text::is_ascii_digit(body[j + 1])) {
          j += 1;
          continue;
        }
        break;
      }
      const std::string_view word = body.substr(i, j - i);
      if (j < end && body[j] == '.') {
        // Dotted letter sequences such as "a.m." or "U.S.".
        std::size_t k = j;
        if (word.size() == 1 && text::is_ascii_alnum(word[0])) {
          while (k + 2 <= end && body[k] == '.' && k + 1 < end &&
                 text::is_ascii_alnum(body[k + 1]) &&
                 (k + 2 == end || !is_word_byte(body[k + 2]))) {
            k += 2;
          }
        }
        if (k > j) {
          if (k < end && body[k] == '.') ++k;
          out.push_back({i, k});
          i = k;
          continue;
        }
        const std::string lower = text::to_lower(word);
        const bool single_initial =
            word.size() == 1 && word[0] >= 'A' && word[0] <= 'Z';
        if (abbreviations().count(lower) > 0 || single_initial) {
          out.push_back({i, j + 1});
          i = j + 1;
          continue;
        }
      }
      out.push_back({i, j});
      i = j;
      continue;
    }
    // Punctuation: runs of one repeated character form one token.
    std::size_t j = i + 1;
    while (j < end && body[j] == c && (c == '.' || c == '-' || c == '!' ||
                                       c == '?' || c == '\'' || c == '*')) {
      ++j;
    }
    out.push_back({i, j});
    i = j;
  }
  return out;
}

inline bool ends_sentence(std::string_view body,
                          const std::vector<RawToken>& toks, std::size_t i) {
  const std::string_view tok =
      body.substr(toks[i].begin, toks[i].end - toks[i].begin);
  if (is_terminal(tok)) return true;
  if (tok.size() > 1 && tok.back() == '.') {
    std::string lower = text::to_lower(tok.substr(0, tok.size() - 1));
    if (is_title_abbreviation(lower)) return false;
    if (tok.size() == 2 && tok[0] >= 'A' && tok[0] <= 'Z') return false;
    // a.m./p.m./etc. end the sentence only before a capitalized word.
    if (i + 1 < toks.size()) {
      const char next = body[toks[i + 1].begin];
      return next >= 'A' && next <= 'Z';
    }
    return true;
  }
  return false;
}

}  // namespace detail

// Splits cleaned text into paragraphs (blank-line separated), sentences
// (terminal punctuation with an abbreviation guard) and tokens (exact slices
// of `body`).
inline Document segment_document(std::string body, BookMeta meta) {
  Document doc;
  doc.meta = std::move(meta);
  doc.body = std::move(body);
  const std::string_view b = doc.body;

  std::vector<std::pair<std::size_t, std::size_t>> paragraph_ranges;
  std::size_t pos = 0;
  std::optional<std::size_t> para_start;
  while (pos <= b.size()) {
    std::size_t eol = b.find('\n', pos);
    if (eol == std::string_view::npos) eol = b.size();
    const bool blank = detail::is_blank(b.substr(pos, eol - pos));
    if (blank) {
      if (para_start) paragraph_ranges.emplace_back(*para_start, pos);
      para_start.reset();
    } else if (!para_start) {
      para_start = pos;
    }
    if (eol == b.size()) break;
    pos = eol + 1;
  }
  if (para_start) paragraph_ranges.emplace_back(*para_start, b.size());

  for (const auto& [pb, pe] : paragraph_ranges) {
    const auto raw = detail::tokenize_range(b, pb, pe);
    if (raw.empty()) continue;
    Paragraph para;
    Sentence current;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      current.tokens.push_back(
          {std::string(b.substr(raw[i].begin, raw[i].end - raw[i].begin)),
           raw[i].begin, raw[i].end});
      if (!detail::ends_sentence(b, raw, i)) continue;
      // Attach closing quotes/brackets that hug the terminal mark.
      while (i + 1 < raw.size() && raw[i + 1].begin == raw[i].end &&
             detail::is_closer(b.substr(raw[i + 1].begin,
                                        raw[i + 1].end - raw[i + 1].begin))) {
        ++i;
        current.tokens.push_back(
            {std::string(b.substr(raw[i].begin, raw[i].end - raw[i].begin)),
             raw[i].begin, raw[i].end});
      }
      const bool next_lower =
          i + 1 < raw.size() && b[raw[i + 1].begin] >= 'a' &&
          b[raw[i + 1].begin] <= 'z';
      if (!next_lower) {
        para.sentences.push_back(std::move(current));
        current = Sentence{};
      }
    }
    if (!current.tokens.empty()) para.sentences.push_back(std::move(current));
    doc.paragraphs.push_back(std::move(para));
  }
  if (doc.paragraphs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "body has no tokens");
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Deduplication

namespace detail {

inline std::string normalize_key_text(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == '\'') continue;
    if (text::is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    } else {
      pending_space = true;
    }
  }
  return out;
}

}  // namespace detail

// "title|surname", lowercased with punctuation removed. A "Last, First"
// author takes the part before the comma as the surname.
inline std::string dedup_key(const BookMeta& meta) {
  const std::string title = detail::normalize_key_text(meta.title);
  std::string_view author = meta.author;
  std::string surname;
  if (const auto comma = author.find(','); comma != std::string_view::npos) {
    surname = detail::normalize_key_text(author.substr(0, comma));
  } else {
    const auto words = text::split_whitespace(detail::normalize_key_text(author));
    if (!words.empty()) surname = words.back();
  }
  return title + "|" + surname;
}

inline double key_jaccard(std::string_view a, std::string_view b) {
  const auto tokens = [](std::string_view key) {
    std::set<std::string, std::less<>> out;
    std::string buf(key);
    std::replace(buf.begin(), buf.end(), '|', ' ');
    for (auto& w : text::split_whitespace(buf)) out.insert(std::move(w));
    return out;
  };
  const auto ta = tokens(a);
  const auto tb = tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : ta) common += tb.count(t);
  const std::size_t uni = ta.size() + tb.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

// Groups documents whose keys are linked by a chain of pairwise similarities
// >= threshold and keeps the first of each group. Input order is preserved.
inline Corpus deduplicate(const Corpus& corpus, double similarity_threshold) {
  if (!(similarity_threshold >= 0.0 && similarity_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in [0,1]");
  }
  const std::size_t n = corpus.documents.size();
  std::vector<std::string> keys;
  keys.reserve(n);
  for (const auto& d : corpus.documents) keys.push_back(dedup_key(d.meta));

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (key_jaccard(keys[i], keys[j]) >= similarity_threshold) {
        const std::size_t ri = find(i);
        const std::size_t rj = find(j);
        // The root is always the earliest member.
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  Corpus out;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) == i) out.documents.push_back(corpus.documents[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

// Tab-separated metadata with a header row:
// id  title  author  author_birth_year  source
inline std::vector<BookMeta> load_metadata(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  std::vector<BookMeta> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const auto f = text::split(lines[i], '\t');
    if (f.size() != 5) {
      throw Error(ErrorCode::kParse, path.string() + ":" +
                                         std::to_string(i + 1) +
                                         ": expected 5 fields");
    }
    BookMeta meta;
    meta.id = std::string(text::trim(f[0]));
    meta.title = std::string(f[1]);
    meta.author = std::string(f[2]);
    if (!text::trim(f[3]).empty()) {
      const int year = text::parse_int<int>(text::trim(f[3]));
      if (year < kMinBirthYear || year > kMaxBirthYear) {
        throw Error(ErrorCode::kInvalidArgument,
                    "birth year out of range for " + meta.id);
      }
      meta.author_birth_year = year;
    }
    meta.source = parse_source_kind(f[4]);
    if (meta.id.empty() || !seen.insert(meta.id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "missing or duplicate id '" + meta.id + "'");
    }
    out.push_back(std::move(meta));
  }
  return out;
}

inline std::string metadata_table(const std::vector<BookMeta>& metas) {
  std::string out = "id\ttitle\tauthor\tauthor_birth_year\tsource\n";
  for (const auto& m : metas) {
    out += m.id + '\t' + m.title + '\t' + m.author + '\t' +
           (m.author_birth_year ? std::to_string(*m.author_birth_year) : "") +
           '\t' + std::string(source_kind_name(m.source)) + '\n';
  }
  return out;
}

// Gutenberg-style books live in <dir>/<id>.txt; page-folder books are
// directories <dir>/<id>/ whose page files are joined in filename order.
inline std::string load_raw_book(const std::filesystem::path& corpus_dir,
                                 const BookMeta& meta) {
  namespace fs = std::filesystem;
  if (meta.source == SourceKind::kGutenberg) {
    return text::read_file(corpus_dir / (meta.id + ".txt"));
  }
  const fs::path dir = corpus_dir / meta.id;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "missing page folder " + dir.string());
  }
  std::vector<fs::path> pages;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) pages.push_back(entry.path());
  }
  std::sort(pages.begin(), pages.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  std::string out;
  for (const auto& page : pages) {
    std::string content = text::read_file(page);
    if (!content.empty() && content.back() != '\n') content += '\n';
    out += content;
  }
  return out;
}

// One record per sentence: doc_id, paragraph, sentence, begin, end, text.
inline std::string sentence_records(const Document& doc) {
  std::string out;
  for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
    const auto& sentences = doc.paragraphs[p].sentences;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      const auto& toks = sentences[s].tokens;
      const std::size_t begin = toks.front().begin;
      const std::size_t end = toks.back().end;
      out += text::escape_field(doc.meta.id) + '\t' + std::to_string(p) +
             '\t' + std::to_string(s) + '\t' + std::to_string(begin) + '\t' +
             std::to_string(end) + '\t' +
             text::escape_field(
                 std::string_view(doc.body).substr(begin, end - begin)) +
             '\n';
    }
  }
  return out;
}

}  // namespace timeflow
