// make_corpus: writes the small synthetic corpus bundled under data/corpus.
//
// Each book is a day told in scenes. A scene sits at one hour, opens with a
// day-part word, mentions its clock time a few times (mostly with an
// explicit am/pm cue) and talks about things typical of that hour. Output is
// a pure function of the seed.

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "timeflow/text.hpp"

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[pick(rng, v.size())];
}

bool chance(Rng& rng, int percent) { return static_cast<int>(rng() % 100) < percent; }

const std::array<std::vector<std::string>, 24> kHourWords = {{
    {"lantern", "owl", "hush", "vigil", "embers"},
    {"ghost", "whisper", "cellar", "shiver", "draught"},
    {"burglar", "creak", "moonlight", "dread", "prowler"},
    {"insomnia", "ticking", "fever", "pallor", "sleeplessness"},
    {"milkcart", "frost", "stirring", "rooster", "ploughman"},
    {"dawn", "larks", "dew", "mist", "milking"},
    {"washstand", "shaving", "curtains", "yawning", "razor"},
    {"breakfast", "porridge", "kettle", "toast", "marmalade"},
    {"omnibus", "clerks", "newspaper", "satchel", "commuters"},
    {"schoolroom", "lessons", "ledger", "inkwell", "governess"},
    {"market", "errands", "grocer", "basket", "haggling"},
    {"sermon", "chapel", "pews", "hymn", "vicar"},
    {"luncheon", "mutton", "sunshine", "picnic", "hamper"},
    {"dessert", "siesta", "drowsiness", "napkins", "pudding"},
    {"croquet", "parasol", "promenade", "lawn", "mallets"},
    {"visitors", "calling", "callers", "parlour", "gossip"},
    {"tea", "scones", "teacups", "biscuits", "crumpets"},
    {"homeward", "factory", "whistle", "labourers", "foreman"},
    {"sunset", "lamplighter", "dusk", "shutters", "swallows"},
    {"dinner", "soup", "claret", "roast", "tureen"},
    {"opera", "footlights", "orchestra", "applause", "overture"},
    {"whist", "brandy", "cigars", "billiards", "decanter"},
    {"bedtime", "nightcap", "candlestick", "slippers", "pillows"},
    {"ballroom", "waltz", "gaslight", "carriages", "quadrille"},
}};

const std::vector<std::string> kNames = {"Margaret", "Thomas", "Eliza", "Hugh",
                                         "Clara", "Edmund", "Agnes", "Walter"};
const std::vector<std::string> kSurnames = {"Ashby", "Pryor", "Lennox", "Marlow",
                                            "Tate", "Coombe"};
const std::vector<std::string> kVerbs = {"noticed", "admired", "watched", "mentioned",
                                         "ignored", "remembered", "approached", "praised"};
const std::vector<std::string> kObjects = {"door", "window", "letter", "road", "garden",
                                           "staircase", "hallway", "bench", "gate"};
const std::vector<std::string> kAdjectives = {"quiet", "bright", "grey", "warm", "cold",
                                              "pleasant", "tedious", "strange"};
const std::vector<std::string> kExclaims = {"What a", "Such a", "Look at the",
                                            "Never mind the"};

const std::array<std::string, 12> kHourNames = {"twelve", "one", "two", "three", "four",
                                                "five", "six", "seven", "eight", "nine",
                                                "ten", "eleven"};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string daypart_for(int h) {
  if (h >= 6 && h <= 11) return "morning";
  if (h >= 12 && h <= 16) return "afternoon";
  if (h >= 17 && h <= 20) return "evening";
  return "night";
}

// A phrase naming hour h with an am/pm cue.
std::string resolved_phrase(Rng& rng, int h) {
  if (h == 12) return chance(rng, 50) ? "noon" : "twelve o'clock noon";
  if (h == 0) return "midnight";
  const int h12 = h % 12;
  const std::string word = kHourNames[h12];
  std::string cue;
  if (h < 12) {
    cue = "in the morning";
  } else if (h < 17) {
    cue = "in the afternoon";
  } else if (h < 22) {
    cue = "in the evening";
  } else {
    cue = "at night";
  }
  switch (pick(rng, 4)) {
    case 0: return word + " o'clock " + cue;
    case 1: return "half past " + word + " " + cue;
    case 2: return std::to_string(h12) + ":" + (chance(rng, 50) ? "15" : "40") +
                   (h < 12 ? " a.m." : " p.m.");
    default: return word + " " + cue;
  }
}

// A phrase naming the 12-hour value of h without a cue.
std::string bare_phrase(Rng& rng, int h) {
  const std::string word = kHourNames[h % 12];
  return chance(rng, 60) ? word + " o'clock" : "half past " + word;
}

std::string clock_sentence(Rng& rng, int h, bool resolved) {
  const std::string t = resolved ? resolved_phrase(rng, h) : bare_phrase(rng, h);
  const std::string& name = pick(rng, kNames);
  const std::string& w = pick(rng, kHourWords[h]);
  switch (pick(rng, 4)) {
    case 0: return "The clock struck " + t + ", and " + name + " thought of the " + w + ".";
    case 1: return "It was " + t + " when " + name + " " + pick(rng, kVerbs) + " the " + w + ".";
    case 2: return "At " + t + " the " + w + " was ready at last.";
    default: return "\"Is it " + t + " already?\" asked " + name + ".";
  }
}

std::string scene_opening(Rng& rng, int h) {
  const std::string part = daypart_for(h);
  switch (pick(rng, 3)) {
    case 0: return "The " + part + " was " + pick(rng, kAdjectives) + " and long.";
    case 1: return capitalize(pick(rng, kNames)) + " liked the " + part + " best of all.";
    default: return "It was " + part + " in the house of Mr. " + pick(rng, kSurnames) + ".";
  }
}

std::string filler_sentence(Rng& rng, int h) {
  const auto& words = kHourWords[h];
  const std::string& a = pick(rng, words);
  const std::string& b = pick(rng, words);
  const std::string& name = pick(rng, kNames);
  switch (pick(rng, 6)) {
    case 0: return name + " " + pick(rng, kVerbs) + " the " + a + " and the " + pick(rng, kObjects) + ".";
    case 1: return "The " + a + " was " + pick(rng, kAdjectives) + ", and " + name + " " +
                   pick(rng, kVerbs) + " the " + b + ".";
    case 2: return "\"" + pick(rng, kExclaims) + " " + a + "!\" said " + name + ".";
    case 3: return "Mr. " + pick(rng, kSurnames) + " stood by the " + pick(rng, kObjects) +
                   " and spoke of the " + a + ".";
    case 4: return "Nobody " + pick(rng, kVerbs) + " the " + pick(rng, kObjects) +
                   "; everyone spoke of " + a + " and " + b + ".";
    default: return "Was the " + a + " " + pick(rng, kAdjectives) + "? " + name +
                    " could not say.";
  }
}

struct Scene {
  int hour = 0;
  std::size_t sentences = 0;
  std::size_t clocks = 0;
  int resolved_percent = 80;
};

// Sentences of one scene: an opening with the day part, then filler with the
// clock mentions spread through it.
std::vector<std::string> render_scene(Rng& rng, const Scene& s) {
  std::vector<std::string> out = {scene_opening(rng, s.hour)};
  std::vector<std::size_t> slots;
  for (std::size_t c = 0; c < s.clocks; ++c) {
    slots.push_back(1 + (c * (s.sentences - 1)) / std::max<std::size_t>(1, s.clocks) +
                    pick(rng, 3));
  }
  for (std::size_t i = 1; i < s.sentences; ++i) {
    if (std::find(slots.begin(), slots.end(), i) != slots.end()) {
      out.push_back(clock_sentence(rng, s.hour, chance(rng, s.resolved_percent)));
    } else {
      out.push_back(filler_sentence(rng, s.hour));
    }
  }
  return out;
}

std::string wrap(const std::string& paragraph, std::size_t width = 70) {
  std::string out;
  std::size_t line = 0;
  for (const auto& word : timeflow::text::split_whitespace(paragraph)) {
    if (line > 0 && line + 1 + word.size() > width) {
      out += '\n';
      line = 0;
    } else if (line > 0) {
      out += ' ';
      ++line;
    }
    out += word;
    line += word.size();
  }
  return out + '\n';
}

// Chapters of wrapped paragraphs (3 to 6 sentences each), one chapter per
// scene.
std::vector<std::string> render_chapters(Rng& rng, const std::vector<Scene>& scenes,
                                         const std::vector<std::string>& extra) {
  static const std::vector<std::string> kRoman = {"I", "II", "III", "IV", "V",
                                                  "VI", "VII", "VIII", "IX", "X"};
  std::vector<std::string> chapters;
  for (std::size_t c = 0; c < scenes.size(); ++c) {
    auto sentences = render_scene(rng, scenes[c]);
    if (c == 0) sentences.insert(sentences.begin() + 2, extra.begin(), extra.end());
    std::string chapter = "CHAPTER " + kRoman[c] + "\n\n";
    std::size_t i = 0;
    while (i < sentences.size()) {
      const std::size_t n = std::min(sentences.size() - i, 3 + pick(rng, 4));
      std::string para;
      for (std::size_t j = 0; j < n; ++j) para += (j ? " " : "") + sentences[i + j];
      chapter += wrap(para) + "\n";
      i += n;
    }
    chapters.push_back(chapter);
  }
  return chapters;
}

struct BookPlan {
  std::string id;
  std::string title;
  std::string author;
  std::optional<int> birth_year;
  bool page_folder = false;
  std::vector<Scene> scenes;
  std::vector<std::string> extra;  // sentences inserted into the first chapter
};

// Hours of a day in story order, starting before dawn.
std::vector<int> day_hours(Rng& rng, std::size_t count) {
  std::vector<int> order;
  for (int i = 0; i < 24; ++i) order.push_back((5 + i) % 24);
  std::vector<std::size_t> idx(order.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[pick(rng, i)]);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<int> out;
  for (auto i : idx) out.push_back(order[i]);
  return out;
}

std::vector<BookPlan> plan_books(Rng& rng) {
  struct Row {
    const char* id;
    const char* title;
    const char* author;
    std::optional<int> year;
    bool pages;
  };
  const std::vector<Row> rows = {
      {"b01", "The Long Day", "Hale, Edmund", 1790, false},
      {"b02", "A Quiet Household", "Mary Pennick", 1796, true},
      {"b03", "The Vicar's Lodger", "Arthur Stroud", 1805, false},
      {"b04", "Winter at Coombe Hall", "Lydia Farrant", 1830, false},
      {"b05", "The Clerk's Diary", "Samuel Wroth", 1845, true},
      {"b06", "Letters from Marlow", "Harriet Vane", 1852, false},
      {"b07", "A House in Town", "George Lidell", 1868, false},
      {"b08", "The Ballroom Steps", "Ada Carrow", 1876, false},
      {"b09", "Gaslight and Shadow", "Felix Morrow", 1884, true},
      {"b10", "The Night Porter", "Ivy Trent", 1893, false},
      {"b11", "Electric Evenings", "Conrad Bell", 1907, false},
      {"b12", "After the Theatre", "Nora Quill", 1920, false},
  };
  std::vector<BookPlan> books;
  for (const auto& r : rows) {
    BookPlan b{r.id, r.title, r.author, r.year, r.pages, {}, {}};
    const std::size_t n_scenes = 4 + pick(rng, 3);
    for (int h : day_hours(rng, n_scenes)) {
      Scene s;
      s.hour = h;
      s.sentences = 28 + pick(rng, 43);
      s.clocks = 2 + pick(rng, 2);
      s.resolved_percent = 75;
      b.scenes.push_back(s);
    }
    books.push_back(std::move(b));
  }
  // OCR-style "I am" misread, which the tagger must drop.
  books[4].extra = {"\"Indeed 1 am not tired,\" said Walter."};
  // A short book whose only clock references are noon: no usable reference
  // track.
  BookPlan noon{"b13", "Noonday Sketches", "Unknown Hand", std::nullopt, false, {}, {}};
  noon.scenes = {Scene{12, 30, 2, 100}};
  books.push_back(noon);
  // Second edition of b01 under a variant title and author form.
  BookPlan dup = books[0];
  dup.id = "b01a";
  dup.title = "The Long Day.";
  dup.author = "Edmund Hale";
  books.push_back(dup);
  return books;
}

std::string gutenberg_text(const BookPlan& b, const std::vector<std::string>& chapters) {
  std::string out = "The Project Gutenberg EBook of " + b.title + ", by " + b.author + "\n\n";
  out += "This eBook is for the use of anyone anywhere at no cost and with\n"
         "almost no restrictions whatsoever.\n\n";
  out += "Title: " + b.title + "\n\nAuthor: " + b.author + "\n\n";
  out += "*** START OF THIS PROJECT GUTENBERG EBOOK " + b.title + " ***\n\n\n";
  out += "Produced by Volunteers\n\n\n\n" + b.title + "\n\nCONTENTS\n\n";
  for (std::size_t c = 0; c < chapters.size(); ++c) {
    out += chapters[c].substr(0, chapters[c].find('\n')) + "\n";
  }
  out += "\n\n";
  for (const auto& c : chapters) out += c + "\n";
  out += "\nEnd of the Project Gutenberg EBook of " + b.title + "\n\n";
  out += "*** END OF THIS PROJECT GUTENBERG EBOOK " + b.title + " ***\n\n"
         "Updated editions will replace the previous one.\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write the bundled synthetic corpus"};
  std::string out_dir = "data/corpus";
  std::uint64_t seed = 1888;
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  Rng rng(seed);
  const auto books = plan_books(rng);
  std::string metadata = "id\ttitle\tauthor\tauthor_birth_year\tsource\n";
  try {
    if (fs::exists(out_dir)) fs::remove_all(out_dir);
    for (const auto& b : books) {
      // Per-book stream derived from the id bytes (std::hash is not portable).
      std::uint64_t s = seed;
      for (unsigned char ch : b.id) s = s * 1099511628211ULL + ch;
      Rng book_rng(s);
      const auto chapters = render_chapters(book_rng, b.scenes, b.extra);
      metadata += b.id + '\t' + b.title + '\t' + b.author + '\t' +
                  (b.birth_year ? std::to_string(*b.birth_year) : "") + '\t' +
                  (b.page_folder ? "page-folder" : "gutenberg") + '\n';
      if (!b.page_folder) {
        timeflow::text::write_file(fs::path(out_dir) / (b.id + ".txt"),
                                   gutenberg_text(b, chapters));
        continue;
      }
      // Scanned books: one page per chapter, with a running title line.
      for (std::size_t c = 0; c < chapters.size(); ++c) {
        char name[32];
        std::snprintf(name, sizeof(name), "page_%03zu.txt", c + 1);
        std::string page = c == 0 ? b.title + "\n\n" : "";
        page += chapters[c];
        timeflow::text::write_file(fs::path(out_dir) / b.id / name, page);
      }
    }
    timeflow::text::write_file(fs::path(out_dir) / "metadata.tsv", metadata);
  } catch (const std::exception& e) {
    std::cerr << "make_corpus: " << e.what() << '\n';
    return 1;
  }
  std::cout << "wrote " << books.size() << " books to " << out_dir << '\n';
  return 0;
}
