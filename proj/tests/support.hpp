#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "timeflow/ingest.hpp"
#include "timeflow/timex.hpp"

namespace timeflow::testing {

inline Document make_doc(std::string body, std::string id = "d1") {
  BookMeta meta;
  meta.id = std::move(id);
  meta.title = "Untitled";
  meta.author = "Anon";
  return segment_document(std::move(body), meta);
}

inline std::vector<TimeExpression> extract(const Document& doc) {
  return filter_ocr_artifacts(extract_expressions(doc), doc);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("timeflow_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace timeflow::testing
