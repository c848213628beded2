#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace timeflow {

enum class ErrorCode {
  kUnsupportedEncoding,
  kEmptyBody,
  kEmptyCorpus,
  kEmptyTable,
  kWordUnseen,
  kNoTrainingData,
  kTooFewClasses,
  kEmptyTestSet,
  kLengthMismatch,
  kEmptyInput,
  kEmptyReference,
  kInvalidArgument,
  kTrainTestOverlap,
  kInsufficientLabels,
  kUnknownBook,
  kNoMetadataYears,
  kParse,
  kIo,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedEncoding: return "unsupported-encoding";
    case ErrorCode::kEmptyBody: return "empty-body";
    case ErrorCode::kEmptyCorpus: return "empty-corpus";
    case ErrorCode::kEmptyTable: return "empty-table";
    case ErrorCode::kWordUnseen: return "word-unseen-globally";
    case ErrorCode::kNoTrainingData: return "no-training-data-for-hour";
    case ErrorCode::kTooFewClasses: return "too-few-classes";
    case ErrorCode::kEmptyTestSet: return "empty-test-set";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kEmptyReference: return "empty-reference";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kTrainTestOverlap: return "train-test-overlap";
    case ErrorCode::kInsufficientLabels: return "insufficient-labels";
    case ErrorCode::kUnknownBook: return "unknown-book";
    case ErrorCode::kNoMetadataYears: return "no-metadata-years";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

// Every failure the library reports carries one of the codes above so the
// CLI can print a stable machine-readable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace timeflow
