#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eegdec {

enum class ErrorCode {
  // ingestion / windowing
  EmptyFile,
  MissingColumn,
  NonNumericCell,
  NonIntegralWindow,
  InvalidArgument,
  // preprocessing
  InvalidBand,
  AllSamplesRejected,
  // features
  TooShort,
  EmptyBand,
  DegenerateSpectrum,
  TooFewPoints,
  UnknownFeature,
  // selection
  TooFewChannels,
  EmptyInput,
  NoCandidates,
  // model / bundle
  BadMagic,
  ShapeMismatch,
  TruncatedPayload,
  CorruptBundle,
  // evaluation
  LengthMismatch,
  TooFewRuns,
  InvalidCounts,
  MissingSubjectId,
  // bench
  NoWindows,
  NoReadings,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every module. `code()` identifies the failure
/// class, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eegdec
