#include "eegdec/error.hpp"

namespace eegdec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::NonIntegralWindow: return "NonIntegralWindow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::AllSamplesRejected: return "AllSamplesRejected";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::TooFewChannels: return "TooFewChannels";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::CorruptBundle: return "CorruptBundle";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewRuns: return "TooFewRuns";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::MissingSubjectId: return "MissingSubjectId";
    case ErrorCode::NoWindows: return "NoWindows";
    case ErrorCode::NoReadings: return "NoReadings";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace eegdec
