#include "ogc/error.hpp"

namespace ogc {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GradientNotFinite: return "GradientNotFinite";
    case ErrorCode::SeriesOutOfRange: return "SeriesOutOfRange";
    case ErrorCode::InfeasibleLimits: return "InfeasibleLimits";
    case ErrorCode::MissingAdvertisement: return "MissingAdvertisement";
    case ErrorCode::InfeasibleStep: return "InfeasibleStep";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::SeriesLengthError: return "SeriesLengthError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ogc
