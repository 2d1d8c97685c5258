#include "ntnsim/error.hpp"

namespace ntnsim {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::SchedulingInPast: return "SchedulingInPast";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::EmptyObservationSet: return "EmptyObservationSet";
    case ErrorCode::InvalidObservation: return "InvalidObservation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NoSamples: return "NoSamples";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SweepEmpty: return "SweepEmpty";
    }
    return "Unknown";
}

}  // namespace ntnsim
