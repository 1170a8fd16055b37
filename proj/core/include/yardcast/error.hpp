#pragma once

#include <stdexcept>
#include <string>

namespace yardcast {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (invalid range, bad cut, ...).
struct InvalidArgument : Error {
    using Error::Error;
};

/// Input data failed validation (gate_out before gate_in, negative count, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Malformed text input; message carries the offending line where known.
struct ParseError : Error {
    using Error::Error;
};

/// Series too short for the requested model or statistic.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Model estimation failed (non-finite loss, degenerate regression, ...).
struct FitError : Error {
    using Error::Error;
};

/// Bad configuration file, unknown model family, unusable option value.
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem / serialization failures, including corrupt artifacts.
struct IoError : Error {
    using Error::Error;
};

}  // namespace yardcast
