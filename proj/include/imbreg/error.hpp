#pragma once

#include <stdexcept>
#include <string>

namespace imbreg {

// Broad failure categories; the CLI maps each to a distinct exit code.
enum class ErrorKind {
    config,         // bad configuration / arguments
    applicability,  // method does not accept the given relevance scale
    data,           // malformed or unusable input data
    degenerate,     // statistic not estimable (constant column, zero IQR, ...)
    progress,       // algorithm could not make progress (acceptance cap hit)
    io,             // filesystem / parse failures
    numeric,        // non-finite values during computation
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return "config";
        case ErrorKind::applicability: return "applicability";
        case ErrorKind::data: return "data";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::progress: return "progress";
        case ErrorKind::io: return "io";
        case ErrorKind::numeric: return "numeric";
    }
    return "unknown";
}

}  // namespace imbreg
