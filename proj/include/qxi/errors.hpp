#pragma once

#include <stdexcept>
#include <string>

namespace qxi {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid state description or criterion parameters.
class SpecError : public Error {
public:
    explicit SpecError(const std::string& msg) : Error(msg) {}
};

// Grid construction / sizing problems ("grid too large", "grid too small",
// "window too small", ...).
class GridError : public Error {
public:
    explicit GridError(const std::string& msg) : Error(msg) {}
};

// Unsupported or ill-posed transform request (deconvolution, bad channel
// parameter, inadequate window).
class TransformError : public Error {
public:
    explicit TransformError(const std::string& msg) : Error(msg) {}
};

// Malformed grid file; carries the 1-based line number of the offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

}  // namespace qxi
