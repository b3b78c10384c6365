#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ledsel {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// colorimetry
class InvalidSpd : public Error {
public:
    using Error::Error;
};
class EmptyOverlap : public Error {
public:
    using Error::Error;
};
class ZeroTristimulus : public Error {
public:
    ZeroTristimulus() : Error("tristimulus sum X+Y+Z is not positive (dark or failed measurement)") {}
};
class InvalidEllipse : public Error {
public:
    using Error::Error;
};
class InvalidTable : public Error {
public:
    using Error::Error;
};

// binning
class OutOfGamutDomain : public Error {
public:
    using Error::Error;
};
class NonRectangularBin : public Error {
public:
    using Error::Error;
};

// line simulation
class InfiniteRate : public Error {
public:
    InfiniteRate() : Error("mean cycle time is zero; throughput is unbounded") {}
};
class NeverBreaksEven : public Error {
public:
    NeverBreaksEven() : Error("automated selection is never cheaper than manual selection") {}
};

/// Bad configuration. `where()` carries "file:line" context when the
/// error came from a document on disk.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string where = {})
        : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

// operator service
class Busy : public Error {
public:
    using Error::Error;
};
class IllegalTransition : public Error {
public:
    using Error::Error;
};
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> diagnostics);

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

}  // namespace ledsel
