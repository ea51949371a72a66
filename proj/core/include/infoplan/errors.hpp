#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace infoplan {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, non-finite coordinates, bad sizes.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A symmetric positive-definite factorization failed even after the jitter
/// ladder was exhausted. `jitter()` is the last relative level that was tried.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& what, double attempted_jitter)
        : Error(what), jitter_(attempted_jitter) {}

    double jitter() const noexcept { return jitter_; }

private:
    double jitter_;
};

/// A location outside the region where a field or mask is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

class PlacementError : public Error {
public:
    using Error::Error;
};

/// Every candidate failed to score during a greedy step.
class PlanningError : public Error {
public:
    PlanningError(const std::string& what, std::vector<std::size_t> failed)
        : Error(what), failed_(std::move(failed)) {}

    const std::vector<std::size_t>& failed_candidates() const noexcept { return failed_; }

private:
    std::vector<std::size_t> failed_;
};

/// File-format problems; carries the file name and 1-based line (0 if unknown).
class DataError : public Error {
public:
    DataError(const std::string& file, std::size_t line, const std::string& message)
        : Error(file + (line ? ":" + std::to_string(line) : std::string{}) + ": " + message),
          file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

}  // namespace infoplan
