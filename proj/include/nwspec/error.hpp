#pragma once

#include <stdexcept>
#include <string>

namespace nwspec {

/// Invalid option, flag or parameter supplied by the caller. CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Problem with the data itself. CLI exit code 3.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t row, std::string column)
        : DataError(what), row_(row), column_(std::move(column)) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class TooShortError : public DataError {
public:
    using DataError::DataError;
};

/// Argument outside the mathematical domain of an operation (log of a
/// non-positive level, frequency outside [0, pi], non-stationary AR part).
class DomainError : public DataError {
public:
    using DataError::DataError;
};

class DegenerateInputError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace nwspec
