#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iclust {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; row/column are 1-based and refer to the file as written.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t row, std::size_t column, const std::string& what)
        : Error(path + ":" + std::to_string(row) + ":" + std::to_string(column) + ": " + what),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace iclust
