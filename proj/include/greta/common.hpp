#ifndef GRETA_COMMON_HPP
#define GRETA_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace greta {

/// Attribute and timestamp domain. Attributes are signed 64-bit integers;
/// timestamps are unitless non-negative integers.
using Value = std::int64_t;
using Time = std::int64_t;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(col) + ")"),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

private:
  int line_;
  int col_;
};

/// Structurally invalid query (failed validation).
class QueryError : public Error {
public:
  using Error::Error;
};

class UnsupportedPatternError : public QueryError {
public:
  using QueryError::QueryError;
};

class OverflowError : public Error {
public:
  using Error::Error;
};

class OutOfOrderError : public Error {
public:
  using Error::Error;
};

class DataError : public Error {
public:
  using Error::Error;
};

}  // namespace greta

#endif
