#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcoai {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a type invariant (negative amount, zero-period horizon, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// LCOAI has no value, e.g. the scenario delivers zero valid inferences.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class IncompatibleScenarios : public Error {
 public:
  using Error::Error;
};

// A named scenario or an input file does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

// Exact arithmetic left the int64 micro-dollar range.
class Overflow : public Error {
 public:
  using Error::Error;
};

// Malformed decimal text, scenario file or log line. `where` is a field path
// ("scenarios[0].opex.per_inference_usd") or "line N".
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)), message_(what) {}

  const std::string& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string where_;
  std::string message_;
};

class LogParseError : public ParseError {
 public:
  LogParseError(std::size_t line, const std::string& what)
      : ParseError("line " + std::to_string(line), what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lcoai
