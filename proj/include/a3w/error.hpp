#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace a3w {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class CheckFailure : public Error {
 public:
  using Error::Error;
};

// Carries the index (coordinate, sample, ...) that produced the bad value.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : Error(index ? what + " (index " + std::to_string(*index) + ")" : what), index_(index) {}

  std::optional<std::size_t> index() const { return index_; }

 private:
  std::optional<std::size_t> index_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, std::size_t step)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace a3w
