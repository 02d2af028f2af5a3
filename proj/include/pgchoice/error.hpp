#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pgchoice {

// Every error carries a short machine-readable class ("invalid-parameter",
// "non-binary-outcome", ...) next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string error_class, const std::string& message)
      : std::runtime_error(message), class_(std::move(error_class)) {}

  const std::string& error_class() const noexcept { return class_; }

  // user input problem (exit code 1) vs numerical breakdown (exit code 2)
  virtual bool numerical() const noexcept { return false; }

 private:
  std::string class_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& message)
      : Error("invalid-parameter", message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(std::string error_class, const std::string& message)
      : Error(std::move(error_class), message) {}
  bool numerical() const noexcept override { return true; }
};

class DataError : public Error {
 public:
  using Error::Error;
};

// One entry from validate(): all violations are collected before anything
// is thrown.
struct Violation {
  std::string error_class;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(violations.empty() ? "validation" : violations.front().error_class,
              join(violations)),
        violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<Violation>& v) {
    std::string out;
    for (const auto& x : v) {
      if (!out.empty()) out += "; ";
      out += x.message;
    }
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace pgchoice
