#pragma once

#include <stdexcept>
#include <string>

namespace tomo {

/// Bad parameters, shape mismatches, malformed files. CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values encountered mid-computation. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Required input files absent. CLI exit code 3.
class MissingInputError : public std::runtime_error {
 public:
  explicit MissingInputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tomo
