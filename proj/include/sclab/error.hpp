#pragma once

#include <stdexcept>
#include <string>

namespace sclab {

/// Invalid or inconsistent input data (bad file, empty cloud, mismatched sizes).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (NaN, divergence, singular configuration).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sclab
