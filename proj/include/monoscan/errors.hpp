#ifndef MONOSCAN_ERRORS_HPP_
#define MONOSCAN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace monoscan {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Arguments are individually valid but inconsistent with each other
// (mismatched domains, grids that do not refine, tables for another model).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Paired regression data with a zero variance estimate.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors raised by the command-line layer.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace monoscan

#endif  // MONOSCAN_ERRORS_HPP_
