#ifndef SENTIKIT_ERRORS_H_
#define SENTIKIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace sentikit {

// Base of every error the toolkit raises. The CLI maps each subclass onto a
// process exit code: usage 1, data 2, numeric 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed input, contract violations on data, leakage between folds.
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or a numerical routine that cannot proceed.
class NumericError : public Error {
 public:
  using Error::Error;
};

void warn(const std::string& message);

}  // namespace sentikit

#endif  // SENTIKIT_ERRORS_H_
