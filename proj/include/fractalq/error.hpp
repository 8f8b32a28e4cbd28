#pragma once

#include <stdexcept>
#include <string>

namespace fractalq {

// Base of every error the library throws. The CLI maps the subclasses onto
// its exit codes (usage 2, data 3, I/O 4).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A parameter or precondition that the caller controls was violated.
class UsageError : public Error {
public:
  using Error::Error;
};

// The input data cannot support the requested analysis (too short,
// constant, gap-split, ...).
class DataError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace fractalq
