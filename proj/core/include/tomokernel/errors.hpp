#pragma once

#include <stdexcept>
#include <string>

namespace tomokernel {

// Base for every error raised by the library. The CLI maps subclasses onto
// exit codes (2 input, 3 verification, 4 numeric non-convergence).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A truncated series did not meet its stopping rule within the term budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Sampled input does not decay at the edge of its window; results would be
// biased by truncation.
class BoundaryLeak : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class TruncationLoss : public Error {
 public:
  using Error::Error;
};

class Singularity : public Error {
 public:
  using Error::Error;
};

class UnsupportedParity : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace tomokernel
