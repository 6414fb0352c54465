#pragma once

#include <stdexcept>
#include <string>

namespace logpot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: violated precondition, malformed config, degenerate geometry.
class InputError : public Error {
public:
  using Error::Error;
};

/// An iterative method stopped at its iteration cap.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

} // namespace logpot
