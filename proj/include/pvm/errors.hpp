#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pvm {

/// Base class of every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (bad order, mismatched grids, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// The Robin coefficient of the elliptic problem coincides with a lateral
/// eigenvalue pi|k|/a within the resonance window.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, std::vector<std::pair<int, int>> modes)
      : Error(what), modes_(std::move(modes)) {}
  const std::vector<std::pair<int, int>>& modes() const noexcept { return modes_; }

 private:
  std::vector<std::pair<int, int>> modes_;
};

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Iterate norm left the ball of radius 10 M.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, std::vector<double> ratios)
      : Error(what), ratios_(std::move(ratios)) {}
  const std::vector<double>& ratios() const noexcept { return ratios_; }

 private:
  std::vector<double> ratios_;
};

/// Square-root recovery of u from v = u^2 is ambiguous for sign-changing data.
class SignError : public Error {
 public:
  using Error::Error;
};

}  // namespace pvm
