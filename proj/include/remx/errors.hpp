#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace remx {

/// Argument outside the domain of a thermodynamic or closure function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A cell lost positivity of density, temperature or radiative energy.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, std::size_t cell)
      : std::runtime_error(what + " (cell " + std::to_string(cell) + ")"),
        cell_(cell) {}

  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t cell_;
};

/// Iterative solve (Newton, CG) failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unparsable configuration. The message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Any stage failure surfaced by the run loop, tagged with time and step.
class RunAbort : public std::runtime_error {
 public:
  RunAbort(const std::string& what, double time, long step)
      : std::runtime_error("t=" + std::to_string(time) + " step=" +
                           std::to_string(step) + ": " + what),
        time_(time),
        step_(step) {}

  double time() const noexcept { return time_; }
  long step() const noexcept { return step_; }

 private:
  double time_;
  long step_;
};

}  // namespace remx
