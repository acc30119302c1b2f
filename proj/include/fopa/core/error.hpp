#pragma once

#include <stdexcept>
#include <string>

namespace fopa {

/// Input rejected before any numerics ran (bad parameters, unphysical state, grid too coarse).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver or oracle could not reach its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepSizeError : public NumericalError {
 public:
  StepSizeError(const std::string& what, double z_m) : NumericalError(what), z_m_(z_m) {}
  double z_m() const { return z_m_; }

 private:
  double z_m_;
};

class AliasingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double bound) : NumericalError(what), bound_(bound) {}
  double bound() const { return bound_; }

 private:
  double bound_;
};

}  // namespace fopa
