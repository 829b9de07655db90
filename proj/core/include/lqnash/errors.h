#pragma once

#include <stdexcept>
#include <string>

namespace lqnash {

/// Inputs with inconsistent shapes (e.g. multiplying a 2x3 by a 2x3).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition does not hold (e.g. a non-Hurwitz matrix passed
/// to the Lyapunov solver, an asymmetric matrix declared symmetric).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An algorithm failed to produce a trustworthy answer: iteration caps,
/// singular systems, coefficient blow-up.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lqnash
