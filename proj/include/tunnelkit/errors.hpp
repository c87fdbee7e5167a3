#pragma once

#include <stdexcept>
#include <string>

namespace tunnelkit {

/// Input outside an operation's domain (bad parameter, singular point,
/// physically meaningless combination).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace tunnelkit
