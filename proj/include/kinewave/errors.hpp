#pragma once

#include <stdexcept>
#include <string>

namespace kinewave {

// Argument outside the domain of a fundamental-diagram map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed network, scenario, or configuration. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Run aborted mid-simulation (flow bound violated, event cap hit, ...).
// Maps to CLI exit code 3.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinewave
