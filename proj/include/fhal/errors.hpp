#pragma once

#include <stdexcept>
#include <string>

namespace fhal {

// Thrown when parameters violate the hypotheses a solver needs
// (sign constraints, strict inequalities, singular denominators).
class infeasibility_error : public std::runtime_error {
 public:
  explicit infeasibility_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an iterative method exhausts its iteration budget or
// fails to establish a bracket.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a requested time step is not commensurate with the delays,
// or a run would exceed the memory guard.
class mesh_error : public std::runtime_error {
 public:
  explicit mesh_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a simulated state norm exceeds the divergence guard.
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fhal
