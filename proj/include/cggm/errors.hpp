#pragma once

#include <stdexcept>
#include <string>

namespace cggm {

// Malformed or inconsistent input (CLI exit code 1).
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The graph is not CER, or a space fails the block-Cholesky axioms (exit 2).
struct classification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponent at or below the convergence threshold (exit 3).
struct divergence_error : std::domain_error {
  double threshold;
  divergence_error(const std::string& what, double thr) : std::domain_error(what), threshold(thr) {}
};

// An oracle comparison or internal self-check failed (exit 4).
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct spectrum_not_simple : numerical_error {
  using numerical_error::numerical_error;
};

struct group_too_large : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cggm
