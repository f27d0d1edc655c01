#pragma once

#include <stdexcept>
#include <string>

namespace carlo {

// Parameter or argument outside its documented domain.
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Feature not implemented for the requested family / configuration.
struct capability_error : std::logic_error {
  using std::logic_error::logic_error;
};

// A sampler or estimator failed to make progress (suspect bound,
// zero acceptance, non-positive denominator, ...).
struct divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An estimate was contaminated by a non-finite or zero-density point;
// the message names the offending input.
struct poisoned_estimate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct configuration_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input with no usable variation (constant trace, zero-variance control, ...).
struct degenerate_input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct linalg_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ingestion_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace carlo
