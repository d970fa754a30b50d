#ifndef MNARCOR_ERRORS_HPP
#define MNARCOR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mnarcor {

// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rank-deficient or otherwise unusable design matrix.
struct design_error : error {
  using error::error;
};

// Fewer rows than columns (or than required degrees of freedom).
struct insufficient_data_error : error {
  using error::error;
};

// Probit response all-true or all-false.
struct degenerate_error : error {
  using error::error;
};

// Quasi-complete separation in the probit fit.
struct separation_error : error {
  using error::error;
};

// Declared mechanism does not match the observed missingness pattern.
struct mechanism_error : error {
  using error::error;
};

// A regularity condition failed (e.g. the variance-correction
// denominator is numerically zero).
struct regularity_error : error {
  using error::error;
};

// Generic numerical failure with diagnostics in the message.
struct numerical_error : error {
  using error::error;
};

// Too many grid points failed while building an uncertainty region.
struct unreliable_region_error : error {
  using error::error;
};

}  // namespace mnarcor

#endif
