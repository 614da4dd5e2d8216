#pragma once

#include <stdexcept>
#include <string>

namespace pastent {

// Invalid inputs, violated preconditions, parameter errors. CLI exit code 2.
class domain_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Conditioning event with (numerically) zero probability mass, e.g. past
// entropy at a point where F(t) = 0.
class degenerate_error : public domain_error {
  public:
    using domain_error::domain_error;
};

// find_root called on an interval without a sign change.
class bracket_error : public domain_error {
  public:
    using domain_error::domain_error;
};

// Fewer data points than the estimator needs.
class insufficient_data_error : public domain_error {
  public:
    using domain_error::domain_error;
};

// Tied observations where strictly increasing order statistics are required.
class degenerate_sample_error : public domain_error {
  public:
    using domain_error::domain_error;
};

// Numerical failures. CLI exit code 3.
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Tolerance not met within the subdivision/iteration budget. Carries the
// best value obtained and its error estimate.
class accuracy_error : public numerical_error {
  public:
    accuracy_error(const std::string& what, double partial, double err_est)
        : numerical_error(what), partial_value(partial), error_estimate(err_est) {}

    double partial_value;
    double error_estimate;
};

// An entropy curve no reversed hazard rate can produce, or a recovered cdf
// that is not a distribution function.
class reconstruction_error : public numerical_error {
  public:
    using numerical_error::numerical_error;
};

}  // namespace pastent
