#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace pastent {

struct Sample {
    std::vector<double> values;  // finite, nonnegative lifetimes

    std::size_t n() const { return values.size(); }
    void validate() const;
};

/// Fraction of observations at or below x.
double empirical_cdf(const Sample& sample, double x);

/// Spacings estimate of the past entropy at t: the entropy of the
/// conditional law given X <= t, computed from order-statistic spacings of
/// the subsample {x_i <= t} with window m (default floor(sqrt(k))):
///   (1/k) sum_i log( (k / 2m) * (x_(i+m) - x_(i-m)) ),
/// indices clamped to [1, k]. No bias correction is applied.
double past_entropy_estimate(const Sample& sample, double t,
                             std::optional<std::size_t> window = std::nullopt);

}  // namespace pastent
