#include "pastent/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pastent/errors.hpp"

namespace pastent {

void Sample::validate() const {
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            std::ostringstream msg;
            msg << "Sample: values must be finite and >= 0, got " << v;
            throw domain_error(msg.str());
        }
    }
}

double empirical_cdf(const Sample& sample, double x) {
    if (sample.values.empty()) {
        throw domain_error("empirical_cdf: sample is empty");
    }
    std::size_t count = 0;
    for (double v : sample.values) {
        if (v <= x) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(sample.n());
}

double past_entropy_estimate(const Sample& sample, double t,
                             std::optional<std::size_t> window) {
    sample.validate();
    std::vector<double> sub;
    sub.reserve(sample.values.size());
    for (double v : sample.values) {
        if (v <= t) sub.push_back(v);
    }
    const std::size_t k = sub.size();
    if (k < 10) {
        std::ostringstream msg;
        msg << "past_entropy_estimate: only " << k
            << " observations at or below t = " << t << " (need >= 10)";
        throw insufficient_data_error(msg.str());
    }
    std::sort(sub.begin(), sub.end());

    const std::size_t m = window.value_or(
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(k)))));
    if (m < 1 || m >= k) {
        std::ostringstream msg;
        msg << "past_entropy_estimate: window " << m
            << " must lie in [1, k-1] with k = " << k;
        throw domain_error(msg.str());
    }

    const double kd = static_cast<double>(k);
    const double md = static_cast<double>(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t hi = std::min(i + m, k - 1);
        const std::size_t lo = (i >= m) ? i - m : 0;
        const double spacing = sub[hi] - sub[lo];
        if (!(spacing > 0.0)) {
            std::ostringstream msg;
            msg << "past_entropy_estimate: zero spacing across the window at "
                   "order statistic "
                << (i + 1) << " (tied observations)";
            throw degenerate_sample_error(msg.str());
        }
        acc += std::log(kd / (2.0 * md) * spacing);
    }
    return acc / kd;
}

}  // namespace pastent
