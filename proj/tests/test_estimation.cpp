#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pastent/distribution.hpp"
#include "pastent/errors.hpp"
#include "pastent/estimation.hpp"

using namespace pastent;

namespace {

// Independent spacings-entropy reference used by the conditioning test.
double vasicek_reference(std::vector<double> xs, std::size_t m) {
    std::sort(xs.begin(), xs.end());
    const std::size_t k = xs.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t hi = std::min(i + m, k - 1);
        const std::size_t lo = (i >= m) ? i - m : 0;
        acc += std::log(static_cast<double>(k) / (2.0 * m) * (xs[hi] - xs[lo]));
    }
    return acc / static_cast<double>(k);
}

}  // namespace

TEST_CASE("empirical_cdf") {
    const Sample s{{1.0, 2.0, 3.0}};
    CHECK(empirical_cdf(s, 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(empirical_cdf(s, 0.5) == 0.0);
    CHECK(empirical_cdf(s, 3.0) == 1.0);
    CHECK(empirical_cdf(s, 10.0) == 1.0);
    CHECK_THROWS_AS(empirical_cdf(Sample{}, 1.0), domain_error);
}

TEST_CASE("past entropy estimate approaches ln t for the uniform") {
    const Distribution dist(Uniform{1.0});
    Sample sample{dist.sample(100000, 42)};
    const double est = past_entropy_estimate(sample, 0.5);
    CHECK(std::fabs(est - std::log(0.5)) <= 0.05);
}

TEST_CASE("estimate error shrinks with sample size at a fixed seed") {
    const Distribution dist(Uniform{1.0});
    const double truth = std::log(0.5);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        Sample sample{dist.sample(n, 42)};
        const double err =
            std::fabs(past_entropy_estimate(sample, 0.5) - truth);
        CHECK(err <= prev);
        prev = err;
    }
}

TEST_CASE("conditioning with t beyond the maximum matches the plain estimate") {
    const Distribution dist(Exponential{1.3});
    Sample sample{dist.sample(500, 7)};
    const double t = 1.0 + *std::max_element(sample.values.begin(),
                                             sample.values.end());
    const std::size_t m = static_cast<std::size_t>(
        std::floor(std::sqrt(static_cast<double>(sample.n()))));
    CHECK(past_entropy_estimate(sample, t) ==
          vasicek_reference(sample.values, m));
}

TEST_CASE("estimate error paths") {
    const Distribution dist(Uniform{1.0});
    Sample sample{dist.sample(100, 3)};

    SUBCASE("all values above t") {
        CHECK_THROWS_AS(past_entropy_estimate(sample, -1.0),
                        insufficient_data_error);
    }
    SUBCASE("fewer than ten conditioned values") {
        Sample tiny{{0.1, 0.2, 0.3, 0.4, 0.5}};
        CHECK_THROWS_AS(past_entropy_estimate(tiny, 1.0),
                        insufficient_data_error);
    }
    SUBCASE("constant sample is degenerate") {
        Sample ties{std::vector<double>(50, 2.0)};
        CHECK_THROWS_AS(past_entropy_estimate(ties, 3.0),
                        degenerate_sample_error);
    }
    SUBCASE("window bounds") {
        CHECK_THROWS_AS(past_entropy_estimate(sample, 1.0, 0), domain_error);
        CHECK_THROWS_AS(past_entropy_estimate(sample, 1.0, 100), domain_error);
        CHECK(std::isfinite(past_entropy_estimate(sample, 1.0, 5)));
    }
    SUBCASE("negative or non-finite values rejected") {
        Sample bad{{0.1, -0.2, 0.3}};
        CHECK_THROWS_AS(past_entropy_estimate(bad, 1.0), domain_error);
    }
}
