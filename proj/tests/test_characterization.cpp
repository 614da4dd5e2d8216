#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "pastent/characterization.hpp"
#include "pastent/distribution.hpp"
#include "pastent/errors.hpp"
#include "pastent/measures.hpp"

using namespace pastent;

namespace {

double unit_draw(std::mt19937_64& rng) {
    return ((rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Scale-free part of the power family's past entropy: 1 - 1/c - ln c.
double power_psi(double c) { return 1.0 - 1.0 / c - std::log(c); }

MeasureCurve uniform_curve(std::size_t points, double lo, double hi) {
    MeasureCurve curve;
    curve.kind = MeasureKind::past_direct;
    for (std::size_t i = 0; i < points; ++i) {
        const double t =
            lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(points - 1);
        curve.grid.push_back(t);
        curve.values.push_back(std::log(t));
    }
    return curve;
}

MeasureCurve power_curve(double c, std::size_t points, double lo, double hi) {
    MeasureCurve curve;
    curve.kind = MeasureKind::past_direct;
    for (std::size_t i = 0; i < points; ++i) {
        const double t =
            lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(points - 1);
        curve.grid.push_back(t);
        curve.values.push_back(std::log(t) + power_psi(c));
    }
    return curve;
}

}  // namespace

TEST_CASE("ode_rhs examples") {
    // Uniform: hbar = ln t, phi = 1/t gives back d/dt ln t.
    for (double t : {0.2, 0.7, 1.9}) {
        CHECK(ode_rhs(std::log(t), 1.0 / t) ==
              doctest::Approx(1.0 / t).epsilon(1e-12));
    }
    CHECK(std::fabs(ode_rhs(0.37, std::exp(1.0 - 0.37))) <= 1e-12);
    CHECK(ode_rhs(0.0, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ode_rhs(0.0, 0.0), domain_error);
    CHECK_THROWS_AS(ode_rhs(0.0, -1.0), domain_error);
}

TEST_CASE("solve_reversed_hazard regimes") {
    const RootConfig cfg;

    SUBCASE("tangent at the curve maximum") {
        const RootSolveOutcome out = solve_reversed_hazard(0.0, 1.0, cfg);
        CHECK(out.regime == RootRegime::tangent);
        REQUIRE(out.roots.size() == 1);
        CHECK(out.roots[0] == doctest::Approx(1.0));
    }
    SUBCASE("zero slope lands on phi = e") {
        const RootSolveOutcome out = solve_reversed_hazard(0.0, 0.0, cfg);
        CHECK(out.regime == RootRegime::single_root_nonpositive_slope);
        REQUIRE(out.roots.size() == 1);
        CHECK(std::fabs(out.roots[0] - std::exp(1.0)) <= 1e-10);
    }
    SUBCASE("slope above the maximum has no root") {
        const RootSolveOutcome out = solve_reversed_hazard(0.0, 2.0, cfg);
        CHECK(out.regime == RootRegime::no_root);
        CHECK(out.roots.empty());
    }
    SUBCASE("interior slope has two bracketed roots") {
        const RootSolveOutcome out = solve_reversed_hazard(0.0, 0.5, cfg);
        CHECK(out.regime == RootRegime::two_roots);
        REQUIRE(out.roots.size() == 2);
        CHECK(out.roots[0] < 1.0);
        CHECK(out.roots[1] > 1.0);
        for (std::size_t i = 0; i < out.roots.size(); ++i) {
            CHECK(out.residuals[i] <= 1e-10);
        }
    }
    SUBCASE("negative slope root grows beyond e^(1-hbar)") {
        const RootSolveOutcome out = solve_reversed_hazard(-0.5, -3.0, cfg);
        CHECK(out.regime == RootRegime::single_root_nonpositive_slope);
        REQUIRE(out.roots.size() == 1);
        CHECK(out.roots[0] >= std::exp(1.0 + 0.5));
        CHECK(out.residuals[0] <= 1e-9);
    }
}

TEST_CASE("inversion recovers the true reversed hazard across families") {
    std::mt19937_64 rng(1881u);
    const auto p = [&rng] { return 0.3 + 2.7 * unit_draw(rng); };
    for (int rep = 0; rep < 5; ++rep) {
        const Distribution dists[] = {
            Distribution(Uniform{p()}),
            Distribution(Exponential{p()}),
            Distribution(Weibull{p(), p()}),
            Distribution(PowerFunction{p(), p()}),
        };
        for (const Distribution& dist : dists) {
            for (double u : {0.3, 0.6, 0.9}) {
                const double t = dist.quantile(u);
                const double hbar = past_entropy_direct(dist, t);
                const double phi = reversed_hazard(dist, t);
                // The exact slope follows from the evolution identity, so
                // the true phi must appear among the returned roots.
                const double hprime = ode_rhs(hbar, phi);
                const RootSolveOutcome out =
                    solve_reversed_hazard(hbar, hprime);
                REQUIRE(!out.roots.empty());
                double best = out.roots.front();
                for (double r : out.roots) {
                    if (std::fabs(r - phi) < std::fabs(best - phi)) best = r;
                }
                CHECK(std::fabs(best - phi) <= 1e-6 * phi);
            }
        }
    }
}

TEST_CASE("ODE identity holds along measured curves") {
    std::mt19937_64 rng(4242u);
    const auto p = [&rng] { return 0.3 + 2.7 * unit_draw(rng); };
    const Distribution dists[] = {
        Distribution(Uniform{p()}),
        Distribution(Exponential{p()}),
        Distribution(Weibull{1.6, p()}),
        Distribution(PowerFunction{2.3, p()}),
    };
    for (const Distribution& dist : dists) {
        const double u_lo = std::max(0.2, dist.cdf(0.05));
        for (double u : {0.0, 0.5, 1.0}) {
            const double t = dist.quantile(u_lo + (0.95 - u_lo) * u);
            const double h = ode_check_step(t);
            const double lhs = central_diff(
                [&dist](double s) { return past_entropy_direct(dist, s); }, t,
                h);
            const double rhs =
                ode_rhs(past_entropy_direct(dist, t), reversed_hazard(dist, t));
            CHECK(std::fabs(lhs - rhs) <= 1e-4);
        }
    }
}

TEST_CASE("reconstruct_cdf round-trips the uniform curve") {
    const MeasureCurve curve = uniform_curve(200, 0.1, 0.99);
    const ReconstructionResult res =
        reconstruct_cdf(curve, Anchor{0.99, 0.99});
    REQUIRE(res.grid.size() == 200);
    double sup = 0.0;
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        sup = std::max(sup, std::fabs(res.cdf[i] - res.grid[i]));
        CHECK(res.phi[i] > 0.0);
    }
    CHECK(sup <= 1e-3);
    CHECK(res.max_selfcheck_residual <= 1e-3);
    CHECK(res.cdf[199] == 0.99);  // anchor is exact
    // One-sided stencils at the two ends under-estimate the slope of ln t,
    // so the first and last points sit just inside the two-root regime.
    CHECK(res.branch_switches <= 2);
}

TEST_CASE("reconstruct_cdf round-trips a power curve on the falling branch") {
    const MeasureCurve curve = power_curve(2.0, 200, 0.1, 0.99);
    const double fa = 0.99 * 0.99;
    const ReconstructionResult res = reconstruct_cdf(curve, Anchor{0.99, fa});
    double sup = 0.0;
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        const double truth = res.grid[i] * res.grid[i];
        sup = std::max(sup, std::fabs(res.cdf[i] - truth));
    }
    CHECK(sup <= 1e-3);
    CHECK(res.max_selfcheck_residual <= 1e-3);
    // The recovered rate should track 2/t, not the rising-branch root.
    for (std::size_t i = 0; i < res.grid.size(); i += 40) {
        CHECK(std::fabs(res.phi[i] - 2.0 / res.grid[i]) <=
              2e-2 * (2.0 / res.grid[i]));
    }
}

TEST_CASE("reconstruct_cdf resolves branch-ambiguous curves deterministically") {
    // A power(c) entropy curve is reproduced exactly by the conjugate shape
    // with equal psi, so the data cannot identify the generating branch.
    // The reconstruction keeps the descending-side root, which here is the
    // conjugate representation of the power(0.5) generator; the result must
    // still be a self-consistent distribution for the input curve.
    const MeasureCurve curve = power_curve(0.5, 200, 0.1, 0.99);
    const double fa = std::sqrt(0.99);
    const ReconstructionResult res = reconstruct_cdf(curve, Anchor{0.99, fa});
    const double conj = find_root(
        [](double c) { return power_psi(c) - power_psi(0.5); }, 1.5, 4.0,
        RootConfig{});
    const double scale = 0.99 * std::pow(fa, -1.0 / conj);
    double sup = 0.0;
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        const double truth = std::pow(res.grid[i] / scale, conj);
        sup = std::max(sup, std::fabs(res.cdf[i] - truth));
    }
    CHECK(sup <= 1e-3);
    CHECK(res.max_selfcheck_residual <= 1e-3);
    for (std::size_t i = 0; i < res.grid.size(); i += 40) {
        CHECK(std::fabs(res.phi[i] - conj / res.grid[i]) <=
              2e-2 * (conj / res.grid[i]));
    }
}

TEST_CASE("reconstruct_cdf rejects bad input") {
    MeasureCurve curve = uniform_curve(2, 0.2, 0.8);
    CHECK_THROWS_AS((reconstruct_cdf(curve, Anchor{0.8, 0.8})), domain_error);
    curve = uniform_curve(10, 0.2, 0.8);
    CHECK_THROWS_AS((reconstruct_cdf(curve, Anchor{0.33, 0.5})), domain_error);
    CHECK_THROWS_AS((reconstruct_cdf(curve, Anchor{0.8, 0.0})), domain_error);
    CHECK_THROWS_AS((reconstruct_cdf(curve, Anchor{0.8, 1.5})), domain_error);
    curve.kind = MeasureKind::past_pit;
    CHECK_THROWS_AS((reconstruct_cdf(curve, Anchor{0.8, 0.8})), domain_error);
}

TEST_CASE("reconstruct_cdf rejects a curve falling faster than admissible") {
    // Slope far above e^{-hbar} cannot come from any reversed hazard rate.
    MeasureCurve curve;
    curve.kind = MeasureKind::past_direct;
    for (int i = 0; i < 20; ++i) {
        const double t = 0.5 + 0.025 * i;
        curve.grid.push_back(t);
        curve.values.push_back(20.0 * t);  // slope 20 vs maximum e^{-hbar} < 1
    }
    CHECK_THROWS_AS((reconstruct_cdf(curve, Anchor{0.5, 0.5})),
                    reconstruction_error);
}

TEST_CASE("mismatch_integral examples") {
    const Distribution x(Uniform{1.0});
    const Distribution y(PowerFunction{2.0, 1.0});

    SUBCASE("identical laws vanish exactly") {
        for (double v : {0.1, 0.5, 1.0}) {
            CHECK(mismatch_integral(x, x, v) == 0.0);
            CHECK(mismatch_integral(y, y, v) == 0.0);
        }
    }
    SUBCASE("uniform versus power at v = 1") {
        // int_0^1 ln(1/(2 sqrt(u))) du = 1/2 - ln 2, verified against the
        // independent Simpson oracle away from the u = 0 singular corner.
        const double expected = 0.5 - std::log(2.0);
        const double by_oracle = oracle::integral(
            [](double u) { return -std::log(2.0 * std::sqrt(u)); }, 1e-12,
            1.0);
        CHECK(std::fabs(by_oracle - expected) <= 1e-8);
        CHECK(std::fabs(mismatch_integral(x, y, 1.0) - expected) <= 1e-9);
    }
    SUBCASE("vanishing interval") {
        const double v = 1e-6;
        CHECK(std::fabs(mismatch_integral(x, y, v)) <=
              v * (std::fabs(std::log(v)) + 2.0));
    }
    SUBCASE("cross-family identical laws at v = 1") {
        // weibull(1, 1) is exp(1) written differently; the integrand is
        // log-singular at u = 1 and must still cancel.
        const Distribution e(Exponential{1.0});
        const Distribution w(Weibull{1.0, 1.0});
        CHECK(std::fabs(mismatch_integral(e, w, 1.0)) <= 1e-9);
    }
    SUBCASE("invalid v") {
        CHECK_THROWS_AS(mismatch_integral(x, y, 0.0), domain_error);
        CHECK_THROWS_AS(mismatch_integral(x, y, 1.5), domain_error);
    }
}

TEST_CASE("theorem_check on identical laws") {
    const Distribution e(Exponential{1.0});
    const TheoremVerdict v = theorem_check(e, e, 1.0);
    CHECK(v.verdict == Verdict::consistent);
    CHECK(v.cdf_gap <= 1e-10);
    CHECK(v.entropy_gap <= 1e-10);
    CHECK(std::fabs(v.mismatch) <= 1e-10);
    CHECK(v.conclusion_distance <= 1e-10);
}

TEST_CASE("theorem_check premises fail for uniform vs power at t0 = 1") {
    const Distribution x(Uniform{1.0});
    const Distribution y(PowerFunction{2.0, 1.0});
    const TheoremVerdict v = theorem_check(x, y, 1.0);
    CHECK(v.verdict == Verdict::premises_fail);
    CHECK(v.cdf_gap <= 1e-12);
    CHECK(std::fabs(v.entropy_gap - (std::log(2.0) - 0.5)) <= 1e-8);
}

TEST_CASE("theorem_check flags the conjugate power pair") {
    // Power shapes on opposite sides of c = 1 with equal psi(c) share the
    // past entropy at every interior point; matching the scale then makes
    // both premises hold while the cdfs differ below t0.
    const double c1 = 0.5;
    const double target = power_psi(c1);
    const double c2 = find_root(
        [target](double c) { return power_psi(c) - target; }, 1.5, 4.0,
        RootConfig{});
    CHECK(std::fabs(c2 - 2.46078) <= 5e-4);

    const double t0 = 0.5;
    const double v0 = std::sqrt(t0);  // F_X(t0) for power(0.5, 1)
    const double b2 = t0 * std::pow(v0, -1.0 / c2);
    const Distribution x(PowerFunction{c1, 1.0});
    const Distribution y(PowerFunction{c2, b2});
    const TheoremVerdict verdict = theorem_check(x, y, t0);
    CHECK(verdict.verdict == Verdict::counterexample_candidate);
    CHECK(verdict.cdf_gap <= 1e-12);
    CHECK(verdict.entropy_gap <= 1e-6);
    CHECK(verdict.conclusion_distance > 0.01);
}

TEST_CASE("theorem_check rejects degenerate t0") {
    const Distribution e(Exponential{1.0});
    CHECK_THROWS_AS(theorem_check(e, e, 0.0), domain_error);
    CHECK_THROWS_AS(theorem_check(e, e, -1.0), domain_error);
}

TEST_CASE("grid axis points") {
    const GridAxis axis{0.5, 2.0, 4};
    const auto pts = axis.points();
    REQUIRE(pts.size() == 4);
    CHECK(pts.front() == 0.5);
    CHECK(pts.back() == 2.0);
    CHECK(GridAxis{1.0, 1.0, 1}.points() == std::vector<double>{1.0});
    CHECK_THROWS_AS((GridAxis{1.0, 2.0, 0}.points()), domain_error);
}

TEST_CASE("uniqueness_probe: exponential sweep stays empty") {
    std::map<std::string, GridAxis> grid;
    grid["rate"] = GridAxis{0.5, 2.0, 6};
    const ProbeReport report = uniqueness_probe(
        FamilyTag::exponential, FamilyTag::exponential, grid,
        GridAxis{0.5, 2.0, 6});
    CHECK(report.cells_total == 36);
    CHECK(report.hits.empty());
}

TEST_CASE("uniqueness_probe: power sweep recovers the conjugate pair") {
    std::map<std::string, GridAxis> grid;
    grid["c"] = GridAxis{0.5, 0.5, 1};
    grid["b"] = GridAxis{1.0, 1.0, 1};
    const ProbeReport report =
        uniqueness_probe(FamilyTag::power, FamilyTag::power, grid,
                         GridAxis{0.5, 0.5, 1});
    REQUIRE(!report.hits.empty());
    bool found = false;
    for (const ProbeHit& hit : report.hits) {
        const auto& py = std::get<PowerFunction>(hit.dist_y.family());
        if (std::fabs(py.exponent - 2.4614) <= 1e-2) found = true;
        CHECK(hit.verdict.entropy_gap <= 1e-6);
        CHECK(hit.verdict.cdf_gap <= 1e-9);
        CHECK(hit.verdict.conclusion_distance > 1e-2);
    }
    CHECK(found);
}

TEST_CASE("uniqueness_probe rejects empty grids") {
    std::map<std::string, GridAxis> grid;
    CHECK_THROWS_AS(uniqueness_probe(FamilyTag::power, FamilyTag::power, grid,
                                     GridAxis{0.5, 1.0, 3}),
                    domain_error);
}

TEST_CASE("uniqueness_probe rejects axes that name no family parameter") {
    std::map<std::string, GridAxis> grid;
    grid["rate"] = GridAxis{0.5, 2.0, 3};
    grid["c"] = GridAxis{0.5, 2.0, 3};
    grid["b"] = GridAxis{0.5, 2.0, 3};
    CHECK_THROWS_AS(uniqueness_probe(FamilyTag::power, FamilyTag::power, grid,
                                     GridAxis{0.5, 1.0, 3}),
                    domain_error);
}
