#include "pastent/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pastent/errors.hpp"

namespace pastent {

namespace {

// Relative half-width of the band around the curve maximum e^{-hbar} inside
// which solve_reversed_hazard reports tangency.
constexpr double kTangentRelTol = 1e-8;

// Finite-difference slack used by reconstruct_cdf: derivative estimates of a
// curve sitting on the tangency overshoot the admissible maximum by
// O(dt^2), so overshoots up to this relative band are clamped onto the
// tangent root instead of failing the whole reconstruction.
constexpr double kDerivativeBand = 5e-2;

double curve_g(double hbar, double phi) {
    return phi * (1.0 - hbar - std::log(phi));
}

}  // namespace

std::string_view regime_name(RootRegime regime) {
    switch (regime) {
        case RootRegime::no_root: return "no_root";
        case RootRegime::tangent: return "tangent";
        case RootRegime::two_roots: return "two_roots";
        case RootRegime::single_root_nonpositive_slope:
            return "single_root_nonpositive_slope";
    }
    throw domain_error("invalid root regime");
}

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::premises_fail: return "premises_fail";
        case Verdict::consistent: return "consistent";
        case Verdict::counterexample_candidate:
            return "counterexample_candidate";
    }
    throw domain_error("invalid verdict");
}

double ode_rhs(double hbar, double phi) {
    if (!(phi > 0.0) || !std::isfinite(phi) || !std::isfinite(hbar)) {
        throw domain_error("ode_rhs: requires finite hbar and phi > 0");
    }
    return curve_g(hbar, phi);
}

RootSolveOutcome solve_reversed_hazard(double hbar, double hprime,
                                       const RootConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(hbar) || !std::isfinite(hprime)) {
        throw domain_error("solve_reversed_hazard: non-finite input");
    }
    const double gmax = std::exp(-hbar);  // g attains gmax at phi = gmax
    if (!std::isfinite(gmax) || gmax <= 0.0) {
        throw domain_error("solve_reversed_hazard: hbar out of range");
    }

    RootSolveOutcome out;
    const auto g_shift = [hbar, hprime](double phi) {
        return curve_g(hbar, phi) - hprime;
    };
    const auto push_root = [&](double r) {
        out.roots.push_back(r);
        out.residuals.push_back(std::fabs(g_shift(r)));
    };

    if (std::fabs(hprime - gmax) <= kTangentRelTol * gmax) {
        out.regime = RootRegime::tangent;
        push_root(gmax);
        return out;
    }
    if (hprime > gmax) {
        out.regime = RootRegime::no_root;
        return out;
    }
    if (hprime <= 0.0) {
        out.regime = RootRegime::single_root_nonpositive_slope;
        // The root sits at or beyond e * gmax where g crosses zero; grow the
        // bracket until g falls below hprime.
        double hi = std::exp(1.0) * gmax;
        while (g_shift(hi) > 0.0) {
            hi *= 2.0;
            if (hi > 1e300) {
                throw numerical_error(
                    "solve_reversed_hazard: bracket growth overflow");
            }
        }
        push_root(find_root(g_shift, gmax, hi, cfg));
        return out;
    }

    // 0 < hprime < gmax: one root on the rising side, one on the falling.
    out.regime = RootRegime::two_roots;
    double lo = gmax;
    while (curve_g(hbar, lo) > hprime) {
        lo *= 0.5;
        if (lo < 1e-300) {
            throw numerical_error(
                "solve_reversed_hazard: lower bracket underflow");
        }
    }
    push_root(find_root(g_shift, lo, gmax, cfg));
    push_root(find_root(g_shift, gmax, std::exp(1.0) * gmax, cfg));
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

namespace {

// Second-order derivative estimates on a (possibly nonuniform) grid;
// one-sided three-point stencils at the two ends.
std::vector<double> grid_derivative(const std::vector<double>& t,
                                    const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> d(n);
    {
        const double h1 = t[1] - t[0];
        const double h2 = t[2] - t[1];
        d[0] = -f[0] * (2.0 * h1 + h2) / (h1 * (h1 + h2)) +
               f[1] * (h1 + h2) / (h1 * h2) -
               f[2] * h1 / (h2 * (h1 + h2));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        d[i] = -f[i - 1] * h2 / (h1 * (h1 + h2)) +
               f[i] * (h2 - h1) / (h1 * h2) +
               f[i + 1] * h1 / (h2 * (h1 + h2));
    }
    {
        const double h1 = t[n - 2] - t[n - 3];
        const double h2 = t[n - 1] - t[n - 2];
        d[n - 1] = f[n - 3] * h2 / (h1 * (h1 + h2)) -
                   f[n - 2] * (h1 + h2) / (h1 * h2) +
                   f[n - 1] * (h1 + 2.0 * h2) / (h2 * (h1 + h2));
    }
    return d;
}

double nearest_root(const std::vector<double>& roots, double prev) {
    double best = roots.front();
    for (double r : roots) {
        if (std::fabs(r - prev) < std::fabs(best - prev)) best = r;
    }
    return best;
}

// One Heun step of the entropy evolution from (t_prev, hbar_prev) to t_next,
// with the reversed hazard taking the value phi_prev at t_prev and phi_next
// at t_next.
double heun_step(double hbar_prev, double phi_prev, double phi_next,
                 double dt) {
    const double k1 = curve_g(hbar_prev, phi_prev);
    const double k2 = curve_g(hbar_prev + dt * k1, phi_next);
    return hbar_prev + 0.5 * dt * (k1 + k2);
}

}  // namespace

ReconstructionResult reconstruct_cdf(const MeasureCurve& curve, Anchor anchor,
                                     const RootConfig& cfg) {
    cfg.validate();
    curve.validate();
    if (curve.kind != MeasureKind::past_direct) {
        throw domain_error("reconstruct_cdf: curve kind must be past_direct");
    }
    const std::size_t n = curve.grid.size();
    if (n < 5) {
        throw domain_error("reconstruct_cdf: curve must have at least 5 points");
    }
    if (!(anchor.cdf > 0.0 && anchor.cdf <= 1.0)) {
        throw domain_error("reconstruct_cdf: anchor cdf must lie in (0, 1]");
    }
    std::size_t ia = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(curve.grid[i] - anchor.t) <=
            1e-9 * std::max(1.0, std::fabs(anchor.t))) {
            ia = i;
            break;
        }
    }
    if (ia == n) {
        throw domain_error("reconstruct_cdf: anchor t is not a grid point");
    }

    const std::vector<double>& t = curve.grid;
    const std::vector<double>& hbar = curve.values;
    const std::vector<double> hprime = grid_derivative(t, hbar);

    std::vector<std::vector<double>> candidates(n);
    std::vector<RootRegime> regimes(n);
    for (std::size_t i = 0; i < n; ++i) {
        RootSolveOutcome sol = solve_reversed_hazard(hbar[i], hprime[i], cfg);
        if (sol.regime == RootRegime::no_root) {
            const double gmax = std::exp(-hbar[i]);
            if (hprime[i] <= gmax * (1.0 + kDerivativeBand)) {
                // Derivative noise pushed the estimate just past the curve
                // maximum; the admissible value closest to the data is the
                // tangent root.
                sol.regime = RootRegime::tangent;
                sol.roots.assign(1, gmax);
                sol.residuals.assign(1, std::fabs(hprime[i] - gmax));
            } else {
                std::ostringstream msg;
                msg << "reconstruct_cdf: no admissible reversed hazard rate "
                       "at t = "
                    << t[i] << " (curve slope " << hprime[i]
                    << " exceeds the attainable maximum " << gmax << ")";
                throw reconstruction_error(msg.str());
            }
        }
        regimes[i] = sol.regime;
        candidates[i] = std::move(sol.roots);
    }

    // Branch choice at the anchor: when two roots exist, trially propagate
    // both over the first few steps and compare the ODE re-integration
    // against the input. Conjugate families share a past-entropy curve
    // exactly (both roots solve the relation at every point), so the scores
    // often differ only by integrator truncation; the descending-side root
    // is kept unless it is decisively worse.
    std::vector<double> phi(n, 0.0);
    if (candidates[ia].size() < 2) {
        phi[ia] = candidates[ia].front();
    } else {
        const std::size_t right = n - 1 - ia;
        const int dir = (right >= ia) ? 1 : -1;
        const std::size_t avail = (dir > 0) ? right : ia;
        const std::size_t steps = std::min<std::size_t>(3, avail);
        const auto trial_score = [&](double root) {
            double h = hbar[ia];
            double prev_phi = root;
            std::size_t j = ia;
            double score = 0.0;
            for (std::size_t s = 0; s < steps; ++s) {
                const std::size_t k = (dir > 0) ? j + 1 : j - 1;
                const double next_phi = nearest_root(candidates[k], prev_phi);
                h = heun_step(h, prev_phi, next_phi, t[k] - t[j]);
                score += std::fabs(h - hbar[k]);
                prev_phi = next_phi;
                j = k;
            }
            return score;
        };
        const double low = candidates[ia].front();
        const double high = candidates[ia].back();
        phi[ia] =
            (trial_score(high) <= 100.0 * trial_score(low)) ? high : low;
    }
    for (std::size_t i = ia + 1; i < n; ++i) {
        phi[i] = nearest_root(candidates[i], phi[i - 1]);
    }
    for (std::size_t i = ia; i-- > 0;) {
        phi[i] = nearest_root(candidates[i], phi[i + 1]);
    }

    ReconstructionResult result;
    result.grid = t;
    result.phi = phi;
    result.anchor = anchor;
    for (std::size_t i = 1; i < n; ++i) {
        if (regimes[i] != regimes[i - 1]) ++result.branch_switches;
    }

    // log F accumulates from the anchor by the trapezoid rule over phi.
    std::vector<double> log_cdf(n, 0.0);
    log_cdf[ia] = std::log(anchor.cdf);
    for (std::size_t i = ia + 1; i < n; ++i) {
        log_cdf[i] = log_cdf[i - 1] +
                     0.5 * (t[i] - t[i - 1]) * (phi[i] + phi[i - 1]);
    }
    for (std::size_t i = ia; i-- > 0;) {
        log_cdf[i] = log_cdf[i + 1] -
                     0.5 * (t[i + 1] - t[i]) * (phi[i + 1] + phi[i]);
    }
    result.cdf.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double F = std::exp(log_cdf[i]);
        if (F > 1.0 + 1e-9) {
            std::ostringstream msg;
            msg << "reconstruct_cdf: recovered cdf " << F << " at t = " << t[i]
                << " exceeds 1";
            throw reconstruction_error(msg.str());
        }
        result.cdf[i] = std::min(F, 1.0);
    }
    result.cdf[ia] = anchor.cdf;
    for (std::size_t i = 1; i < n; ++i) {
        if (result.cdf[i] < result.cdf[i - 1]) {
            throw reconstruction_error(
                "reconstruct_cdf: recovered cdf is not nondecreasing");
        }
    }

    // Full ODE re-integration as a self-check of the recovered branch.
    double max_residual = 0.0;
    double h = hbar[ia];
    for (std::size_t i = ia + 1; i < n; ++i) {
        h = heun_step(h, phi[i - 1], phi[i], t[i] - t[i - 1]);
        max_residual = std::max(max_residual, std::fabs(h - hbar[i]));
    }
    h = hbar[ia];
    for (std::size_t i = ia; i-- > 0;) {
        h = heun_step(h, phi[i + 1], phi[i], t[i] - t[i + 1]);
        max_residual = std::max(max_residual, std::fabs(h - hbar[i]));
    }
    result.max_selfcheck_residual = max_residual;
    return result;
}

double mismatch_integral(const Distribution& dist_x,
                         const Distribution& dist_y, double v,
                         const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(v > 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << "mismatch_integral: v must lie in (0, 1], got " << v;
        throw domain_error(msg.str());
    }
    const double u_max = std::nextafter(1.0, 0.0);  // keeps nodes inside (0,1)
    const auto integrand = [&dist_x, &dist_y, u_max](double u) {
        const double uc = std::min(u, u_max);
        return dist_x.log_pdf(dist_x.quantile(uc)) -
               dist_y.log_pdf(dist_y.quantile(uc));
    };
    return integrate(integrand, 0.0, v, cfg).value;
}

TheoremVerdict theorem_check(const Distribution& dist_x,
                             const Distribution& dist_y, double t0,
                             double premise_tol, double separation_tol,
                             const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(premise_tol > 0.0) || !(separation_tol > 0.0)) {
        throw domain_error("theorem_check: tolerances must be positive");
    }
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
        throw domain_error("theorem_check: t0 must be positive and finite");
    }
    const double fx = dist_x.cdf(t0);
    const double fy = dist_y.cdf(t0);
    if (fx <= 0.0 || fy <= 0.0) {
        throw degenerate_error(
            "theorem_check: both cdf values at t0 must be positive");
    }

    TheoremVerdict out;
    out.t0 = t0;
    out.cdf_gap = std::fabs(fx - fy);
    out.entropy_gap = std::fabs(past_entropy_direct(dist_x, t0, cfg) -
                                past_entropy_direct(dist_y, t0, cfg));
    out.mismatch = mismatch_integral(dist_x, dist_y, fx, cfg);

    constexpr int kConclusionPoints = 256;
    double distance = 0.0;
    for (int j = 1; j <= kConclusionPoints; ++j) {
        const double t = t0 * static_cast<double>(j) / kConclusionPoints;
        distance = std::max(distance, std::fabs(dist_x.cdf(t) - dist_y.cdf(t)));
    }
    out.conclusion_distance = distance;

    if (out.cdf_gap > premise_tol || out.entropy_gap > premise_tol) {
        out.verdict = Verdict::premises_fail;
    } else if (out.conclusion_distance > separation_tol) {
        out.verdict = Verdict::counterexample_candidate;
    } else {
        out.verdict = Verdict::consistent;
    }
    return out;
}

std::vector<double> GridAxis::points() const {
    if (n == 0) throw domain_error("grid axis must have at least one point");
    if (!(lo <= hi)) throw domain_error("grid axis requires lo <= hi");
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(i + 1 == n ? hi : lo + step * static_cast<double>(i));
    }
    return out;
}

namespace {

std::vector<std::string> family_axis_names(FamilyTag family) {
    switch (family) {
        case FamilyTag::uniform: return {"b"};
        case FamilyTag::exponential: return {"rate"};
        case FamilyTag::weibull: return {"shape", "scale"};
        case FamilyTag::power: return {"c", "b"};
    }
    throw domain_error("invalid family tag");
}

const GridAxis& required_axis(const std::map<std::string, GridAxis>& grid,
                              const std::string& name, FamilyTag family) {
    const auto it = grid.find(name);
    if (it == grid.end()) {
        throw domain_error("uniqueness_probe: missing grid axis '" + name +
                           "' for family " +
                           std::string(family_name(family)));
    }
    return it->second;
}

// Parameter combinations for the swept family, in a fixed axis order.
std::vector<Distribution> sweep_family(
    FamilyTag family, const std::map<std::string, GridAxis>& grid) {
    const std::vector<std::string> names = family_axis_names(family);
    for (const auto& [name, axis] : grid) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw domain_error("uniqueness_probe: grid axis '" + name +
                               "' does not name a parameter of family " +
                               std::string(family_name(family)));
        }
    }
    std::vector<Distribution> out;
    switch (family) {
        case FamilyTag::uniform: {
            for (double b : required_axis(grid, "b", family).points()) {
                out.push_back(Distribution(Uniform{b}));
            }
            break;
        }
        case FamilyTag::exponential: {
            for (double r : required_axis(grid, "rate", family).points()) {
                out.push_back(Distribution(Exponential{r}));
            }
            break;
        }
        case FamilyTag::weibull: {
            const auto shapes = required_axis(grid, "shape", family).points();
            const auto scales = required_axis(grid, "scale", family).points();
            for (double k : shapes) {
                for (double s : scales) {
                    out.push_back(Distribution(Weibull{k, s}));
                }
            }
            break;
        }
        case FamilyTag::power: {
            const auto cs = required_axis(grid, "c", family).points();
            const auto bs = required_axis(grid, "b", family).points();
            for (double c : cs) {
                for (double b : bs) {
                    out.push_back(Distribution(PowerFunction{c, b}));
                }
            }
            break;
        }
    }
    return out;
}

// Shape range scanned when aligning the partner's entropy premise. Shapes
// below ~0.05 put an endpoint singularity beyond the quadrature budget and
// are treated as unavailable scan nodes.
constexpr double kShapeScanLo = 0.05;
constexpr double kShapeScanHi = 40.0;
constexpr int kShapeScanPoints = 48;

// Partner distributions whose cdf at t0 equals v exactly (scale matched in
// closed form) and whose past entropy at t0 equals `target` (shape solved
// numerically when the family has one).
std::vector<Distribution> align_partner(FamilyTag family, double v, double t0,
                                        double target,
                                        const QuadratureConfig& cfg,
                                        const RootConfig& root_cfg) {
    std::vector<Distribution> out;
    switch (family) {
        case FamilyTag::uniform: {
            out.push_back(Distribution(Uniform{t0 / v}));
            return out;
        }
        case FamilyTag::exponential: {
            if (v >= 1.0) return out;  // no finite-rate match for F(t0) = 1
            out.push_back(Distribution(Exponential{-std::log1p(-v) / t0}));
            return out;
        }
        case FamilyTag::weibull:
        case FamilyTag::power: {
            const bool weibull = (family == FamilyTag::weibull);
            if (weibull && v >= 1.0) return out;
            const auto make = [&](double shape) {
                if (weibull) {
                    const double scale =
                        t0 / std::pow(-std::log1p(-v), 1.0 / shape);
                    return Distribution(Weibull{shape, scale});
                }
                const double scale = t0 * std::pow(v, -1.0 / shape);
                return Distribution(PowerFunction{shape, scale});
            };
            const auto residual = [&](double shape) {
                return past_entropy_direct(make(shape), t0, cfg) - target;
            };
            const double llo = std::log(kShapeScanLo);
            const double lhi = std::log(kShapeScanHi);
            bool have_prev = false;
            double prev_shape = 0.0;
            double prev_res = 0.0;
            for (int i = 0; i < kShapeScanPoints; ++i) {
                const double shape = std::exp(
                    llo + (lhi - llo) * i / (kShapeScanPoints - 1));
                double res = 0.0;
                try {
                    res = residual(shape);
                } catch (const std::exception&) {
                    have_prev = false;  // unusable node, no bracket across it
                    continue;
                }
                if (res == 0.0) {
                    out.push_back(make(shape));
                } else if (have_prev && (prev_res < 0.0) != (res < 0.0)) {
                    try {
                        const double root =
                            find_root(residual, prev_shape, shape, root_cfg);
                        out.push_back(make(root));
                    } catch (const std::exception&) {
                        // refinement failed inside the bracket; skip this
                        // candidate rather than the whole cell
                    }
                }
                have_prev = true;
                prev_shape = shape;
                prev_res = res;
            }
            return out;
        }
    }
    return out;
}

}  // namespace

ProbeReport uniqueness_probe(FamilyTag family_x, FamilyTag family_y,
                             const std::map<std::string, GridAxis>& param_grid,
                             const GridAxis& t0_grid, double premise_tol,
                             double separation_tol,
                             const QuadratureConfig& cfg) {
    cfg.validate();
    if (param_grid.empty() || t0_grid.n == 0) {
        throw domain_error("uniqueness_probe: grids must be nonempty");
    }
    const std::vector<Distribution> xs = sweep_family(family_x, param_grid);
    const std::vector<double> t0s = t0_grid.points();

    // Entropy alignment tolerates coarser quadrature than the final
    // verdicts; theorem_check below re-evaluates at the caller's accuracy.
    QuadratureConfig align_cfg = cfg;
    align_cfg.abs_tol = std::max(cfg.abs_tol, 1e-8);
    align_cfg.rel_tol = std::max(cfg.rel_tol, 1e-8);
    RootConfig align_root;
    align_root.x_tol = 1e-11;

    ProbeReport report;
    report.cells_total = xs.size() * t0s.size();
    for (const Distribution& x : xs) {
        for (double t0 : t0s) {
            try {
                const double v = x.cdf(t0);
                if (v <= cfg.tail_cut) {
                    ++report.cells_skipped;
                    continue;
                }
                const double target = past_entropy_direct(x, t0, align_cfg);
                const std::vector<Distribution> partners = align_partner(
                    family_y, v, t0, target, align_cfg, align_root);
                if (partners.empty()) {
                    ++report.cells_skipped;
                    continue;
                }
                for (const Distribution& y : partners) {
                    const TheoremVerdict verdict = theorem_check(
                        x, y, t0, premise_tol, separation_tol, cfg);
                    if (verdict.verdict == Verdict::counterexample_candidate) {
                        report.hits.push_back(ProbeHit{x, y, verdict});
                    }
                }
            } catch (const std::exception& e) {
                ++report.cells_skipped;
                if (report.errors.size() < 8) {
                    std::ostringstream msg;
                    msg << "cell " << x.spec() << ", t0 = " << t0 << ": "
                        << e.what();
                    report.errors.push_back(msg.str());
                }
            }
        }
    }
    std::stable_sort(report.hits.begin(), report.hits.end(),
                     [](const ProbeHit& a, const ProbeHit& b) {
                         return a.verdict.conclusion_distance >
                                b.verdict.conclusion_distance;
                     });
    return report;
}

}  // namespace pastent
