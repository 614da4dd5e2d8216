#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pastent/distribution.hpp"
#include "pastent/measures.hpp"
#include "pastent/numerics.hpp"

namespace pastent {

/// Right-hand side of the past-entropy evolution
///   d/dt hbar(t) = phi(t) * (1 - hbar(t) - log phi(t)),
/// obtained by differentiating the conditional-entropy integral in t.
double ode_rhs(double hbar, double phi);

enum class RootRegime {
    no_root,
    tangent,
    two_roots,
    single_root_nonpositive_slope,
};

std::string_view regime_name(RootRegime regime);

struct RootSolveOutcome {
    std::vector<double> roots;      // ascending candidate phi values
    std::vector<double> residuals;  // |g(root) - hprime| per root
    RootRegime regime = RootRegime::no_root;
};

/// Solves g(phi) = phi * (1 - hbar - log phi) = hprime for phi > 0.
///
/// g rises from 0 to its maximum e^{-hbar} at phi* = e^{-hbar}, then falls
/// through zero at phi = e^{1-hbar}. Classification:
///   hprime above the maximum            -> no_root
///   hprime at the maximum (1e-8 rel.)   -> tangent, root phi*
///   0 < hprime < maximum                -> two_roots, one on each side
///   hprime <= 0                         -> single root at or beyond e^{1-hbar}
RootSolveOutcome solve_reversed_hazard(double hbar, double hprime,
                                       const RootConfig& cfg = {});

struct Anchor {
    double t = 0.0;
    double cdf = 1.0;
};

struct ReconstructionResult {
    std::vector<double> grid;
    std::vector<double> phi;
    std::vector<double> cdf;
    Anchor anchor;
    int branch_switches = 0;
    double max_selfcheck_residual = 0.0;
};

/// Recovers the reversed hazard rate and the cdf from a past-entropy curve.
///
/// The curve derivative is estimated by second-order differences (one-sided
/// at the ends) and inverted pointwise with solve_reversed_hazard. When two
/// roots exist at the anchor, both branches are trially propagated three
/// grid steps and the one whose ODE re-integration tracks the input curve
/// is kept; afterwards each point takes the root nearest the previous one.
/// log F accumulates from the anchor by the trapezoid rule over phi, and
/// the result carries the sup-norm residual of a full ODE re-integration.
ReconstructionResult reconstruct_cdf(const MeasureCurve& curve, Anchor anchor,
                                     const RootConfig& cfg = {});

/// int_0^v log( f(F^{-1}(u)) / g(G^{-1}(u)) ) du for v in (0,1].
double mismatch_integral(const Distribution& dist_x, const Distribution& dist_y,
                         double v, const QuadratureConfig& cfg = {});

enum class Verdict { premises_fail, consistent, counterexample_candidate };

std::string_view verdict_name(Verdict verdict);

struct TheoremVerdict {
    double t0 = 0.0;
    double cdf_gap = 0.0;
    double entropy_gap = 0.0;
    double mismatch = 0.0;
    double conclusion_distance = 0.0;
    Verdict verdict = Verdict::consistent;
};

/// Tests whether equal cdf values and equal past entropies at a single t0
/// go along with equality of the two distribution functions below t0.
/// conclusion_distance is the sup of |F - G| over 256 uniform points on
/// (0, t0].
TheoremVerdict theorem_check(const Distribution& dist_x,
                             const Distribution& dist_y, double t0,
                             double premise_tol = 1e-6,
                             double separation_tol = 1e-2,
                             const QuadratureConfig& cfg = {});

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;

    std::vector<double> points() const;
};

struct ProbeHit {
    Distribution dist_x;
    Distribution dist_y;
    TheoremVerdict verdict;
};

struct ProbeReport {
    std::vector<ProbeHit> hits;  // counterexample candidates, worst first
    std::size_t cells_total = 0;
    std::size_t cells_skipped = 0;
    std::vector<std::string> errors;  // at most a handful, for diagnostics
};

/// Sweeps familyX over the parameter grid and every t0; in each cell the
/// partner distribution is aligned to the premises (its scale matched so
/// the cdf values at t0 agree exactly, its shape - when the family has
/// one - solved so the past entropies agree), then theorem_check runs on
/// the aligned pair. Only counterexample candidates are returned, sorted
/// by descending conclusion_distance. Per-cell failures are recorded and
/// skipped.
ProbeReport uniqueness_probe(FamilyTag family_x, FamilyTag family_y,
                             const std::map<std::string, GridAxis>& param_grid,
                             const GridAxis& t0_grid, double premise_tol = 1e-6,
                             double separation_tol = 1e-2,
                             const QuadratureConfig& cfg = {});

}  // namespace pastent
