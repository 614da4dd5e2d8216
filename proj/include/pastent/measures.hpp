#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pastent/distribution.hpp"
#include "pastent/numerics.hpp"

namespace pastent {

enum class MeasureKind {
    shannon,
    residual,
    past_direct,
    past_pit,
    past_condexp,
    reversed_hazard,
};

MeasureKind parse_measure_kind(std::string_view name);
std::string_view measure_name(MeasureKind kind);

struct MeasureCurve {
    MeasureKind kind = MeasureKind::past_direct;
    std::vector<double> grid;    // strictly increasing times
    std::vector<double> values;  // same length, finite

    void validate() const;
};

/// Finite integration limit: the support's upper end, or for unbounded
/// support the point where the remaining mass drops below cfg.tail_cut.
double effective_upper(const Distribution& dist, const QuadratureConfig& cfg);

/// Differential entropy -int f log f over the support, in nats.
double shannon_entropy(const Distribution& dist,
                       const QuadratureConfig& cfg = {});

/// Entropy of the remaining lifetime given survival to t,
/// -int_t (f/S(t)) log(f/S(t)).
double residual_entropy(const Distribution& dist, double t,
                        const QuadratureConfig& cfg = {});

/// Entropy of the lifetime given failure before t, computed directly in
/// x-space: -int_0^t (f/F(t)) log(f/F(t)).
double past_entropy_direct(const Distribution& dist, double t,
                           const QuadratureConfig& cfg = {});

/// Same quantity through the probability integral transform:
/// log F(t) - (1/F(t)) int_0^{F(t)} log f(F^{-1}(u)) du.
double past_entropy_pit(const Distribution& dist, double t,
                        const QuadratureConfig& cfg = {});

/// Same quantity as one minus the conditional mean of log of the reversed
/// hazard rate: 1 - (1/F(t)) int_0^t f(x) log(f(x)/F(x)) dx.
double past_entropy_condexp(const Distribution& dist, double t,
                            const QuadratureConfig& cfg = {});

/// Reversed hazard rate f(t)/F(t) on the support interior.
double reversed_hazard(const Distribution& dist, double t);

double evaluate_measure(const Distribution& dist, MeasureKind kind, double t,
                        const QuadratureConfig& cfg = {});

/// The requested measure on a uniform grid of `points` values spanning
/// [t_min, t_max]. Any per-point failure aborts with the offending t in
/// the message.
MeasureCurve measure_curve(const Distribution& dist, MeasureKind kind,
                           double t_min, double t_max, std::size_t points,
                           const QuadratureConfig& cfg = {});

}  // namespace pastent
