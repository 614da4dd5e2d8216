#include "pastent/measures.hpp"

#include <cmath>
#include <sstream>

#include "pastent/errors.hpp"

namespace pastent {

namespace {

[[noreturn]] void degenerate(const char* what, double t, double mass) {
    std::ostringstream msg;
    msg << what << ": conditioning mass " << mass << " at t = " << t
        << " is numerically zero";
    throw degenerate_error(msg.str());
}

}  // namespace

MeasureKind parse_measure_kind(std::string_view name) {
    if (name == "shannon") return MeasureKind::shannon;
    if (name == "residual") return MeasureKind::residual;
    if (name == "past_direct") return MeasureKind::past_direct;
    if (name == "past_pit") return MeasureKind::past_pit;
    if (name == "past_condexp") return MeasureKind::past_condexp;
    if (name == "reversed_hazard") return MeasureKind::reversed_hazard;
    throw domain_error(
        "unknown measure '" + std::string(name) +
        "' (expected "
        "shannon|residual|past_direct|past_pit|past_condexp|reversed_hazard)");
}

std::string_view measure_name(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::shannon: return "shannon";
        case MeasureKind::residual: return "residual";
        case MeasureKind::past_direct: return "past_direct";
        case MeasureKind::past_pit: return "past_pit";
        case MeasureKind::past_condexp: return "past_condexp";
        case MeasureKind::reversed_hazard: return "reversed_hazard";
    }
    throw domain_error("invalid measure kind");
}

void MeasureCurve::validate() const {
    if (grid.size() != values.size()) {
        throw domain_error("MeasureCurve: grid/value length mismatch");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) {
            throw domain_error("MeasureCurve: non-finite entry");
        }
        if (i > 0 && !(grid[i - 1] < grid[i])) {
            throw domain_error("MeasureCurve: grid must be strictly increasing");
        }
    }
}

double effective_upper(const Distribution& dist, const QuadratureConfig& cfg) {
    const Support& s = dist.support();
    if (s.finite_upper()) return s.upper;
    return dist.quantile(1.0 - cfg.tail_cut);
}

double shannon_entropy(const Distribution& dist, const QuadratureConfig& cfg) {
    cfg.validate();
    const double upper = effective_upper(dist, cfg);
    const auto integrand = [&dist](double x) {
        const double p = dist.pdf(x);
        if (p <= 0.0) return 0.0;
        return p * dist.log_pdf(x);
    };
    return -integrate(integrand, dist.support().lower, upper, cfg).value;
}

double residual_entropy(const Distribution& dist, double t,
                        const QuadratureConfig& cfg) {
    cfg.validate();
    const double surv = dist.survival(t);
    if (surv <= cfg.tail_cut) degenerate("residual_entropy", t, surv);
    const double start = std::max(t, dist.support().lower);
    // The integrand is the conditional density given X > t, so the mass
    // discarded by truncation must be tail_cut relative to survival(t).
    double upper = dist.support().upper;
    if (!dist.support().finite_upper()) {
        double u = 1.0 - cfg.tail_cut * surv;
        if (u >= 1.0) u = std::nextafter(1.0, 0.0);
        upper = dist.quantile(u);
    }
    const double log_surv = std::log(surv);
    const auto integrand = [&dist, surv, log_surv](double x) {
        const double p = dist.pdf(x);
        if (p <= 0.0) return 0.0;
        return (p / surv) * (dist.log_pdf(x) - log_surv);
    };
    return -integrate(integrand, start, upper, cfg).value;
}

namespace {

double past_mass_or_throw(const char* what, const Distribution& dist, double t,
                          const QuadratureConfig& cfg) {
    const double mass = dist.cdf(t);
    if (mass <= cfg.tail_cut) degenerate(what, t, mass);
    return mass;
}

}  // namespace

double past_entropy_direct(const Distribution& dist, double t,
                           const QuadratureConfig& cfg) {
    cfg.validate();
    const double mass = past_mass_or_throw("past_entropy_direct", dist, t, cfg);
    const double upper = std::min(t, effective_upper(dist, cfg));
    const double log_mass = std::log(mass);
    const auto integrand = [&dist, mass, log_mass](double x) {
        const double p = dist.pdf(x);
        if (p <= 0.0) return 0.0;
        return (p / mass) * (dist.log_pdf(x) - log_mass);
    };
    return -integrate(integrand, dist.support().lower, upper, cfg).value;
}

double past_entropy_pit(const Distribution& dist, double t,
                        const QuadratureConfig& cfg) {
    cfg.validate();
    const double mass = past_mass_or_throw("past_entropy_pit", dist, t, cfg);
    // Deep subdivision next to u = 1 can round a node onto 1 exactly when
    // mass == 1; one ulp below keeps the quantile defined and perturbs the
    // integral far below tolerance.
    const double u_max = std::nextafter(1.0, 0.0);
    const auto integrand = [&dist, u_max](double u) {
        return dist.log_pdf(dist.quantile(std::min(u, u_max)));
    };
    const double integral = integrate(integrand, 0.0, mass, cfg).value;
    return std::log(mass) - integral / mass;
}

double past_entropy_condexp(const Distribution& dist, double t,
                            const QuadratureConfig& cfg) {
    cfg.validate();
    const double mass =
        past_mass_or_throw("past_entropy_condexp", dist, t, cfg);
    const double upper = std::min(t, effective_upper(dist, cfg));
    // E[log phi(X) | X < t] with phi = f/F; the log F(x) factor is finite
    // and integrable against f even though it diverges at the lower end.
    const auto integrand = [&dist](double x) {
        const double p = dist.pdf(x);
        if (p <= 0.0) return 0.0;
        return p * (dist.log_pdf(x) - std::log(dist.cdf(x)));
    };
    const double integral =
        integrate(integrand, dist.support().lower, upper, cfg).value;
    return 1.0 - integral / mass;
}

double reversed_hazard(const Distribution& dist, double t) {
    const Support& s = dist.support();
    if (!(t > s.lower) || t > s.upper) {
        std::ostringstream msg;
        msg << "reversed_hazard: t = " << t
            << " outside the support interior (" << s.lower << ", " << s.upper
            << "]";
        throw domain_error(msg.str());
    }
    const double mass = dist.cdf(t);
    if (mass <= 0.0) degenerate("reversed_hazard", t, mass);
    return dist.pdf(t) / mass;
}

double evaluate_measure(const Distribution& dist, MeasureKind kind, double t,
                        const QuadratureConfig& cfg) {
    switch (kind) {
        case MeasureKind::shannon: return shannon_entropy(dist, cfg);
        case MeasureKind::residual: return residual_entropy(dist, t, cfg);
        case MeasureKind::past_direct: return past_entropy_direct(dist, t, cfg);
        case MeasureKind::past_pit: return past_entropy_pit(dist, t, cfg);
        case MeasureKind::past_condexp:
            return past_entropy_condexp(dist, t, cfg);
        case MeasureKind::reversed_hazard: return reversed_hazard(dist, t);
    }
    throw domain_error("invalid measure kind");
}

MeasureCurve measure_curve(const Distribution& dist, MeasureKind kind,
                           double t_min, double t_max, std::size_t points,
                           const QuadratureConfig& cfg) {
    const Support& s = dist.support();
    if (points < 2) throw domain_error("measure_curve: points must be >= 2");
    if (!(s.lower < t_min)) {
        std::ostringstream msg;
        msg << "measure_curve: t_min = " << t_min
            << " must exceed the support lower end " << s.lower;
        throw domain_error(msg.str());
    }
    if (!(t_min < t_max) || t_max > s.upper) {
        throw domain_error(
            "measure_curve: requires t_min < t_max <= support upper end");
    }

    MeasureCurve curve;
    curve.kind = kind;
    curve.grid.reserve(points);
    curve.values.reserve(points);
    const double step = (t_max - t_min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double t =
            (i + 1 == points) ? t_max : t_min + step * static_cast<double>(i);
        curve.grid.push_back(t);
    }
    for (double t : curve.grid) {
        try {
            curve.values.push_back(evaluate_measure(dist, kind, t, cfg));
        } catch (const accuracy_error& e) {
            std::ostringstream msg;
            msg << "measure_curve: failure at t = " << t << ": " << e.what();
            throw accuracy_error(msg.str(), e.partial_value, e.error_estimate);
        } catch (const domain_error& e) {
            std::ostringstream msg;
            msg << "measure_curve: failure at t = " << t << ": " << e.what();
            throw domain_error(msg.str());
        }
    }
    curve.validate();
    return curve;
}

}  // namespace pastent
