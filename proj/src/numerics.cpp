#include "pastent/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "pastent/errors.hpp"

namespace pastent {

namespace {

// 15-point Kronrod nodes on [0,1] by symmetry; xgk[1], xgk[3], xgk[5] and
// the center are the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Endpoint-clustering reparameterization of [0,1]: p(0)=0, p(1)=1, and
// p'(s) = 630 s^4 (1-s)^4 vanishes to fourth order at both ends. Composing
// the integrand with p turns an x^(q-1) endpoint singularity into s^(5q-1),
// which plain bisection then resolves.
double cluster_map(double s) {
    return s * s * s * s * s *
           (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))));
}

double cluster_map_deriv(double s) {
    const double u = s * (1.0 - s);
    const double u2 = u * u;
    return 630.0 * u2 * u2;
}

struct Panel {
    double lo, hi;     // in map parameter space
    double value, err;
    int depth;
};

struct MappedIntegrand {
    const RealFunction& f;
    double a, width;

    double operator()(double s) const {
        const double x = a + width * cluster_map(s);
        const double y = f(x);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg << "integrate: non-finite integrand value at x = " << x;
            throw domain_error(msg.str());
        }
        return y * width * cluster_map_deriv(s);
    }
};

// Standard Gauss-Kronrod 7/15 panel with the QUADPACK error estimate.
Panel gk15(const MappedIntegrand& f, double lo, double hi, int depth) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    const double center = 0.5 * (lo + hi);
    const double hlgth = 0.5 * (hi - lo);

    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        fv1[jtw] = f(center - absc);
        fv2[jtw] = f(center + absc);
        const double fsum = fv1[jtw] + fv2[jtw];
        resg += kWg[j] * fsum;
        resk += kWgk[jtw] * fsum;
        resabs += kWgk[jtw] * (std::fabs(fv1[jtw]) + std::fabs(fv2[jtw]));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        fv1[jtwm1] = f(center - absc);
        fv2[jtwm1] = f(center + absc);
        const double fsum = fv1[jtwm1] + fv2[jtwm1];
        resk += kWgk[jtwm1] * fsum;
        resabs += kWgk[jtwm1] * (std::fabs(fv1[jtwm1]) + std::fabs(fv2[jtwm1]));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] *
                  (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    }

    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.depth = depth;
    p.value = resk * hlgth;
    resabs *= std::fabs(hlgth);
    resasc *= std::fabs(hlgth);
    double abserr = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    if (resabs > uflow / (50.0 * eps)) {
        abserr = std::max(eps * 50.0 * resabs, abserr);
    }
    p.err = abserr;
    return p;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw domain_error("QuadratureConfig: tolerances must be positive");
    }
    if (max_depth < 1) {
        throw domain_error("QuadratureConfig: max_depth must be >= 1");
    }
    if (!(tail_cut > 0.0) || tail_cut > 1e-6) {
        throw domain_error("QuadratureConfig: tail_cut must be in (0, 1e-6]");
    }
}

void RootConfig::validate() const {
    if (!(x_tol > 0.0)) {
        throw domain_error("RootConfig: x_tol must be positive");
    }
    if (max_iter < 1) {
        throw domain_error("RootConfig: max_iter must be >= 1");
    }
}

QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw domain_error(
            "integrate: bounds must be finite (truncate infinite tails at "
            "the point where the discarded mass is below tail_cut)");
    }
    if (!(a < b)) {
        throw domain_error("integrate: requires a < b");
    }

    const MappedIntegrand g{f, a, b - a};
    // Keeps pathological integrands from growing the work list without
    // bound; ordinary inputs use a few dozen panels.
    constexpr std::size_t kMaxPanels = 20000;

    std::vector<Panel> panels;
    panels.reserve(256);
    panels.push_back(gk15(g, 0.0, 1.0, 0));

    auto totals = [&panels]() {
        QuadratureResult r;
        for (const Panel& p : panels) {
            r.value += p.value;
            r.err_est += p.err;
        }
        return r;
    };

    for (;;) {
        QuadratureResult total = totals();
        const double tol =
            std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total.value));
        if (total.err_est <= tol) {
            return total;
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            if (panels[i].err > panels[worst].err) worst = i;
        }
        Panel& w = panels[worst];
        const double mid = 0.5 * (w.lo + w.hi);
        if (w.depth >= cfg.max_depth || !(w.lo < mid && mid < w.hi) ||
            panels.size() >= kMaxPanels) {
            std::ostringstream msg;
            msg << "integrate: error estimate " << total.err_est
                << " above tolerance " << tol << " with subdivision budget "
                << "exhausted (max_depth " << cfg.max_depth << ")";
            throw accuracy_error(msg.str(), total.value, total.err_est);
        }
        const Panel left = gk15(g, w.lo, mid, w.depth + 1);
        const Panel right = gk15(g, mid, w.hi, w.depth + 1);
        panels[worst] = left;
        panels.push_back(right);
    }
}

double find_root(const RealFunction& g, double lo, double hi,
                 const RootConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw domain_error("find_root: requires finite lo < hi");
    }
    double flo = g(lo);
    double fhi = g(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi)) {
        throw domain_error("find_root: non-finite value at bracket endpoint");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream msg;
        msg << "find_root: no sign change on [" << lo << ", " << hi << "]";
        throw bracket_error(msg.str());
    }

    double w_mark = hi - lo;  // width when the halving clock last reset
    int since_halve = 0;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        const double width = hi - lo;
        const double mid = 0.5 * (lo + hi);
        if (width <= cfg.x_tol * std::max(1.0, std::fabs(mid))) {
            return mid;
        }
        // Secant step through the bracket endpoints; falls back to the
        // midpoint when it hugs an endpoint or stops shrinking the bracket.
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        const double margin = 0.01 * width;
        if (since_halve >= 2 || !(x > lo + margin && x < hi - margin)) {
            x = mid;
        }
        const double fx = g(x);
        if (!std::isfinite(fx)) {
            throw domain_error("find_root: non-finite value inside bracket");
        }
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= 0.5 * w_mark) {
            w_mark = hi - lo;
            since_halve = 0;
        } else {
            ++since_halve;
        }
    }
    throw accuracy_error("find_root: max_iter exceeded", 0.5 * (lo + hi),
                         hi - lo);
}

double central_diff(const RealFunction& f, double t, double h) {
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(t)) {
        throw domain_error("central_diff: requires finite t and h > 0");
    }
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace pastent
