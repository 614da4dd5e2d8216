#include "pastent/distribution.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "pastent/errors.hpp"

namespace pastent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        std::ostringstream msg;
        msg << "distribution parameter " << name
            << " must be strictly positive and finite, got " << v;
        throw domain_error(msg.str());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

bool Support::finite_upper() const { return std::isfinite(upper); }

FamilyTag parse_family_tag(std::string_view name) {
    if (name == "uniform") return FamilyTag::uniform;
    if (name == "exp") return FamilyTag::exponential;
    if (name == "weibull") return FamilyTag::weibull;
    if (name == "power") return FamilyTag::power;
    throw domain_error("unknown distribution family '" + std::string(name) +
                       "' (expected uniform|exp|weibull|power)");
}

std::string_view family_name(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::uniform: return "uniform";
        case FamilyTag::exponential: return "exp";
        case FamilyTag::weibull: return "weibull";
        case FamilyTag::power: return "power";
    }
    throw domain_error("invalid family tag");
}

Distribution::Distribution(Family family) : family_(std::move(family)) {
    struct Visitor {
        Support operator()(const Uniform& u) const {
            require_positive(u.scale, "b");
            return Support{0.0, u.scale};
        }
        Support operator()(const Exponential& e) const {
            require_positive(e.rate, "rate");
            return Support{0.0, kInf};
        }
        Support operator()(const Weibull& w) const {
            require_positive(w.shape, "shape");
            require_positive(w.scale, "scale");
            return Support{0.0, kInf};
        }
        Support operator()(const PowerFunction& p) const {
            require_positive(p.exponent, "c");
            require_positive(p.scale, "b");
            return Support{0.0, p.scale};
        }
    };
    support_ = std::visit(Visitor{}, family_);
}

FamilyTag Distribution::tag() const {
    struct Visitor {
        FamilyTag operator()(const Uniform&) const { return FamilyTag::uniform; }
        FamilyTag operator()(const Exponential&) const {
            return FamilyTag::exponential;
        }
        FamilyTag operator()(const Weibull&) const { return FamilyTag::weibull; }
        FamilyTag operator()(const PowerFunction&) const {
            return FamilyTag::power;
        }
    };
    return std::visit(Visitor{}, family_);
}

double Distribution::pdf(double x) const {
    if (!std::isfinite(x)) throw domain_error("pdf: x must be finite");
    if (x < support_.lower || x > support_.upper) return 0.0;
    struct Visitor {
        double x;
        double operator()(const Uniform& u) const { return 1.0 / u.scale; }
        double operator()(const Exponential& e) const {
            return e.rate * std::exp(-e.rate * x);
        }
        double operator()(const Weibull& w) const {
            if (x == 0.0) {
                if (w.shape > 1.0) return 0.0;
                if (w.shape == 1.0) return 1.0 / w.scale;
                return kInf;  // density unbounded at the origin for k < 1
            }
            const double z = x / w.scale;
            const double zk = std::pow(z, w.shape);
            return (w.shape / w.scale) * std::pow(z, w.shape - 1.0) *
                   std::exp(-zk);
        }
        double operator()(const PowerFunction& p) const {
            if (x == 0.0) {
                if (p.exponent > 1.0) return 0.0;
                if (p.exponent == 1.0) return 1.0 / p.scale;
                return kInf;
            }
            return (p.exponent / p.scale) *
                   std::pow(x / p.scale, p.exponent - 1.0);
        }
    };
    return std::visit(Visitor{x}, family_);
}

double Distribution::log_pdf(double x) const {
    if (!std::isfinite(x)) throw domain_error("log_pdf: x must be finite");
    if (x < support_.lower || x > support_.upper) return -kInf;
    struct Visitor {
        double x;
        double operator()(const Uniform& u) const {
            return -std::log(u.scale);
        }
        double operator()(const Exponential& e) const {
            return std::log(e.rate) - e.rate * x;
        }
        double operator()(const Weibull& w) const {
            if (x == 0.0) {
                if (w.shape > 1.0) return -kInf;
                if (w.shape == 1.0) return -std::log(w.scale);
                return kInf;
            }
            const double lz = std::log(x / w.scale);
            return std::log(w.shape / w.scale) + (w.shape - 1.0) * lz -
                   std::pow(x / w.scale, w.shape);
        }
        double operator()(const PowerFunction& p) const {
            if (x == 0.0) {
                if (p.exponent > 1.0) return -kInf;
                if (p.exponent == 1.0) return -std::log(p.scale);
                return kInf;
            }
            return std::log(p.exponent / p.scale) +
                   (p.exponent - 1.0) * std::log(x / p.scale);
        }
    };
    return std::visit(Visitor{x}, family_);
}

double Distribution::cdf(double x) const {
    if (!std::isfinite(x)) throw domain_error("cdf: x must be finite");
    if (x <= support_.lower) return 0.0;
    if (x >= support_.upper) return 1.0;
    struct Visitor {
        double x;
        double operator()(const Uniform& u) const { return x / u.scale; }
        double operator()(const Exponential& e) const {
            return -std::expm1(-e.rate * x);
        }
        double operator()(const Weibull& w) const {
            return -std::expm1(-std::pow(x / w.scale, w.shape));
        }
        double operator()(const PowerFunction& p) const {
            return std::pow(x / p.scale, p.exponent);
        }
    };
    const double v = std::visit(Visitor{x}, family_);
    return std::min(1.0, std::max(0.0, v));
}

double Distribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        std::ostringstream msg;
        msg << "quantile: u must lie in (0,1), got " << u;
        throw domain_error(msg.str());
    }
    struct Visitor {
        double u;
        double operator()(const Uniform& un) const { return u * un.scale; }
        double operator()(const Exponential& e) const {
            return -std::log1p(-u) / e.rate;
        }
        double operator()(const Weibull& w) const {
            return w.scale * std::pow(-std::log1p(-u), 1.0 / w.shape);
        }
        double operator()(const PowerFunction& p) const {
            return p.scale * std::pow(u, 1.0 / p.exponent);
        }
    };
    return std::visit(Visitor{u}, family_);
}

std::vector<double> Distribution::sample(std::size_t n,
                                         std::uint64_t seed) const {
    if (n == 0) throw domain_error("sample: n must be >= 1");
    std::mt19937_64 engine(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Uniform in the open interval (0,1); mt19937_64 output is fully
        // specified by the standard, so streams are platform-independent.
        const double u =
            (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
        out.push_back(quantile(u));
    }
    return out;
}

std::string Distribution::spec() const {
    struct Visitor {
        std::string operator()(const Uniform& u) const {
            return "uniform:b=" + format_double(u.scale);
        }
        std::string operator()(const Exponential& e) const {
            return "exp:rate=" + format_double(e.rate);
        }
        std::string operator()(const Weibull& w) const {
            return "weibull:shape=" + format_double(w.shape) +
                   ",scale=" + format_double(w.scale);
        }
        std::string operator()(const PowerFunction& p) const {
            return "power:c=" + format_double(p.exponent) +
                   ",b=" + format_double(p.scale);
        }
    };
    return std::visit(Visitor{}, family_);
}

namespace {

// key=value pairs separated by commas, no whitespace.
class SpecFields {
  public:
    SpecFields(std::string_view text, std::string_view whole) : whole_(whole) {
        while (!text.empty()) {
            const auto comma = text.find(',');
            const std::string_view item = text.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0 ||
                eq + 1 == item.size()) {
                fail("expected key=value near '" + std::string(item) + "'");
            }
            keys_.emplace_back(item.substr(0, eq));
            values_.emplace_back(item.substr(eq + 1));
            if (comma == std::string_view::npos) break;
            text.remove_prefix(comma + 1);
        }
    }

    double take(std::string_view key) {
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            if (keys_[i] == key) {
                const std::string_view v = values_[i];
                keys_.erase(keys_.begin() + static_cast<std::ptrdiff_t>(i));
                values_.erase(values_.begin() + static_cast<std::ptrdiff_t>(i));
                double out = 0.0;
                const auto [ptr, ec] =
                    std::from_chars(v.data(), v.data() + v.size(), out);
                if (ec != std::errc() || ptr != v.data() + v.size()) {
                    fail("invalid numeric literal '" + std::string(v) +
                         "' for " + std::string(key));
                }
                return out;
            }
        }
        fail("missing parameter '" + std::string(key) + "'");
    }

    void expect_empty() const {
        if (!keys_.empty()) {
            fail("unexpected parameter '" + std::string(keys_.front()) + "'");
        }
    }

  private:
    [[noreturn]] void fail(const std::string& why) const {
        throw domain_error("bad distribution spec '" + std::string(whole_) +
                           "': " + why);
    }

    std::string_view whole_;
    std::vector<std::string_view> keys_;
    std::vector<std::string_view> values_;
};

}  // namespace

Distribution Distribution::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw domain_error("bad distribution spec '" + std::string(text) +
                           "': expected <family>:<params>");
    }
    const FamilyTag tag = parse_family_tag(text.substr(0, colon));
    SpecFields fields(text.substr(colon + 1), text);
    switch (tag) {
        case FamilyTag::uniform: {
            const double b = fields.take("b");
            fields.expect_empty();
            return Distribution(Uniform{b});
        }
        case FamilyTag::exponential: {
            const double rate = fields.take("rate");
            fields.expect_empty();
            return Distribution(Exponential{rate});
        }
        case FamilyTag::weibull: {
            const double shape = fields.take("shape");
            const double scale = fields.take("scale");
            fields.expect_empty();
            return Distribution(Weibull{shape, scale});
        }
        case FamilyTag::power: {
            const double c = fields.take("c");
            const double b = fields.take("b");
            fields.expect_empty();
            return Distribution(PowerFunction{c, b});
        }
    }
    throw domain_error("invalid family tag");
}

}  // namespace pastent
