#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pastent {

struct Support {
    double lower = 0.0;
    double upper = 0.0;  // +infinity for unbounded lifetimes

    bool finite_upper() const;
    bool contains(double x) const { return x >= lower && x <= upper; }
};

// Lifetime families with closed-form density, cdf and quantile.

struct Uniform {
    double scale;  // b: uniform on (0, b)
};

struct Exponential {
    double rate;  // lambda
};

struct Weibull {
    double shape;  // k
    double scale;  // lambda
};

// F(x) = (x/b)^c on (0, b).
struct PowerFunction {
    double exponent;  // c
    double scale;     // b
};

enum class FamilyTag { uniform, exponential, weibull, power };

FamilyTag parse_family_tag(std::string_view name);
std::string_view family_name(FamilyTag tag);

class Distribution {
  public:
    using Family = std::variant<Uniform, Exponential, Weibull, PowerFunction>;

    explicit Distribution(Family family);
    explicit Distribution(Uniform u) : Distribution(Family{u}) {}
    explicit Distribution(Exponential e) : Distribution(Family{e}) {}
    explicit Distribution(Weibull w) : Distribution(Family{w}) {}
    explicit Distribution(PowerFunction p) : Distribution(Family{p}) {}

    /// Parses the text form used by the CLI: "uniform:b=2", "exp:rate=0.5",
    /// "weibull:shape=1.5,scale=2", "power:c=2,b=1".
    static Distribution parse(std::string_view text);

    const Family& family() const { return family_; }
    FamilyTag tag() const;
    const Support& support() const { return support_; }

    double pdf(double x) const;
    /// log f(x); -infinity outside the support.
    double log_pdf(double x) const;
    double cdf(double x) const;
    double survival(double x) const { return 1.0 - cdf(x); }
    /// Closed-form F^{-1}(u) for u in (0,1).
    double quantile(double u) const;

    /// n inverse-transform draws from a seeded deterministic uniform
    /// stream; identical seeds give identical output on every platform.
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    /// Text form accepted by parse(); doubles at full precision.
    std::string spec() const;

  private:
    Family family_;
    Support support_;
};

}  // namespace pastent
