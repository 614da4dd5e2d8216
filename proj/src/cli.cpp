#include "pastent/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pastent/characterization.hpp"
#include "pastent/distribution.hpp"
#include "pastent/errors.hpp"
#include "pastent/estimation.hpp"
#include "pastent/io.hpp"
#include "pastent/measures.hpp"
#include "pastent/numerics.hpp"

namespace pastent::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericalFailure = 3;

double parse_double_or_throw(std::string_view text, const char* what) {
    double out = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw domain_error(std::string("invalid ") + what + " '" +
                           std::string(text) + "'");
    }
    return out;
}

// "lo:hi:n"
GridAxis parse_axis(std::string_view text) {
    const auto c1 = text.find(':');
    const auto c2 = (c1 == std::string_view::npos)
                        ? std::string_view::npos
                        : text.find(':', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
        throw domain_error("invalid grid axis '" + std::string(text) +
                           "' (expected lo:hi:n)");
    }
    GridAxis axis;
    axis.lo = parse_double_or_throw(text.substr(0, c1), "grid bound");
    axis.hi = parse_double_or_throw(text.substr(c1 + 1, c2 - c1 - 1),
                                    "grid bound");
    const std::string_view n_text = text.substr(c2 + 1);
    unsigned long long n = 0;
    const auto [ptr, ec] =
        std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    if (ec != std::errc() || ptr != n_text.data() + n_text.size() || n == 0) {
        throw domain_error("invalid grid point count '" +
                           std::string(n_text) + "'");
    }
    axis.n = static_cast<std::size_t>(n);
    return axis;
}

// "name=lo:hi:n,name=lo:hi:n"
std::map<std::string, GridAxis> parse_param_grid(std::string_view text) {
    std::map<std::string, GridAxis> grid;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw domain_error("invalid param grid entry '" +
                               std::string(item) + "' (expected name=lo:hi:n)");
        }
        const std::string name(item.substr(0, eq));
        if (!grid.emplace(name, parse_axis(item.substr(eq + 1))).second) {
            throw domain_error("duplicate param grid axis '" + name + "'");
        }
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (grid.empty()) throw domain_error("empty param grid");
    return grid;
}

ordered_json quad_json(const QuadratureConfig& cfg) {
    ordered_json j;
    j["abs_tol"] = cfg.abs_tol;
    j["rel_tol"] = cfg.rel_tol;
    j["max_depth"] = cfg.max_depth;
    j["tail_cut"] = cfg.tail_cut;
    return j;
}

ordered_json verdict_json(const TheoremVerdict& v) {
    ordered_json j;
    j["t0"] = v.t0;
    j["cdf_gap"] = v.cdf_gap;
    j["entropy_gap"] = v.entropy_gap;
    j["mismatch"] = v.mismatch;
    j["conclusion_distance"] = v.conclusion_distance;
    j["verdict"] = std::string(verdict_name(v.verdict));
    return j;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw domain_error("cannot open output file '" + path + "'");
    return f;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw domain_error("cannot open input file '" + path + "'");
    return f;
}

struct EvalOptions {
    std::string dist;
    std::string measure;
    double t = 0.0;
    QuadratureConfig quad;
};

int run_eval(const EvalOptions& opt, std::ostream& out) {
    const Distribution dist = Distribution::parse(opt.dist);
    const MeasureKind kind = parse_measure_kind(opt.measure);
    const double value = evaluate_measure(dist, kind, opt.t, opt.quad);

    ordered_json j;
    j["command"] = "eval";
    j["dist"] = dist.spec();
    j["measure"] = std::string(measure_name(kind));
    j["t"] = opt.t;
    j["value"] = value;
    j["quad"] = quad_json(opt.quad);
    out << j.dump() << '\n';
    return kExitOk;
}

struct CurveOptions {
    std::string dist;
    std::string measure;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t points = 0;
    std::string out_path;
    QuadratureConfig quad;
};

int run_curve(const CurveOptions& opt, std::ostream& out) {
    const Distribution dist = Distribution::parse(opt.dist);
    const MeasureKind kind = parse_measure_kind(opt.measure);
    const MeasureCurve curve =
        measure_curve(dist, kind, opt.t_min, opt.t_max, opt.points, opt.quad);
    auto file = open_output(opt.out_path);
    write_curve_csv(file, curve);

    ordered_json j;
    j["command"] = "curve";
    j["dist"] = dist.spec();
    j["measure"] = std::string(measure_name(kind));
    j["t_min"] = opt.t_min;
    j["t_max"] = opt.t_max;
    j["points"] = curve.grid.size();
    j["out"] = opt.out_path;
    j["quad"] = quad_json(opt.quad);
    out << j.dump() << '\n';
    return kExitOk;
}

struct ReconstructOptions {
    std::string in_path;
    double anchor_t = 0.0;
    double anchor_cdf = 0.0;
    std::string out_path;
    RootConfig root;
};

int run_reconstruct(const ReconstructOptions& opt, std::ostream& out) {
    auto in_file = open_input(opt.in_path);
    const MeasureCurve curve =
        read_curve_csv(in_file, MeasureKind::past_direct);
    const ReconstructionResult result = reconstruct_cdf(
        curve, Anchor{opt.anchor_t, opt.anchor_cdf}, opt.root);
    auto file = open_output(opt.out_path);
    write_reconstruction_csv(file, result);

    ordered_json j;
    j["command"] = "reconstruct";
    j["in"] = opt.in_path;
    j["out"] = opt.out_path;
    j["points"] = result.grid.size();
    j["anchor"] = {{"t", result.anchor.t}, {"cdf", result.anchor.cdf}};
    j["branch_switches"] = result.branch_switches;
    j["max_selfcheck_residual"] = result.max_selfcheck_residual;
    j["root"] = {{"x_tol", opt.root.x_tol}, {"max_iter", opt.root.max_iter}};
    out << j.dump() << '\n';
    return kExitOk;
}

struct CompareOptions {
    std::string dist_x;
    std::string dist_y;
    double t0 = 0.0;
    double premise_tol = 1e-6;
    double separation_tol = 1e-2;
    QuadratureConfig quad;
};

int run_compare(const CompareOptions& opt, std::ostream& out) {
    const Distribution x = Distribution::parse(opt.dist_x);
    const Distribution y = Distribution::parse(opt.dist_y);
    const TheoremVerdict verdict = theorem_check(
        x, y, opt.t0, opt.premise_tol, opt.separation_tol, opt.quad);

    ordered_json j;
    j["command"] = "compare";
    j["dist_x"] = x.spec();
    j["dist_y"] = y.spec();
    j["premise_tol"] = opt.premise_tol;
    j["separation_tol"] = opt.separation_tol;
    j["quad"] = quad_json(opt.quad);
    j["result"] = verdict_json(verdict);
    out << j.dump() << '\n';
    return kExitOk;
}

struct ProbeOptions {
    std::string family_x;
    std::string family_y;
    std::string param_grid;
    std::string t0_grid;
    double premise_tol = 1e-6;
    double separation_tol = 1e-2;
    std::string out_path;
    QuadratureConfig quad;
};

int run_probe(const ProbeOptions& opt, std::ostream& out, std::ostream& err) {
    const FamilyTag fx = parse_family_tag(opt.family_x);
    const FamilyTag fy = parse_family_tag(opt.family_y);
    const auto grid = parse_param_grid(opt.param_grid);
    const GridAxis t0_axis = parse_axis(opt.t0_grid);
    const ProbeReport report = uniqueness_probe(
        fx, fy, grid, t0_axis, opt.premise_tol, opt.separation_tol, opt.quad);
    for (const std::string& e : report.errors) {
        err << "probe cell skipped: " << e << '\n';
    }

    ordered_json doc;
    doc["family_x"] = std::string(family_name(fx));
    doc["family_y"] = std::string(family_name(fy));
    doc["premise_tol"] = opt.premise_tol;
    doc["separation_tol"] = opt.separation_tol;
    doc["quad"] = quad_json(opt.quad);
    doc["cells_total"] = report.cells_total;
    doc["cells_skipped"] = report.cells_skipped;
    doc["candidates"] = ordered_json::array();
    for (const ProbeHit& hit : report.hits) {
        ordered_json h;
        h["dist_x"] = hit.dist_x.spec();
        h["dist_y"] = hit.dist_y.spec();
        h["result"] = verdict_json(hit.verdict);
        doc["candidates"].push_back(std::move(h));
    }
    auto file = open_output(opt.out_path);
    file << doc.dump(2) << '\n';

    ordered_json j;
    j["command"] = "probe";
    j["cells_total"] = report.cells_total;
    j["cells_skipped"] = report.cells_skipped;
    j["candidates"] = report.hits.size();
    j["out"] = opt.out_path;
    out << j.dump() << '\n';
    return kExitOk;
}

struct EstimateOptions {
    std::string in_path;
    std::string synth;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    double t = 0.0;
    std::optional<std::uint64_t> window;
};

int run_estimate(const EstimateOptions& opt, std::ostream& out) {
    Sample sample;
    std::string source;
    if (!opt.in_path.empty() && !opt.synth.empty()) {
        throw domain_error("estimate: use either --in or --synth, not both");
    }
    if (!opt.in_path.empty()) {
        auto file = open_input(opt.in_path);
        sample = read_sample_csv(file);
        source = opt.in_path;
    } else if (!opt.synth.empty()) {
        if (opt.n == 0) {
            throw domain_error("estimate: --synth requires --n >= 1");
        }
        const Distribution dist = Distribution::parse(opt.synth);
        sample.values = dist.sample(opt.n, opt.seed);
        source = "synth:" + dist.spec();
    } else {
        throw domain_error("estimate: requires --in or --synth");
    }

    std::optional<std::size_t> window;
    if (opt.window) window = static_cast<std::size_t>(*opt.window);
    const double value = past_entropy_estimate(sample, opt.t, window);
    std::size_t k = 0;
    for (double v : sample.values) {
        if (v <= opt.t) ++k;
    }

    ordered_json j;
    j["command"] = "estimate";
    j["source"] = source;
    j["n"] = sample.n();
    j["t"] = opt.t;
    j["k"] = k;
    if (window) {
        j["window"] = *window;
    } else {
        j["window"] = "auto";
    }
    j["value"] = value;
    out << j.dump() << '\n';
    return kExitOk;
}

void add_quad_flags(CLI::App* cmd, QuadratureConfig& quad) {
    cmd->add_option("--quad-abs-tol", quad.abs_tol,
                    "absolute quadrature tolerance");
    cmd->add_option("--quad-rel-tol", quad.rel_tol,
                    "relative quadrature tolerance");
    cmd->add_option("--quad-max-depth", quad.max_depth,
                    "panel subdivision depth limit");
    cmd->add_option("--tail-cut", quad.tail_cut,
                    "discarded tail mass for unbounded supports");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{
        "entropy measures of lifetime distributions, cdf reconstruction "
        "from past-entropy curves, and single-point characterization checks"};
    app.name("pastent");
    app.require_subcommand(1);

    EvalOptions eval_opt;
    CLI::App* eval = app.add_subcommand(
        "eval", "evaluate one measure at one time point");
    eval->add_option("--dist", eval_opt.dist, "distribution spec")->required();
    eval->add_option("--measure", eval_opt.measure, "measure kind")
        ->required();
    eval->add_option("--t", eval_opt.t, "time point");
    add_quad_flags(eval, eval_opt.quad);

    CurveOptions curve_opt;
    CLI::App* curve = app.add_subcommand(
        "curve", "tabulate one measure on a uniform grid to CSV");
    curve->add_option("--dist", curve_opt.dist, "distribution spec")
        ->required();
    curve->add_option("--measure", curve_opt.measure, "measure kind")
        ->required();
    curve->add_option("--t-min", curve_opt.t_min, "grid start")->required();
    curve->add_option("--t-max", curve_opt.t_max, "grid end")->required();
    curve->add_option("--points", curve_opt.points, "grid size")->required();
    curve->add_option("--out", curve_opt.out_path, "output CSV path")
        ->required();
    add_quad_flags(curve, curve_opt.quad);

    ReconstructOptions rec_opt;
    CLI::App* rec = app.add_subcommand(
        "reconstruct",
        "recover reversed hazard rate and cdf from a past-entropy curve");
    rec->add_option("--in", rec_opt.in_path, "input curve CSV")->required();
    rec->add_option("--anchor-t", rec_opt.anchor_t, "anchor time (grid point)")
        ->required();
    rec->add_option("--anchor-F", rec_opt.anchor_cdf, "cdf value at anchor")
        ->required();
    rec->add_option("--out", rec_opt.out_path, "output CSV path")->required();
    rec->add_option("--x-tol", rec_opt.root.x_tol, "root bracket tolerance");
    rec->add_option("--max-iter", rec_opt.root.max_iter,
                    "root iteration limit");

    CompareOptions cmp_opt;
    CLI::App* cmp = app.add_subcommand(
        "compare", "single-point characterization check of two distributions");
    cmp->add_option("--dist-x", cmp_opt.dist_x, "first distribution")
        ->required();
    cmp->add_option("--dist-y", cmp_opt.dist_y, "second distribution")
        ->required();
    cmp->add_option("--t0", cmp_opt.t0, "check point")->required();
    cmp->add_option("--premise-tol", cmp_opt.premise_tol,
                    "premise agreement tolerance");
    cmp->add_option("--separation-tol", cmp_opt.separation_tol,
                    "cdf separation threshold");
    add_quad_flags(cmp, cmp_opt.quad);

    ProbeOptions probe_opt;
    CLI::App* probe = app.add_subcommand(
        "probe",
        "sweep premise-aligned pairs and report counterexample candidates");
    probe->add_option("--family-x", probe_opt.family_x, "swept family")
        ->required();
    probe->add_option("--family-y", probe_opt.family_y, "aligned family")
        ->required();
    probe->add_option("--param-grid", probe_opt.param_grid,
                      "axes, name=lo:hi:n,...")
        ->required();
    probe->add_option("--t0-grid", probe_opt.t0_grid, "t0 axis, lo:hi:n")
        ->required();
    probe->add_option("--premise-tol", probe_opt.premise_tol,
                      "premise agreement tolerance");
    probe->add_option("--separation-tol", probe_opt.separation_tol,
                      "cdf separation threshold");
    probe->add_option("--out", probe_opt.out_path, "output JSON path")
        ->required();
    add_quad_flags(probe, probe_opt.quad);

    EstimateOptions est_opt;
    CLI::App* est = app.add_subcommand(
        "estimate", "spacings estimate of past entropy from a sample");
    est->add_option("--in", est_opt.in_path, "sample CSV");
    est->add_option("--t", est_opt.t, "conditioning time")->required();
    est->add_option("--window", est_opt.window, "spacings window");
    est->add_option("--synth", est_opt.synth,
                    "draw the sample from this distribution instead");
    est->add_option("--n", est_opt.n, "synthetic sample size");
    est->add_option("--seed", est_opt.seed, "synthetic sample seed");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("pastent");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "pastent: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    try {
        if (*eval) return run_eval(eval_opt, out);
        if (*curve) return run_curve(curve_opt, out);
        if (*rec) return run_reconstruct(rec_opt, out);
        if (*cmp) return run_compare(cmp_opt, out);
        if (*probe) return run_probe(probe_opt, out, err);
        if (*est) return run_estimate(est_opt, out);
    } catch (const domain_error& e) {
        err << "pastent: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const numerical_error& e) {
        err << "pastent: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const std::exception& e) {
        err << "pastent: " << e.what() << '\n';
        return kExitNumericalFailure;
    }
    err << "pastent: no command\n";
    return kExitInvalidInput;
}

}  // namespace pastent::cli
