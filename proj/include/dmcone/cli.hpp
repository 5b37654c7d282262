#pragma once

// Command-line front end: run(args) -> CommandResult. Exit codes: 0 ok,
// 1 fail (a verification verdict), 2 error.

#include "dmcone/acceptance.hpp"
#include "dmcone/chern_bmy.hpp"
#include "dmcone/cone_density.hpp"
#include "dmcone/io.hpp"
#include "dmcone/metric_lab.hpp"
#include "dmcone/periods.hpp"
#include "dmcone/stratification.hpp"
#include "dmcone/weights.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dmcone::cli {

using io::json;

struct CommandResult {
    std::string command;
    std::string status = "ok";  // ok | fail | error
    json payload = json::object();
    json diagnostics = json::object();
    std::string schema;

    int exit_code() const { return status == "ok" ? 0 : status == "fail" ? 1 : 2; }

    json to_json() const {
        return {{"command", command}, {"status", status}, {"payload", payload}, {"diagnostics", diagnostics}, {"schema", schema}};
    }
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"validate", "strata", "cusps", "density", "bmy",
                                                "verify",   "periods", "wp",   "sc-map",  "report"};
    return names;
}

inline std::string usage() {
    return "usage: dmcone <command> [flags] [--json]\n"
           "\n"
           "  validate --weights FILE\n"
           "  strata   --weights FILE [--max-codim K]\n"
           "  cusps    --weights FILE\n"
           "  density  --preset cpd --dim D [--weights FILE] | --data FILE\n"
           "  bmy      --arrangement FILE | --preset dm --dim N [--weights FILE] | --preset complete-quadrilateral\n"
           "           [--symbolic] [--kernel]\n"
           "  verify   --model NAME [--beta P/Q] [--gamma P/Q] [--lambda +1|-1] [--samples K] [--tol X] | --list\n"
           "  periods  --weights FILE --z RE,IM [--z RE,IM ...] [--segment A,B]\n"
           "  wp       --weights FILE --grid SPEC [--curvature] [--method periods|oracle]\n"
           "  sc-map   --z RE,IM\n"
           "  report   [--only I,J,...]\n"
           "\n"
           "Grid SPEC: 'default' (12 points), 'x0:x1:nx,y0:y1:ny', or 're,im;re,im;...'.\n"
           "Environment: DMCONE_TOL_NESTED, DMCONE_TOL_SINGLE, DMCONE_TOL_QUADRATURE override default tolerances.\n";
}

// Tolerances ------------------------------------------------------------------------

struct Tolerances {
    double nested = metric::default_nested_tolerance;
    double single = metric::default_single_tolerance;
    double quadrature = QuadOptions{}.rel_tol;
    json sources = json::object();

    static Tolerances from_environment() {
        Tolerances t;
        auto read = [&](const char* name, double& slot, const char* key) {
            t.sources[key] = "default";
            const char* v = std::getenv(name);
            if (!v || !*v) return;
            char* end = nullptr;
            const double x = std::strtod(v, &end);
            if (end == v || *end != '\0' || !(x > 0))
                throw Error(ErrorCode::BadFlag, std::string(name) + " must be a positive number, got \"" + v + "\"");
            slot = x;
            t.sources[key] = name;
        };
        read("DMCONE_TOL_NESTED", t.nested, "nested");
        read("DMCONE_TOL_SINGLE", t.single, "single");
        read("DMCONE_TOL_QUADRATURE", t.quadrature, "quadrature");
        return t;
    }

    json to_json() const {
        return {{"nested", nested}, {"single", single}, {"quadrature", quadrature}, {"source", sources}};
    }
};

// Flag parsing helpers --------------------------------------------------------------

namespace detail {

inline cplx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0};
        std::size_t used = 0;
        const double re = std::stod(text.substr(0, comma), &used);
        const double im = std::stod(text.substr(comma + 1));
        (void)used;
        return {re, im};
    } catch (const std::exception&) {
        throw Error(ErrorCode::BadFlag, "expected a complex number as RE,IM, got \"" + text + "\"");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline std::vector<double> parse_range(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.size() != 3) throw Error(ErrorCode::BadFlag, "grid range must be lo:hi:count, got \"" + spec + "\"");
    try {
        const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
        const int count = std::stoi(parts[2]);
        if (count < 1) throw Error(ErrorCode::BadFlag, "grid count must be positive");
        return metric::linspace(lo, hi, static_cast<std::size_t>(count));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrorCode::BadFlag, "cannot parse grid range \"" + spec + "\"");
    }
}

inline std::vector<cplx> parse_grid(const std::string& spec) {
    if (spec == "default") return acceptance::wp_grid();
    std::vector<cplx> grid;
    if (spec.find(':') != std::string::npos) {
        auto axes = split(spec, ',');
        if (axes.size() != 2) throw Error(ErrorCode::BadFlag, "grid must be x0:x1:nx,y0:y1:ny");
        for (double y : parse_range(axes[1]))
            for (double x : parse_range(axes[0])) grid.emplace_back(x, y);
    } else {
        for (const auto& p : split(spec, ';')) grid.push_back(parse_complex(p));
    }
    if (grid.empty()) throw Error(ErrorCode::BadFlag, "empty grid");
    return grid;
}

inline Rational parse_rational_flag(const std::string& text, const char* flag) {
    try {
        return Rational::parse(text);
    } catch (const Error&) {
        throw Error(ErrorCode::BadFlag, std::string(flag) + " expects p/q, got \"" + text + "\"");
    }
}

inline json rational_matrix(const RationalMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

inline json report_json(const metric::CurvatureReport& r) {
    json residuals = json::array();
    for (const auto& s : r.residuals)
        residuals.push_back({{"name", s.name}, {"max_abs", s.max_abs}, {"max_rel", s.max_rel}, {"argmax", s.argmax}});
    json out = {{"check", r.check},
                {"samples", r.samples.size()},
                {"eigenvalue_range", json::array({r.eigen_min, r.eigen_max})},
                {"residuals", residuals},
                {"max_abs_residual", r.max_abs_residual},
                {"max_rel_residual", r.max_rel_residual},
                {"step_range", json::array({r.step_min, r.step_max})},
                {"tolerance", r.tolerance},
                {"verdict", r.pass ? "pass" : "fail"},
                {"convention", r.convention}};
    if (r.constant) out["constant"] = *r.constant;
    if (r.samples.empty()) out["eigenvalue_range"] = json::array({0.0, 0.0}), out["step_range"] = json::array({0.0, 0.0});
    return out;
}

} // namespace detail

// Commands -----------------------------------------------------------------------------

struct Flags {
    std::string weights, data, arrangement, preset, model, grid, method = "periods", segment;
    std::vector<std::string> z;
    std::optional<int> dim, max_codim, lambda;
    std::optional<std::string> beta, gamma;
    int samples = 20;
    std::optional<double> tol;
    bool symbolic = false, kernel = false, list = false, curvature = false;
    std::vector<int> only;
};

inline void cmd_validate(const Flags& f, CommandResult& r) {
    const auto w = io::load_weights(f.weights);
    Rational sum(0);
    for (const auto& m : w.mu()) sum += m;
    r.payload = {{"n", w.dimension()},
                 {"points", w.size()},
                 {"weights", io::to_json(w.mu())},
                 {"sum", sum.str()},
                 {"cusps", enumerate_cusps(w).size()}};
}

inline void cmd_strata(const Flags& f, CommandResult& r) {
    const auto w = io::load_weights(f.weights);
    const int k = f.max_codim.value_or(w.dimension());
    json list = json::array();
    for (const auto& s : enumerate_strata(w, k)) {
        const auto cone = tangent_cone(w, s.partition);
        json factors = json::array();
        for (const auto& c : cone.factors) factors.push_back({{"block", io::to_json(c.block)}, {"density", c.density.str()}});
        list.push_back({{"blocks", io::to_json(s.partition)},
                        {"kind", to_string(s.kind)},
                        {"codim", s.codim},
                        {"density", cone.total_density.str()},
                        {"factors", factors},
                        {"flat_factor_dim", cone.flat_factor_dim}});
    }
    r.payload = {{"n", w.dimension()}, {"max_codim", k}, {"count", list.size()}, {"strata", list}};
}

inline void cmd_cusps(const Flags& f, CommandResult& r) {
    const auto w = io::load_weights(f.weights);
    json list = json::array();
    for (const auto& c : enumerate_cusps(w))
        list.push_back({{"blocks", io::to_json(c.partition)},
                        {"kind", to_string(c.kind)},
                        {"codim", c.codim},
                        {"model", c.cusp_model ? c.cusp_model->str() : "SmoothPoint"}});
    r.payload = {{"n", w.dimension()}, {"count", list.size()}, {"cusps", list}};
}

inline void cmd_density(const Flags& f, CommandResult& r) {
    LogFanoConeData data;
    if (!f.data.empty()) {
        data = io::cone_data_from_json(io::read_json_file(f.data), f.data);
    } else if (f.preset == "cpd") {
        if (!f.dim) throw Error(ErrorCode::BadFlag, "--preset cpd needs --dim");
        if (f.weights.empty()) {
            data = projective_space(*f.dim);
        } else {
            data = cpd_arrangement(*f.dim, io::load_rationals(f.weights));
        }
    } else {
        throw Error(ErrorCode::BadFlag, f.preset.empty() ? "density needs --data or --preset cpd" : "unknown density preset " + f.preset);
    }
    const auto v = volume_density(data);
    r.payload = {{"data", io::to_json(data)}, {"gamma", v.gamma.str()}, {"nu", v.nu.str()}};
}

inline void cmd_bmy(const Flags& f, CommandResult& r) {
    WeightedArrangement arr;
    std::string source;
    if (!f.arrangement.empty()) {
        arr = io::arrangement_from_json(io::read_json_file(f.arrangement), f.arrangement);
        source = f.arrangement;
    } else if (f.preset == "dm") {
        if (!f.dim) throw Error(ErrorCode::BadFlag, "--preset dm needs --dim");
        std::optional<std::vector<Rational>> mu;
        if (!f.weights.empty()) mu = io::load_rationals(f.weights);
        arr = dm_arrangement(*f.dim, mu);
        source = "preset dm, n = " + std::to_string(*f.dim);
    } else if (f.preset == "complete-quadrilateral") {
        arr = complete_quadrilateral();
        if (!f.weights.empty()) {
            auto mu = io::load_rationals(f.weights);
            if (mu.size() != arr.divisors.size()) throw Error(ErrorCode::InvalidArgument, "complete quadrilateral needs 6 line weights");
            for (std::size_t l = 0; l < mu.size(); ++l) arr.divisors[l].weight = mu[l];
        }
        source = "preset complete-quadrilateral";
    } else {
        throw Error(ErrorCode::BadFlag, f.preset.empty() ? "bmy needs --arrangement or --preset" : "unknown bmy preset " + f.preset);
    }
    r.payload = {{"source", source},
                 {"n", arr.n},
                 {"divisors", arr.names()},
                 {"codim2_strata", arr.strata.size()}};
    const bool numeric = std::all_of(arr.divisors.begin(), arr.divisors.end(), [](const auto& d) { return d.weight.has_value(); });
    if (numeric && !arr.divisors.empty()) {
        const auto mu = arr.numeric_weights();
        const Rational c1 = c1_log(arr, mu);
        r.payload["numeric"] = {{"weights", io::to_json(mu)},
                                {"c1", c1.str()},
                                {"c1_squared", (c1 * c1).str()},
                                {"c2", c2_log(arr, mu).str()},
                                {"defect", bmy_defect(arr, mu).str()}};
    } else if (!f.symbolic && !f.kernel) {
        r.diagnostics["warnings"].push_back("symbolic weights: pass --symbolic or --kernel for the quadratic form");
    }
    if (f.symbolic || f.kernel) {
        const auto form = prop_form(arr);
        if (f.symbolic) r.payload["form"] = {{"variables", form.variables}, {"matrix", detail::rational_matrix(form.form.matrix())}};
        if (f.kernel) {
            const auto k = kernel(form.form);
            json basis = json::array();
            for (const auto& v : k.basis) basis.push_back(io::to_json(v));
            r.payload["kernel"] = {{"variables", form.variables}, {"rank", k.rank}, {"kernel_dim", k.dimension()}, {"basis", basis}};
        }
    }
}

inline void cmd_verify(const Flags& f, const Tolerances& tol, CommandResult& r) {
    if (f.list) {
        json models = json::array();
        for (const auto& e : metric::catalog()) models.push_back({{"name", e.name}, {"dim", e.dim}, {"description", e.description}});
        r.payload = {{"models", models}};
        return;
    }
    if (f.model.empty()) throw Error(ErrorCode::BadFlag, "verify needs --model (or --list)");
    if (f.samples < 1) throw Error(ErrorCode::BadFlag, "--samples must be positive");
    const auto count = static_cast<std::size_t>(f.samples);
    const int lambda = f.lambda.value_or(1);
    if (lambda != 1 && lambda != -1) throw Error(ErrorCode::BadFlag, "--lambda must be +1 or -1");
    std::optional<long double> beta, gamma;
    if (f.beta) beta = detail::parse_rational_flag(*f.beta, "--beta").to_long_double();
    if (f.gamma) gamma = detail::parse_rational_flag(*f.gamma, "--gamma").to_long_double();
    const double nested = f.tol.value_or(tol.nested), single = f.tol.value_or(tol.single);
    metric::CurvatureReport rep;
    const std::string& m = f.model;
    if (m == "flat") {
        rep = metric::verify_einstein(metric::flat(2), 0, metric::annulus_samples({{0.2L, 1.5L}, {0.2L, 1.5L}}, count, 5), nested);
    } else if (m == "fubini-study") {
        rep = metric::verify_einstein(metric::fubini_study(2), 3, metric::annulus_samples({{0.2L, 1.5L}, {0.2L, 1.5L}}, count, 5), nested);
    } else if (m == "cone") {
        const auto base = beta ? metric::football_base(*beta) : metric::doubled_fubini_study_base();
        const long double g = gamma.value_or(base.mu / 2);
        rep = metric::verify_cone_ricci(base, g, metric::annulus_samples({{0.2L, 1.5L}, {0.4L, 1.5L}}, count, 11), nested);
    } else if (m == "lambda") {
        const auto cone = beta ? metric::conical_flat(2, *beta) : metric::flat(2);
        rep = metric::verify_lambda_modification(cone, lambda, metric::annulus_samples({{0.2L, 0.6L}, {0.1L, 0.6L}}, count, 13), nested);
    } else if (m == "cusp") {
        rep = metric::verify_einstein(metric::cusp(), -3, metric::annulus_samples({{0, 0.8L}, {0.2L, 0.5L}}, count, 7), nested);
    } else if (m == "chsc") {
        const long double b = beta.value_or(1);
        const auto samples = lambda > 0 ? metric::annulus_samples({{0.3L, 1.5L}}, count, 2) : metric::annulus_samples({{0.3L, 0.7L}}, count, 2);
        const auto reference = metric::verify_constant_curvature(metric::chsc(lambda, 1), samples, single).constant;
        rep = metric::verify_constant_curvature(metric::chsc(lambda, b), samples, single);
        r.payload["reference_constant"] = *reference;
        const double drift = std::abs(*rep.constant - *reference) / std::abs(*reference);
        r.payload["distance_to_reference"] = drift;
        rep.pass = rep.pass && drift <= single;
    } else if (m == "cusp-1d") {
        rep = metric::verify_constant_curvature(metric::cusp_1d(), metric::annulus_samples({{0.2L, 0.7L}}, count, 2), single);
    } else if (m == "cone-to-cusp") {
        std::vector<double> gammas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        if (gamma) {
            gammas.clear();
            for (double g = 1e-1; g >= static_cast<double>(*gamma) * 0.999; g /= 10) gammas.push_back(g);
        }
        const double bound = f.tol.value_or(1e-5);
        const auto t = metric::verify_cone_to_cusp(metric::linspace(0.1, 0.9, std::max<std::size_t>(count, 2)), gammas);
        json rows = json::array();
        for (const auto& row : t.rows)
            rows.push_back({{"gamma", row.gamma},
                            {"max_deviation", row.max_deviation},
                            {"max_relative_deviation", row.max_relative_deviation},
                            {"argmax_rho", row.argmax_rho}});
        const bool pass = t.monotone && t.rows.back().max_deviation < bound;
        r.payload = {{"check", "cone-to-cusp"},
                     {"rhos", t.rhos},
                     {"rows", rows},
                     {"monotone", t.monotone},
                     {"converges_linearly", t.converges_linearly},
                     {"tolerance", bound},
                     {"verdict", pass ? "pass" : "fail"}};
        if (!pass) r.status = "fail";
        return;
    } else {
        throw Error(ErrorCode::BadFlag, "unknown model \"" + m + "\"; see verify --list");
    }
    const json report = detail::report_json(rep);
    for (const auto& [k, v] : report.items()) r.payload[k] = v;
    r.payload["verdict"] = rep.pass ? "pass" : "fail";
    if (!rep.pass) r.status = "fail";
}

inline std::pair<int, int> parse_segment(const std::string& s) {
    auto parts = detail::split(s, ',');
    try {
        if (parts.size() == 2) return {std::stoi(parts[0]), std::stoi(parts[1])};
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::BadFlag, "--segment expects two puncture indices A,B");
}

inline void cmd_periods(const Flags& f, const Tolerances& tol, CommandResult& r) {
    const auto w = io::load_weights(f.weights);
    std::vector<cplx> z;
    for (const auto& s : f.z) z.push_back(detail::parse_complex(s));
    const auto cfg = ConfigurationPoint::make(w, z);
    QuadOptions q;
    q.rel_tol = tol.quadrature;
    std::vector<std::pair<int, int>> edges;
    const int points = static_cast<int>(cfg.points());
    if (!f.segment.empty()) {
        edges.push_back(parse_segment(f.segment));
    } else if (cfg.n() == 1) {
        edges.push_back({2, 3});
        edges.push_back(disjoint_pair_degenerate(cfg) ? std::pair{3, 1} : std::pair{1, 4});
    } else {
        for (int i = 1; i < points; ++i) edges.push_back({i, i + 1});
    }
    json list = json::array();
    for (auto [a, b] : edges) {
        const auto p = period(cfg, a, b, {0, 1}, q);
        list.push_back({{"from", a}, {"to", b}, {"value", io::to_json(p.value)}, {"error", p.error}, {"evaluations", p.evaluations}});
    }
    json punctures = json::array();
    for (int i = 1; i <= points; ++i) {
        json pos = cfg.is_infinity(i) ? json("infinity") : io::to_json(cfg.point(i));
        punctures.push_back({{"index", i}, {"mu", w[i].str()}, {"position", pos}});
    }
    r.payload = {{"n", w.dimension()}, {"punctures", punctures}, {"ray_direction", io::to_json(cplx(0, 1))}, {"periods", list}};
}

inline void cmd_wp(const Flags& f, const Tolerances& tol, CommandResult& r) {
    const auto w = io::load_weights(f.weights);
    if (w.dimension() != 1) throw Error(ErrorCode::InvalidArgument, "wp is available for n = 1 only");
    if (f.grid.empty()) throw Error(ErrorCode::BadFlag, "wp needs --grid");
    if (f.method != "periods" && f.method != "oracle") throw Error(ErrorCode::BadFlag, "--method must be periods or oracle");
    const auto grid = detail::parse_grid(f.grid);
    WPCurvatureOptions opt;
    opt.method = f.method == "periods" ? AreaMethod::Periods : AreaMethod::AreaOracle;
    opt.quad.rel_tol = tol.quadrature;
    opt.tolerance = f.tol.value_or(opt.tolerance);
    json values = json::array();
    std::optional<HermitianFit> fit;
    if (opt.method == AreaMethod::Periods) {
        if (grid.size() < 4) throw Error(ErrorCode::InvalidArgument, "the periods method fits on the grid and needs at least four points");
        fit = fit_hermitian_form(w, grid, opt.area);
        opt.fit = fit;
        r.payload["fit"] = {{"a", fit->a}, {"b", fit->b}, {"c", io::to_json(fit->c)}, {"fit_residual", fit->fit_residual}};
    }
    for (const auto& z : grid) {
        const auto cfg = ConfigurationPoint::make(w, {z});
        const auto v = fit ? wp_area(cfg, *fit, opt.quad) : wp_area(cfg, opt.area);
        values.push_back({{"z", io::to_json(z)}, {"area", v.area}, {"potential", v.potential}, {"error", v.error}});
    }
    r.payload["method"] = to_string(opt.method);
    r.payload["values"] = values;
    if (!f.curvature) return;
    const auto rep = wp_curvature_check(w, grid, opt);
    json ks = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i)
        ks.push_back({{"z", io::to_json(grid[i])}, {"K", rep.curvature[i]}, {"K_refined", rep.refined_curvature[i]}});
    r.payload["curvature"] = {{"values", ks},
                              {"mean", rep.mean},
                              {"refined_mean", rep.refined_mean},
                              {"spread", rep.spread},
                              {"refinement_shift", rep.refinement_shift},
                              {"negative", rep.negative},
                              {"tolerance", opt.tolerance},
                              {"convention", rep.report.convention},
                              {"verdict", rep.report.pass ? "pass" : "fail"}};
    if (!rep.report.pass) r.status = "fail";
}

inline void cmd_sc_map(const Flags& f, const Tolerances& tol, CommandResult& r) {
    if (f.z.size() != 1) throw Error(ErrorCode::BadFlag, "sc-map needs exactly one --z");
    const cplx z = detail::parse_complex(f.z.front());
    QuadOptions q;
    q.rel_tol = tol.quadrature;
    if (z.imag() < 0) throw Error(ErrorCode::OutOfDomain, "sc-map is defined on the closed upper half plane");
    QuadratureResult<cplx> v;
    if (z != cplx(0)) v = integrate_segment(equilateral_factors(), 0, z, q);
    r.payload = {{"z", io::to_json(z)}, {"value", io::to_json(v.value)}, {"error", v.error}, {"evaluations", v.evaluations}};
}

inline void cmd_report(const Flags& f, CommandResult& r) {
    const std::set<int> only(f.only.begin(), f.only.end());
    json rows = json::array();
    bool all = true;
    std::ostringstream table;
    for (const auto& c : acceptance::run_all(only)) {
        rows.push_back({{"id", c.id},
                        {"name", c.name},
                        {"verdict", c.pass ? "PASS" : "FAIL"},
                        {"tolerance", c.tolerance},
                        {"detail", c.detail},
                        {"seconds", c.seconds}});
        all = all && c.pass;
        table << acceptance::line(c) << "\n";
    }
    r.payload = {{"criteria", rows}, {"table", table.str()}};
    if (!all) r.status = "fail";
}

// Dispatch ---------------------------------------------------------------------------

inline CommandResult error_result(const std::string& command, ErrorCode code, const std::string& message) {
    CommandResult r;
    r.command = command;
    r.status = "error";
    r.schema = "error.schema.json";
    r.payload = {{"code", std::string(to_string(code))}, {"message", message}};
    if (code == ErrorCode::UnknownCommand || code == ErrorCode::BadFlag) r.payload["usage"] = usage();
    return r;
}

/// `args` excludes the program name. A `--json` anywhere is accepted and ignored here.
inline CommandResult run(std::vector<std::string> args) {
    args.erase(std::remove(args.begin(), args.end(), "--json"), args.end());
    if (args.empty()) return error_result("", ErrorCode::UnknownCommand, "no command given");
    const std::string command = args.front();
    std::string echo;
    for (std::size_t i = 0; i < args.size(); ++i) echo += (i ? " " : "") + args[i];
    if (command == "--help" || command == "-h" || command == "help") {
        CommandResult r;
        r.command = echo;
        r.schema = "help.schema.json";
        r.payload = {{"usage", usage()}};
        return r;
    }
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        return error_result(echo, ErrorCode::UnknownCommand, "unknown command \"" + command + "\"");

    Flags f;
    CLI::App app{"dmcone " + command};
    app.allow_windows_style_options(false);
    auto needs_weights = [&] { app.add_option("--weights", f.weights, "weight file")->required(); };
    if (command == "validate" || command == "cusps") needs_weights();
    if (command == "strata") {
        needs_weights();
        app.add_option("--max-codim", f.max_codim);
    }
    if (command == "density") {
        app.add_option("--preset", f.preset);
        app.add_option("--dim", f.dim);
        app.add_option("--weights", f.weights);
        app.add_option("--data", f.data);
    }
    if (command == "bmy") {
        app.add_option("--arrangement", f.arrangement);
        app.add_option("--preset", f.preset);
        app.add_option("--dim", f.dim);
        app.add_option("--weights", f.weights);
        app.add_flag("--symbolic", f.symbolic);
        app.add_flag("--kernel", f.kernel);
    }
    if (command == "verify") {
        app.add_flag("--list", f.list);
        app.add_option("--model", f.model);
        app.add_option("--beta", f.beta);
        app.add_option("--gamma", f.gamma);
        app.add_option("--lambda", f.lambda);
        app.add_option("--samples", f.samples);
        app.add_option("--tol", f.tol);
    }
    if (command == "periods") {
        needs_weights();
        app.add_option("--z", f.z)->required()->allow_extra_args(false);
        app.add_option("--segment", f.segment);
    }
    if (command == "wp") {
        needs_weights();
        app.add_option("--grid", f.grid)->required();
        app.add_flag("--curvature", f.curvature);
        app.add_option("--method", f.method);
        app.add_option("--tol", f.tol);
    }
    if (command == "sc-map") app.add_option("--z", f.z)->required()->allow_extra_args(false);
    if (command == "report") app.add_option("--only", f.only)->delimiter(',');

    CommandResult r;
    r.command = echo;
    r.schema = command + ".schema.json";
    try {
        std::vector<std::string> rest(args.rbegin(), args.rend() - 1);  // CLI11 consumes from the back
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        r.payload = {{"usage", app.help()}};
        r.schema = "help.schema.json";
        return r;
    } catch (const CLI::ParseError& e) {
        return error_result(echo, ErrorCode::BadFlag, e.what());
    }
    try {
        const auto tol = Tolerances::from_environment();
        r.diagnostics = {{"tolerances", tol.to_json()}, {"warnings", json::array()}};
        if (command == "validate") cmd_validate(f, r);
        else if (command == "strata") cmd_strata(f, r);
        else if (command == "cusps") cmd_cusps(f, r);
        else if (command == "density") cmd_density(f, r);
        else if (command == "bmy") cmd_bmy(f, r);
        else if (command == "verify") cmd_verify(f, tol, r);
        else if (command == "periods") cmd_periods(f, tol, r);
        else if (command == "wp") cmd_wp(f, tol, r);
        else if (command == "sc-map") cmd_sc_map(f, tol, r);
        else if (command == "report") cmd_report(f, r);
    } catch (const Error& e) {
        auto err = error_result(echo, e.code(), e.what());
        json codes = json::array();
        for (auto c : e.codes()) codes.push_back(std::string(to_string(c)));
        err.payload["codes"] = codes;
        return err;
    } catch (const std::exception& e) {
        return error_result(echo, ErrorCode::InvalidArgument, e.what());
    }
    return r;
}

// Human-readable rendering --------------------------------------------------------------

inline std::string render_text(const CommandResult& r) {
    std::ostringstream out;
    if (r.status == "error") {
        out << "error: " << r.payload.value("message", std::string()) << "\n";
        if (r.payload.contains("usage")) out << "\n" << r.payload["usage"].get<std::string>();
        return out.str();
    }
    if (r.payload.contains("table")) {
        out << r.payload["table"].get<std::string>();
        out << "status: " << r.status << "\n";
        return out.str();
    }
    if (r.payload.contains("usage")) return r.payload["usage"].get<std::string>();
    out << r.payload.dump(2) << "\n";
    out << "status: " << r.status << "\n";
    return out.str();
}

} // namespace dmcone::cli
