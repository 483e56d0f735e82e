#include "tibo/config.hpp"

#include "tibo/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

namespace tibo {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, std::string_view what) {
    const auto t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty() || !std::isfinite(value)) {
        throw ValidationError(std::string(what) + ": expected a finite number, got '" + std::string(t) + "'");
    }
    return value;
}

int parse_int(std::string_view text, std::string_view what) {
    const auto t = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError(std::string(what) + ": expected an integer, got '" + std::string(t) + "'");
    }
    return value;
}

}  // namespace

std::optional<ConstraintSpec> parse_constraint(std::string_view text) {
    const auto t = trim(text);
    if (t == "none") return std::nullopt;
    if (t.starts_with("lbound:")) {
        return LowerBound{parse_real(t.substr(7), "lbound level")};
    }
    if (t.starts_with("dwindow:base:")) {
        const double frac = parse_real(t.substr(13), "dwindow fraction");
        if (!(frac > 0.0)) throw ValidationError("dwindow fraction must be positive");
        DerivativeWindowSpec w;
        w.base_fraction = frac;
        return w;
    }
    if (t.starts_with("dwindow:")) {
        const auto body = t.substr(8);
        const auto comma = body.find(',');
        if (comma == std::string_view::npos) throw ValidationError("dwindow expects C,R");
        DerivativeWindowSpec w;
        w.center = parse_real(body.substr(0, comma), "dwindow center");
        w.radius = parse_real(body.substr(comma + 1), "dwindow radius");
        if (!(w.radius > 0.0)) throw ValidationError("dwindow radius must be positive");
        return w;
    }
    throw ValidationError("unknown constraint '" + std::string(t) +
                          "' (expected none, dwindow:C,R, dwindow:base:FRAC or lbound:L)");
}

SolveConfig parse_solve_config(std::istream& in) {
    SolveConfig cfg;
    const std::map<std::string, double*, std::less<>> reals{
        {"s", &cfg.s},          {"e", &cfg.e},          {"theta", &cfg.theta},  {"c_uu", &cfg.c[0]},
        {"c_uv", &cfg.c[1]},    {"c_vv", &cfg.c[2]},    {"c_u", &cfg.c[3]},     {"c_v", &cfg.c[4]},
        {"d11", &cfg.d[0][0]},  {"d12", &cfg.d[0][1]},  {"d13", &cfg.d[0][2]},  {"d14", &cfg.d[0][3]},
        {"d21", &cfg.d[1][0]},  {"d22", &cfg.d[1][1]},  {"d23", &cfg.d[1][2]},  {"d24", &cfg.d[1][3]},
    };
    const std::map<std::string, std::optional<double>*, std::less<>> optionals{
        {"delta", &cfg.delta},     {"alpha", &cfg.alpha},     {"beta", &cfg.beta},
        {"init_vs", &cfg.init_vs}, {"init_us", &cfg.init_us}, {"cutoff_sharpness", &cfg.cutoff_sharpness},
    };

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = "line " + std::to_string(lineno);
        if (eq == std::string_view::npos) throw ValidationError(where + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto label = where + " (" + std::string(key) + ")";

        if (auto it = reals.find(key); it != reals.end()) {
            *it->second = parse_real(value, label);
        } else if (auto jt = optionals.find(key); jt != optionals.end()) {
            *jt->second = parse_real(value, label);
        } else if (key == "q") {
            cfg.q = parse_int(value, label);
        } else if (key == "eval_q") {
            cfg.eval_q = parse_int(value, label);
        } else if (key == "rhs") {
            if (value == "example") cfg.rhs = RhsKind::example;
            else if (value == "zero") cfg.rhs = RhsKind::zero;
            else if (value == "manufactured_sine") cfg.rhs = RhsKind::manufactured_sine;
            else throw ValidationError(label + ": unknown rhs '" + std::string(value) + "'");
        } else if (key == "curve_out") {
            cfg.curve_out = std::string(value);
        } else if (key == "constraint") {
            if (auto c = parse_constraint(value)) cfg.constraints.push_back(*c);
        } else {
            throw ValidationError(where + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (cfg.eval_q < 2 || cfg.eval_q > 20) throw ValidationError("eval_q must lie in [2, 20]");
    return cfg;
}

SolveConfig load_solve_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
    return parse_solve_config(in);
}

ConfiguredProblem build_configured_problem(const SolveConfig& cfg) {
    ConfiguredProblem out;
    out.problem.s = cfg.s;
    out.problem.e = cfg.e;
    switch (cfg.rhs) {
        case RhsKind::example: {
            ExampleFamily fam;
            fam.theta = cfg.theta;
            fam.c = cfg.c;
            fam.s = cfg.s;
            fam.e = cfg.e;
            auto ex = build_example(fam, BcType::neumann);
            out.problem = ex.problem;
            out.truth = ex.base;
            out.truth_slope = ex.base_slope;
            break;
        }
        case RhsKind::zero:
            out.problem.rhs = [](double, double, double) { return 0.0; };
            out.problem.d_dv = out.problem.rhs;
            out.problem.d_du = out.problem.rhs;
            break;
        case RhsKind::manufactured_sine:
            // y = sin x solves y'' = -y + (y^2 - sin^2 x) / 2
            out.problem.rhs = [](double x, double v, double) {
                const double sx = std::sin(x);
                return -v + 0.5 * (v * v - sx * sx);
            };
            out.problem.d_dv = [](double, double v, double) { return -1.0 + v; };
            out.problem.d_du = [](double, double, double) { return 0.0; };
            out.truth = [](double x) { return std::sin(x); };
            out.truth_slope = [](double x) { return std::cos(x); };
            break;
    }

    out.bc.d = cfg.d;
    if (cfg.alpha && cfg.beta) {
        out.bc.alpha = *cfg.alpha;
        out.bc.beta = *cfg.beta;
    } else if (out.truth) {
        const double vs = out.truth(cfg.s), us = out.truth_slope(cfg.s);
        const double ve = out.truth(cfg.e), ue = out.truth_slope(cfg.e);
        out.bc.alpha = cfg.alpha.value_or(out.bc.apply_row(0, vs, us, ve, ue));
        out.bc.beta = cfg.beta.value_or(out.bc.apply_row(1, vs, us, ve, ue));
    } else {
        throw ValidationError("alpha and beta are required when the rhs has no known solution");
    }
    return out;
}

}  // namespace tibo
