#pragma once

#include "tibo/bench_harness.hpp"
#include "tibo/problem.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tibo {

/// "none" -> nullopt; "dwindow:C,R", "dwindow:base:FRAC", "lbound:L".
/// Throws ValidationError on anything else.
std::optional<ConstraintSpec> parse_constraint(std::string_view text);

enum class RhsKind { example, zero, manufactured_sine };

/// Settings for a single solve, read from flat `key = value` text.
///
/// Recognised keys: s, e, delta, q, eval_q, d11..d14, d21..d24, alpha, beta,
/// rhs (example | zero | manufactured_sine), theta, c_uu, c_uv, c_vv, c_u,
/// c_v, init_vs, init_us, cutoff_sharpness, curve_out, constraint
/// (repeatable). `#` starts a comment.
struct SolveConfig {
    double s = 1.0;
    double e = 3.0;
    std::optional<double> delta;
    int q = 7;
    int eval_q = 10;
    std::array<std::array<double, 4>, 2> d{{{1, 0, 0, 0}, {0, 1, 0, 0}}};
    /// Taken from the known solution when omitted (example, manufactured_sine).
    std::optional<double> alpha;
    std::optional<double> beta;
    RhsKind rhs = RhsKind::example;
    double theta = 1.5707963267948966;
    std::array<double, 5> c{0.1, 0.1, 1.0, 0.1, 1.0};
    std::optional<double> init_vs;
    std::optional<double> init_us;
    std::optional<double> cutoff_sharpness;
    std::string curve_out;
    std::vector<ConstraintSpec> constraints;
};

SolveConfig parse_solve_config(std::istream& in);
/// Throws ValidationError naming the path when the file cannot be read.
SolveConfig load_solve_config(const std::filesystem::path& path);

struct ConfiguredProblem {
    OdeProblem problem;
    BoundaryConditions bc;
    /// Known exact solution and slope, if the rhs has one.
    std::function<double(double)> truth;
    std::function<double(double)> truth_slope;
};

ConfiguredProblem build_configured_problem(const SolveConfig& config);

}  // namespace tibo
