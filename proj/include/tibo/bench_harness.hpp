#pragma once

#include "tibo/optimizer.hpp"
#include "tibo/periodic_extension.hpp"
#include "tibo/problem.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tibo {

enum class BcType { neumann, dirichlet, mix };

std::string_view to_string(BcType type);
/// Accepts "neumann", "dirichlet", "mix"; throws ValidationError otherwise.
BcType parse_bc_type(std::string_view text);

/// D rows: Neumann pins (y(s), y'(s)), Dirichlet (y(s), y(e)),
/// Mix (y(s) + y'(s), y(e) + y'(e)).
std::array<std::array<double, 4>, 2> boundary_rows(BcType type);

/// Test family built around the known solution y_b(x) = x cos(theta x):
///
///   y'' = y_b'' - Q(x, y_b, y_b') + Q(x, y, y'),
///   Q(v, u) = c_uu u^2 + c_uv v u + c_vv v^2 + c_u u + c_v v.
struct ExampleFamily {
    double theta = 0.0;
    /// (c_uu, c_uv, c_vv, c_u, c_v)
    std::array<double, 5> c{0.1, 0.1, 1.0, 0.1, 1.0};
    double s = 1.0;
    double e = 3.0;

    double base(double x) const;
    double base_slope(double x) const;
    double base_curvature(double x) const;
};

struct Example {
    OdeProblem problem;
    BoundaryConditions bc;
    std::function<double(double)> base;
    std::function<double(double)> base_slope;
};

Example build_example(const ExampleFamily& family, BcType type);

struct ScenarioSpec {
    int id = 0;
    BcType bc = BcType::neumann;
    double theta = 0.0;
    double init_vs = 0.0;
    double init_us = 0.0;
};

/// The 25 fixed initial guesses, ordered by id = (group - 1) * 5 + position.
std::vector<ScenarioSpec> make_scenarios(BcType type, double theta, const ExampleFamily& family = {});

enum class RunStatus { to_yb, to_ys, diverge };

std::string_view to_string(RunStatus status);

struct Thresholds {
    double residual = 1e-4;
    double deviation = 1e-4;
};

RunStatus classify(double max_resid, double max_dev_base, const Thresholds& thresholds = {});

/// Constraint given relative to the example (resolved per run).
struct DerivativeWindowSpec {
    /// If set, center = y_b'(s) and radius = fraction * |y_b'(s)|.
    std::optional<double> base_fraction;
    double center = 0.0;
    double radius = 0.0;
};

using ConstraintSpec = std::variant<DerivativeWindowSpec, LowerBound>;

/// Concrete constraint set, or nullopt for an empty list. Relative windows
/// need `base_slope_at_s`; throws ValidationError without it.
std::optional<ConstraintSet> resolve_constraints(const std::vector<ConstraintSpec>& specs,
                                                 std::optional<double> base_slope_at_s);

struct HarnessOptions {
    int q = 7;
    int eval_q = 10;
    /// Padding; the default (e - s) / 2 when unset.
    std::optional<double> delta;
    double cutoff_sharpness = kDefaultCutoffSharpness;
    Thresholds thresholds{};
    std::vector<ConstraintSpec> constraints;
    OptimizerOptions optimizer{};
    /// RK4 steps on [s, e] for the benchmark; 0 uses the grid spacing.
    int rk4_steps = 0;
    /// 0 picks the hardware concurrency.
    unsigned workers = 0;
    std::array<double, 5> c{0.1, 0.1, 1.0, 0.1, 1.0};
};

struct Curve {
    std::vector<double> x;
    std::vector<double> y_opt;
    std::vector<double> y_base;
};

struct RunReport {
    int id = 0;
    BcType bc = BcType::neumann;
    double theta = 0.0;
    RunStatus status = RunStatus::diverge;
    double max_resid = 0.0;
    double max_dev_base = 0.0;
    std::optional<double> max_dev_alt;
    /// NaN when shooting failed.
    double rk4_dev = 0.0;
    int iterations = 0;
    double wall_ms = 0.0;
    std::string solver_status;
    double objective = 0.0;
    double max_violation = 0.0;
    bool linear_init = false;
    bool crashed = false;
    std::string error;
    Curve curve;
};

RunReport run_scenario(const ScenarioSpec& spec, const HarnessOptions& options);

/// Runs every scenario on a worker pool; the result is ordered by id.
std::vector<RunReport> run_batch(const std::vector<ScenarioSpec>& specs, const HarnessOptions& options);

struct BenchmarkResult {
    std::vector<RunReport> reports;
    /// y_s on the evaluation grid, when one was identified.
    std::optional<std::vector<double>> alt_curve;
    /// Id of the scenario that supplied y_s (in the unconstrained batch when constraints are set).
    int alt_source_id = 0;
};

/// Full 25-scenario run. y_s is the first to_ys solution of the unconstrained
/// batch (run first when constraints are active) and every report gets its
/// max_dev_alt against it.
BenchmarkResult run_benchmark(BcType type, double theta, const HarnessOptions& options);

}  // namespace tibo
