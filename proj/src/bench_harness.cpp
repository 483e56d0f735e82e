#include "tibo/bench_harness.hpp"

#include "tibo/error.hpp"
#include "tibo/rk_shooting.hpp"
#include "tibo/tibo_core.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace tibo {

namespace {

constexpr std::array<double, 5> kInitY{0.41, 0.41, -0.40, 0.05, 0.47};
constexpr std::array<double, 5> kInitYp{0.31, -0.37, 0.13, -0.22, 0.46};
constexpr std::array<double, 5> kGroupScale{1.0, 2.0, -2.0, 3.0, -3.0};

double quadratic_part(const std::array<double, 5>& c, double v, double u) {
    return c[0] * u * u + c[1] * v * u + c[2] * v * v + c[3] * u + c[4] * v;
}

std::vector<double> linspace(double a, double b, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

double rk4_benchmark(const Example& ex, BcType type, const ScenarioSpec& spec, int steps,
                     std::span<const double> eval_x) {
    const auto& p = ex.problem;
    ShootingResult shot;
    if (type == BcType::dirichlet) {
        shot = shoot_dirichlet(p.rhs, p.s, p.e, ex.bc.alpha, ex.bc.beta, spec.init_us, steps);
    } else {
        shot = shoot_mixed(p.rhs, p.s, p.e, ex.bc, spec.init_vs, spec.init_us, steps);
    }
    if (shot.status != ShootingStatus::converged) return std::numeric_limits<double>::quiet_NaN();
    const auto ivp = rk4_ivp(p.rhs, p.s, p.e, shot.v_s, shot.u_s, steps);
    double worst = 0.0;
    for (double x : eval_x) {
        worst = std::max(worst, std::abs(rk4_dense_value(p.rhs, ivp, x).first - ex.base(x)));
    }
    return worst;
}

}  // namespace

std::optional<ConstraintSet> resolve_constraints(const std::vector<ConstraintSpec>& specs,
                                                 std::optional<double> base_slope_at_s) {
    if (specs.empty()) return std::nullopt;
    ConstraintSet set;
    for (const auto& spec : specs) {
        if (const auto* w = std::get_if<DerivativeWindowSpec>(&spec)) {
            if (w->base_fraction) {
                if (!base_slope_at_s) throw ValidationError("relative derivative window needs a known solution");
                const double slope = *base_slope_at_s;
                set.items.emplace_back(DerivativeWindow{slope, *w->base_fraction * std::abs(slope)});
            } else {
                set.items.emplace_back(DerivativeWindow{w->center, w->radius});
            }
        } else {
            set.items.emplace_back(std::get<LowerBound>(spec));
        }
    }
    set.validate();
    return set;
}

std::string_view to_string(BcType type) {
    switch (type) {
        case BcType::neumann: return "neumann";
        case BcType::dirichlet: return "dirichlet";
        case BcType::mix: return "mix";
    }
    return "unknown";
}

BcType parse_bc_type(std::string_view text) {
    if (text == "neumann") return BcType::neumann;
    if (text == "dirichlet") return BcType::dirichlet;
    if (text == "mix") return BcType::mix;
    throw ValidationError("unknown boundary type '" + std::string(text) + "' (expected neumann, dirichlet or mix)");
}

std::array<std::array<double, 4>, 2> boundary_rows(BcType type) {
    switch (type) {
        case BcType::neumann: return {{{1, 0, 0, 0}, {0, 1, 0, 0}}};
        case BcType::dirichlet: return {{{1, 0, 0, 0}, {0, 0, 1, 0}}};
        case BcType::mix: return {{{1, 1, 0, 0}, {0, 0, 1, 1}}};
    }
    throw ValidationError("unknown boundary type");
}

double ExampleFamily::base(double x) const { return x * std::cos(theta * x); }

double ExampleFamily::base_slope(double x) const {
    return std::cos(theta * x) - theta * x * std::sin(theta * x);
}

double ExampleFamily::base_curvature(double x) const {
    return -2.0 * theta * std::sin(theta * x) - theta * theta * x * std::cos(theta * x);
}

Example build_example(const ExampleFamily& family, BcType type) {
    const auto c = family.c;
    Example ex;
    ex.problem.s = family.s;
    ex.problem.e = family.e;
    ex.problem.rhs = [family, c](double x, double v, double u) {
        const double f0 = family.base(x);
        const double f1 = family.base_slope(x);
        return family.base_curvature(x) - quadratic_part(c, f0, f1) + quadratic_part(c, v, u);
    };
    ex.problem.d_dv = [c](double, double v, double u) { return c[1] * u + 2.0 * c[2] * v + c[4]; };
    ex.problem.d_du = [c](double, double v, double u) { return 2.0 * c[0] * u + c[1] * v + c[3]; };
    ex.base = [family](double x) { return family.base(x); };
    ex.base_slope = [family](double x) { return family.base_slope(x); };

    ex.bc.d = boundary_rows(type);
    const double vs = family.base(family.s);
    const double us = family.base_slope(family.s);
    const double ve = family.base(family.e);
    const double ue = family.base_slope(family.e);
    ex.bc.alpha = ex.bc.apply_row(0, vs, us, ve, ue);
    ex.bc.beta = ex.bc.apply_row(1, vs, us, ve, ue);
    return ex;
}

std::vector<ScenarioSpec> make_scenarios(BcType type, double theta, const ExampleFamily& family) {
    ExampleFamily fam = family;
    fam.theta = theta;
    const double vs = fam.base(fam.s);
    const double us = fam.base_slope(fam.s);
    std::vector<ScenarioSpec> out;
    out.reserve(25);
    for (std::size_t group = 0; group < 5; ++group) {
        for (std::size_t pos = 0; pos < 5; ++pos) {
            ScenarioSpec spec;
            spec.id = static_cast<int>(group * 5 + pos + 1);
            spec.bc = type;
            spec.theta = theta;
            spec.init_vs = type == BcType::dirichlet ? vs : vs + kGroupScale[group] * kInitY[pos];
            spec.init_us = us + kGroupScale[group] * kInitYp[pos];
            out.push_back(spec);
        }
    }
    return out;
}

std::string_view to_string(RunStatus status) {
    switch (status) {
        case RunStatus::to_yb: return "to_yb";
        case RunStatus::to_ys: return "to_ys";
        case RunStatus::diverge: return "diverge";
    }
    return "unknown";
}

RunStatus classify(double max_resid, double max_dev_base, const Thresholds& thresholds) {
    if (!(max_resid <= thresholds.residual)) return RunStatus::diverge;
    return max_dev_base <= thresholds.deviation ? RunStatus::to_yb : RunStatus::to_ys;
}

RunReport run_scenario(const ScenarioSpec& spec, const HarnessOptions& options) {
    RunReport rep;
    rep.id = spec.id;
    rep.bc = spec.bc;
    rep.theta = spec.theta;
    try {
        ExampleFamily family;
        family.theta = spec.theta;
        family.c = options.c;
        const auto ex = build_example(family, spec.bc);
        const double delta = options.delta.value_or(default_delta(family.s, family.e));
        const auto grid = make_grid(family.s, family.e, delta, options.q);
        const auto constraints = resolve_constraints(options.constraints, ex.base_slope(family.s));
        const auto eval_x = linspace(family.s, family.e, std::size_t{1} << options.eval_q);

        const auto started = std::chrono::steady_clock::now();
        const auto rhs = extend_rhs(ex.problem, grid, options.cutoff_sharpness);
        const auto init = tibo_initial_state(rhs, grid, spec.init_vs, spec.init_us);
        rep.linear_init = init.linear_fallback;
        SolveOptions sopts;
        sopts.optimizer = options.optimizer;
        sopts.cutoff_sharpness = options.cutoff_sharpness;
        const auto sol = solve(ex.problem, ex.bc, grid, init.z, constraints, sopts);
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

        rep.iterations = sol.iterations;
        rep.solver_status = std::string(to_string(sol.status));
        rep.objective = sol.objective_final;
        rep.max_violation = sol.max_violation;
        if (!sol.diagnostic.empty()) rep.error = sol.diagnostic;
        rep.max_resid = residual_max(sol, ex.problem, options.eval_q);

        rep.curve.x = eval_x;
        rep.curve.y_opt.reserve(eval_x.size());
        rep.curve.y_base.reserve(eval_x.size());
        double dev = 0.0;
        for (double x : eval_x) {
            const double y = sol.y(x);
            const double yb = ex.base(x);
            rep.curve.y_opt.push_back(y);
            rep.curve.y_base.push_back(yb);
            dev = std::isfinite(y) ? std::max(dev, std::abs(y - yb)) : std::numeric_limits<double>::infinity();
        }
        rep.max_dev_base = dev;
        rep.status = classify(rep.max_resid, rep.max_dev_base, options.thresholds);

        const int steps = options.rk4_steps > 0 ? options.rk4_steps : static_cast<int>(grid.n);
        try {
            rep.rk4_dev = rk4_benchmark(ex, spec.bc, spec, steps, eval_x);
        } catch (const NumericalError&) {
            rep.rk4_dev = std::numeric_limits<double>::quiet_NaN();
        }
    } catch (const std::exception& err) {
        rep.crashed = true;
        rep.status = RunStatus::diverge;
        rep.error = err.what();
        rep.max_resid = std::numeric_limits<double>::infinity();
        rep.max_dev_base = std::numeric_limits<double>::infinity();
        rep.rk4_dev = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

std::vector<RunReport> run_batch(const std::vector<ScenarioSpec>& specs, const HarnessOptions& options) {
    std::vector<RunReport> out(specs.size());
    unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(specs.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) out[i] = run_scenario(specs[i], options);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    std::sort(out.begin(), out.end(), [](const RunReport& a, const RunReport& b) { return a.id < b.id; });
    return out;
}

BenchmarkResult run_benchmark(BcType type, double theta, const HarnessOptions& options) {
    const auto specs = make_scenarios(type, theta);
    BenchmarkResult res;
    res.reports = run_batch(specs, options);

    auto pick_alt = [&res](const std::vector<RunReport>& reports) {
        for (const auto& r : reports) {
            if (r.status == RunStatus::to_ys) {
                res.alt_curve = r.curve.y_opt;
                res.alt_source_id = r.id;
                return;
            }
        }
    };
    if (options.constraints.empty()) {
        pick_alt(res.reports);
    } else {
        HarnessOptions plain = options;
        plain.constraints.clear();
        pick_alt(run_batch(specs, plain));
    }

    if (res.alt_curve) {
        const auto& alt = *res.alt_curve;
        for (auto& r : res.reports) {
            if (r.curve.y_opt.size() != alt.size()) continue;
            double dev = 0.0;
            for (std::size_t i = 0; i < alt.size(); ++i) {
                const double d = std::abs(r.curve.y_opt[i] - alt[i]);
                dev = std::isfinite(d) ? std::max(dev, d) : std::numeric_limits<double>::infinity();
            }
            r.max_dev_alt = dev;
        }
    }
    return res;
}

}  // namespace tibo
