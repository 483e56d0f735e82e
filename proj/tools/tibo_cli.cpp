#include "tibo/bench_harness.hpp"
#include "tibo/config.hpp"
#include "tibo/diagnostics.hpp"
#include "tibo/error.hpp"
#include "tibo/report.hpp"
#include "tibo/rk_shooting.hpp"
#include "tibo/tibo_core.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCrash = 3;

struct BenchArgs {
    std::string bc_case = "neumann";
    std::string theta = "pi2";
    int q = 7;
    int eval_q = 10;
    std::string constraint = "none";
    std::string out;
    std::string curves;
    unsigned workers = 0;
};

int run_bench(const BenchArgs& args) {
    const auto type = tibo::parse_bc_type(args.bc_case);
    const double theta = args.theta == "pi2" ? std::numbers::pi / 2 : 3 * std::numbers::pi / 2;
    tibo::HarnessOptions opts;
    opts.q = args.q;
    opts.eval_q = args.eval_q;
    opts.workers = args.workers;
    if (auto c = tibo::parse_constraint(args.constraint)) opts.constraints.push_back(*c);
    if (opts.eval_q < 2 || opts.eval_q > 20) throw tibo::ValidationError("--eval-q must lie in [2, 20]");

    const auto result = tibo::run_benchmark(type, theta, opts);
    std::cout << "case " << tibo::to_string(type) << ", theta " << args.theta << ", q " << opts.q
              << ", constraint " << args.constraint << "\n";
    if (result.alt_curve) std::cout << "alternative solution taken from scenario " << result.alt_source_id << "\n";
    std::cout << tibo::format_summary(result.reports);
    if (!args.out.empty()) tibo::write_report_csv(args.out, result.reports);
    if (!args.curves.empty()) tibo::write_curves(args.curves, result.reports);

    int crashed = 0;
    for (const auto& r : result.reports) {
        if (r.crashed) {
            ++crashed;
            std::cerr << "scenario " << r.id << " crashed: " << r.error << "\n";
        }
    }
    return crashed > 0 ? kExitCrash : 0;
}

int run_solve(const std::string& path) {
    const auto cfg = tibo::load_solve_config(path);
    const auto setup = tibo::build_configured_problem(cfg);
    const double delta = cfg.delta.value_or(tibo::default_delta(cfg.s, cfg.e));
    const auto grid = tibo::make_grid(cfg.s, cfg.e, delta, cfg.q);
    const double sharpness = cfg.cutoff_sharpness.value_or(tibo::kDefaultCutoffSharpness);

    const double vs = cfg.init_vs.value_or(setup.truth ? setup.truth(cfg.s) : 0.0);
    const double us = cfg.init_us.value_or(setup.truth_slope ? setup.truth_slope(cfg.s) : 0.0);
    const auto rhs = tibo::extend_rhs(setup.problem, grid, sharpness);
    const auto init = tibo::tibo_initial_state(rhs, grid, vs, us);

    const auto constraints = tibo::resolve_constraints(
        cfg.constraints, setup.truth_slope ? std::optional<double>(setup.truth_slope(cfg.s)) : std::nullopt);

    tibo::SolveOptions sopts;
    sopts.cutoff_sharpness = sharpness;
    const auto sol = tibo::solve(setup.problem, setup.bc, grid, init.z, constraints, sopts);
    const double resid = tibo::residual_max(sol, setup.problem, cfg.eval_q);

    std::printf("grid: M=%zu b=%.6g lambda=%.6g m=%zu n=%zu\n", grid.M, grid.half_period, grid.lambda, grid.m,
                grid.n);
    std::printf("status: %s after %d iterations%s\n", std::string(tibo::to_string(sol.status)).c_str(),
                sol.iterations, init.linear_fallback ? " (linear start)" : "");
    if (!sol.diagnostic.empty()) std::printf("note: %s\n", sol.diagnostic.c_str());
    std::printf("objective: %.6e\nmax residual: %.6e\n", sol.objective_final, resid);
    std::printf("y(s)=%.12g y'(s)=%.12g y(e)=%.12g y'(e)=%.12g\n", sol.y(cfg.s), sol.dy(cfg.s), sol.y(cfg.e),
                sol.dy(cfg.e));
    if (constraints) std::printf("max violation: %.3e\n", sol.max_violation);

    const std::size_t points = std::size_t{1} << cfg.eval_q;
    std::ofstream curve;
    if (!cfg.curve_out.empty()) {
        curve.open(cfg.curve_out);
        if (!curve) throw std::runtime_error("cannot open '" + cfg.curve_out + "' for writing");
        curve << (setup.truth ? "x,y_opt,y_true\n" : "x,y_opt\n");
        curve.precision(12);
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = cfg.s + (cfg.e - cfg.s) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double y = sol.y(x);
        if (setup.truth) dev = std::max(dev, std::abs(y - setup.truth(x)));
        if (curve.is_open()) {
            curve << x << ',' << y;
            if (setup.truth) curve << ',' << setup.truth(x);
            curve << '\n';
        }
    }
    if (setup.truth) std::printf("max |y - y_true| on [s, e]: %.6e\n", dev);
    return 0;
}

int run_gradcheck(std::size_t m, int trials, std::uint64_t seed) {
    const auto rep = tibo::run_gradcheck(m, trials, seed);
    std::printf("gradcheck M=%zu trials=%d worst relative error %.3e (tolerance %.0e) in %.2f s: %s\n", rep.m,
                rep.trials, rep.worst_rel, rep.tolerance, rep.seconds, rep.passed ? "PASS" : "FAIL");
    return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trigonometric-interpolation BVP solver and benchmark harness"};
    app.require_subcommand(1);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the 25-scenario benchmark for one case");
    bench_cmd->add_option("--case", bench.bc_case, "Boundary rows")
        ->check(CLI::IsMember({"neumann", "dirichlet", "mix"}))
        ->capture_default_str();
    bench_cmd->add_option("--theta", bench.theta, "Frequency of the base solution")
        ->check(CLI::IsMember({"pi2", "3pi2"}))
        ->capture_default_str();
    bench_cmd->add_option("--q", bench.q, "Grid exponent (M = 2^q)")->capture_default_str();
    bench_cmd->add_option("--eval-q", bench.eval_q, "Evaluation grid exponent")->capture_default_str();
    bench_cmd->add_option("--constraint", bench.constraint, "none | dwindow:C,R | dwindow:base:FRAC | lbound:L")
        ->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "CSV report path");
    bench_cmd->add_option("--curves", bench.curves, "Directory for per-scenario curve CSVs");
    bench_cmd->add_option("--workers", bench.workers, "Worker threads (0 = hardware concurrency)");

    std::string config_path;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one problem described by a key = value config");
    solve_cmd->add_option("--config", config_path, "Config file")->required();

    std::size_t grad_m = 8;
    int grad_trials = 20;
    std::uint64_t grad_seed = 1;
    auto* grad_cmd = app.add_subcommand("gradcheck", "Check the analytic gradient against finite differences");
    grad_cmd->add_option("--m", grad_m, "Half-grid size")->check(CLI::IsMember({8, 16}))->capture_default_str();
    grad_cmd->add_option("--trials", grad_trials, "Random states")->check(CLI::PositiveNumber)->capture_default_str();
    grad_cmd->add_option("--seed", grad_seed, "RNG seed")->capture_default_str();

    auto* interp_cmd = app.add_subcommand("interp-order", "Print empirical interpolation orders");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*bench_cmd) return run_bench(bench);
        if (*solve_cmd) return run_solve(config_path);
        if (*grad_cmd) return run_gradcheck(grad_m, grad_trials, grad_seed);
        if (*interp_cmd) {
            std::cout << tibo::format_interp_order(tibo::interp_order_table());
            return 0;
        }
    } catch (const tibo::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
