#include "tibo/diagnostics.hpp"

#include "tibo/bench_harness.hpp"
#include "tibo/error.hpp"
#include "tibo/tibo_core.hpp"
#include "tibo/trig_interp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace tibo {

namespace {

constexpr double kHalfPeriod = 1.0;
constexpr std::size_t kProbePoints = 4001;

double interp_error(const std::function<double(double)>& fn, std::size_t n) {
    const auto xs = GridSamples::abscissae(n, kHalfPeriod);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = fn(xs[k]);
    y[0] = 0.0;
    const auto poly = odd_interpolate(GridSamples(std::move(y)), kHalfPeriod);
    double worst = 0.0;
    for (std::size_t i = 0; i < kProbePoints; ++i) {
        const double x = -kHalfPeriod + 2.0 * kHalfPeriod * static_cast<double>(i) / (kProbePoints - 1);
        worst = std::max(worst, std::abs(poly(x) - fn(x)));
    }
    return worst;
}

}  // namespace

std::vector<InterpOrderRow> interp_order_table(std::span<const std::size_t> sizes) {
    using std::numbers::pi;
    struct Case {
        std::string name;
        int smoothness;
        std::function<double(double)> fn;
    };
    std::vector<Case> cases;
    for (int p : {1, 3, 5}) {
        cases.push_back({"sin|sin|^" + std::to_string(p), p, [p](double x) {
                             const double w = std::sin(pi * x / kHalfPeriod);
                             return w * std::pow(std::abs(w), p);
                         }});
    }
    cases.push_back({"sin(sin)", -1, [](double x) { return std::sin(std::sin(pi * x / kHalfPeriod)); }});

    std::vector<InterpOrderRow> rows;
    for (const auto& c : cases) {
        InterpOrderRow row;
        row.name = c.name;
        row.smoothness = c.smoothness;
        row.sizes.assign(sizes.begin(), sizes.end());
        for (auto n : sizes) row.errors.push_back(interp_error(c.fn, n));
        row.order = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < row.errors.size(); ++i) {
            const double ratio = std::log2(row.errors[i - 1] / row.errors[i]) /
                                 std::log2(static_cast<double>(row.sizes[i]) / static_cast<double>(row.sizes[i - 1]));
            row.order = std::min(row.order, ratio);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<InterpOrderRow> interp_order_table() {
    static constexpr std::size_t kSizes[] = {32, 64, 128};
    return interp_order_table(kSizes);
}

std::string format_interp_order(std::span<const InterpOrderRow> rows) {
    std::ostringstream os;
    char buf[64];
    os << "function          K";
    if (!rows.empty()) {
        for (auto n : rows.front().sizes) {
            std::snprintf(buf, sizeof buf, "  %11s", ("N=" + std::to_string(n)).c_str());
            os << buf;
        }
    }
    os << "    order\n";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-14s  %3s", r.name.c_str(),
                      r.smoothness < 0 ? "inf" : std::to_string(r.smoothness).c_str());
        os << buf;
        for (double e : r.errors) {
            std::snprintf(buf, sizeof buf, "  %11.3e", e);
            os << buf;
        }
        if (r.smoothness < 0) {
            os << "        -\n";
        } else {
            std::snprintf(buf, sizeof buf, "  %7.2f\n", r.order);
            os << buf;
        }
    }
    return os.str();
}

GradcheckReport run_gradcheck(std::size_t m, int trials, std::uint64_t seed, double tolerance) {
    if (m < 8 || !is_power_of_two(m)) throw ValidationError("gradcheck: m must be a power of two >= 8");
    if (trials < 1) throw ValidationError("gradcheck: trials must be >= 1");
    const auto started = std::chrono::steady_clock::now();

    ExampleFamily family;
    family.theta = std::numbers::pi / 2;
    const auto ex = build_example(family, BcType::neumann);
    const int q = static_cast<int>(std::lround(std::log2(static_cast<double>(m))));
    const auto grid = make_grid(family.s, family.e, default_delta(family.s, family.e), q);
    const TiboObjective model(ex.problem, ex.bc, grid);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    GradcheckReport rep;
    rep.m = m;
    rep.trials = trials;
    rep.tolerance = tolerance;
    std::vector<double> z(m), g(m), zp(m);
    for (int t = 0; t < trials; ++t) {
        for (double& v : z) v = normal(rng);
        model.value_and_gradient(z, g);
        for (std::size_t i = 0; i < m; ++i) {
            const double h = 1e-3 * (1.0 + std::abs(z[i]));
            auto at = [&](double offset) {
                zp = z;
                zp[i] += offset;
                return model.value(zp);
            };
            const double fd = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
            const double rel = std::abs(g[i] - fd) / std::max(std::abs(fd), 1e-8);
            rep.worst_rel = std::max(rep.worst_rel, rel);
        }
    }
    rep.passed = rep.worst_rel <= tolerance;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rep;
}

}  // namespace tibo
