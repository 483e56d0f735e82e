#include "tibo/rk_shooting.hpp"

#include "tibo/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

namespace tibo {

namespace {

constexpr int kMaxShootingIters = 100;
constexpr double kShootingTol = 1e-12;
constexpr double kInitMagnitudeCap = 1e6;

double terminal_value(const StateFunction& rhs, double s, double e, double v0, double u0, int steps) {
    const auto ivp = rk4_ivp(rhs, s, e, v0, u0, steps);
    return ivp.y.back();
}

std::array<double, 2> mixed_residual(const StateFunction& rhs, double s, double e, const BoundaryConditions& bc,
                                     double vs, double us, int steps) {
    double ve = 0.0;
    double ue = 0.0;
    const bool uses_end = bc.d[0][2] != 0.0 || bc.d[0][3] != 0.0 || bc.d[1][2] != 0.0 || bc.d[1][3] != 0.0;
    if (uses_end) {
        const auto ivp = rk4_ivp(rhs, s, e, vs, us, steps);
        ve = ivp.y.back();
        ue = ivp.yp.back();
    }
    return {bc.apply_row(0, vs, us, ve, ue) - bc.alpha, bc.apply_row(1, vs, us, ve, ue) - bc.beta};
}

double inf_norm(const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

}  // namespace

std::pair<double, double> rk4_step(const StateFunction& rhs, double x, double v, double u, double h) {
    const double k1v = u;
    const double k1u = rhs(x, v, u);
    const double k2v = u + 0.5 * h * k1u;
    const double k2u = rhs(x + 0.5 * h, v + 0.5 * h * k1v, u + 0.5 * h * k1u);
    const double k3v = u + 0.5 * h * k2u;
    const double k3u = rhs(x + 0.5 * h, v + 0.5 * h * k2v, u + 0.5 * h * k2u);
    const double k4v = u + h * k3u;
    const double k4u = rhs(x + h, v + h * k3v, u + h * k3u);
    return {v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v), u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)};
}

IvpResult rk4_ivp(const StateFunction& rhs, double x0, double x1, double v0, double u0, int steps) {
    if (steps < 1) throw ValidationError("rk4_ivp: steps must be >= 1");
    if (!std::isfinite(v0) || !std::isfinite(u0)) throw NumericalError("rk4_ivp: non-finite initial state", 0);
    IvpResult out;
    out.step = (x1 - x0) / steps;
    const auto count = static_cast<std::size_t>(steps) + 1;
    out.nodes.reserve(count);
    out.y.reserve(count);
    out.yp.reserve(count);
    out.nodes.push_back(x0);
    out.y.push_back(v0);
    out.yp.push_back(u0);
    double v = v0;
    double u = u0;
    for (int i = 0; i < steps; ++i) {
        const double x = x0 + i * out.step;
        std::tie(v, u) = rk4_step(rhs, x, v, u, out.step);
        if (!std::isfinite(v) || !std::isfinite(u)) throw NumericalError("rk4_ivp: non-finite state", i + 1);
        out.nodes.push_back(i + 1 == steps ? x1 : x0 + (i + 1) * out.step);
        out.y.push_back(v);
        out.yp.push_back(u);
    }
    return out;
}

std::pair<double, double> rk4_dense_value(const StateFunction& rhs, const IvpResult& ivp, double x) {
    const double x0 = ivp.nodes.front();
    const auto last = ivp.nodes.size() - 1;
    double pos = (x - x0) / ivp.step;
    if (!(pos >= -1e-9 && pos <= static_cast<double>(last) + 1e-9)) {
        throw ValidationError("rk4_dense_value: x outside the integrated span");
    }
    pos = std::clamp(pos, 0.0, static_cast<double>(last));
    auto k = static_cast<std::size_t>(std::floor(pos));
    if (k == last) return {ivp.y[last], ivp.yp[last]};
    const double h = x - ivp.nodes[k];
    if (h == 0.0) return {ivp.y[k], ivp.yp[k]};
    return rk4_step(rhs, ivp.nodes[k], ivp.y[k], ivp.yp[k], h);
}

ShootingResult shoot_dirichlet(const StateFunction& rhs, double s, double e, double alpha, double beta,
                               double guess_up, int steps) {
    ShootingResult res;
    res.v_s = alpha;
    try {
        double x0 = guess_up;
        double x1 = guess_up * (1.0 + 1e-3) + 1e-3;
        double g0 = terminal_value(rhs, s, e, alpha, x0, steps) - beta;
        double g1 = terminal_value(rhs, s, e, alpha, x1, steps) - beta;
        for (int it = 1; it <= kMaxShootingIters; ++it) {
            res.iterations = it;
            if (std::abs(g1) <= kShootingTol) break;
            const double slope = g1 - g0;
            if (slope == 0.0 || !std::isfinite(slope)) break;
            const double x2 = x1 - g1 * (x1 - x0) / slope;
            if (!std::isfinite(x2)) break;
            x0 = x1;
            g0 = g1;
            x1 = x2;
            g1 = terminal_value(rhs, s, e, alpha, x1, steps) - beta;
            if (x1 == x0) break;
        }
        res.u_s = x1;
        res.residual = std::abs(g1);
    } catch (const NumericalError& err) {
        res.message = err.what();
        res.residual = std::numeric_limits<double>::infinity();
        return res;
    }
    // roundoff can stall just above the target; accept a near miss
    if (res.residual <= 1e-9) {
        res.status = ShootingStatus::converged;
    } else {
        res.message = "secant iteration did not reach the tolerance";
    }
    return res;
}

ShootingResult shoot_mixed(const StateFunction& rhs, double s, double e, const BoundaryConditions& bc,
                           double guess_vs, double guess_us, int steps) {
    ShootingResult res;
    double x[2] = {guess_vs, guess_us};
    try {
        auto r = mixed_residual(rhs, s, e, bc, x[0], x[1], steps);
        double norm = inf_norm(r);
        for (int it = 1; it <= kMaxShootingIters && norm > kShootingTol; ++it) {
            res.iterations = it;
            double jac[2][2];
            for (int c = 0; c < 2; ++c) {
                const double h = 1e-6 * (1.0 + std::abs(x[c]));
                double xp[2] = {x[0], x[1]};
                xp[c] += h;
                const auto rp = mixed_residual(rhs, s, e, bc, xp[0], xp[1], steps);
                jac[0][c] = (rp[0] - r[0]) / h;
                jac[1][c] = (rp[1] - r[1]) / h;
            }
            const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            const double scale = std::max({std::abs(jac[0][0]), std::abs(jac[0][1]), std::abs(jac[1][0]),
                                           std::abs(jac[1][1])});
            if (!(std::abs(det) > 1e-14 * scale * scale)) {
                res.message = "singular shooting Jacobian";
                break;
            }
            const double dx0 = (jac[1][1] * r[0] - jac[0][1] * r[1]) / det;
            const double dx1 = (-jac[1][0] * r[0] + jac[0][0] * r[1]) / det;

            bool accepted = false;
            for (double t = 1.0; t > 1e-10; t *= 0.5) {
                const double c0 = x[0] - t * dx0;
                const double c1 = x[1] - t * dx1;
                std::array<double, 2> rc;
                try {
                    rc = mixed_residual(rhs, s, e, bc, c0, c1, steps);
                } catch (const NumericalError&) {
                    continue;
                }
                if (inf_norm(rc) < norm) {
                    x[0] = c0;
                    x[1] = c1;
                    r = rc;
                    norm = inf_norm(rc);
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                res.message = "damped Newton stagnated";
                break;
            }
        }
        res.v_s = x[0];
        res.u_s = x[1];
        res.residual = norm;
    } catch (const NumericalError& err) {
        res.message = err.what();
        res.residual = std::numeric_limits<double>::infinity();
        return res;
    }
    if (res.residual <= 1e-9) {
        res.status = ShootingStatus::converged;
        res.message.clear();
    } else if (res.message.empty()) {
        res.message = "iteration limit reached";
    }
    return res;
}

InitialState tibo_initial_state(const ExtendedRhs& rhs, const GridSpec& grid, double v_s, double u_s,
                                int substeps) {
    if (substeps < 1) throw ValidationError("tibo_initial_state: substeps must be >= 1");
    const StateFunction f = [&rhs](double t, double v, double u) { return rhs.value(t, v, u); };
    const auto right = grid.right_abscissae();
    const double sp = grid.shifted_s();
    const auto sub = static_cast<std::size_t>(substeps);
    InitialState out;
    out.z.resize(grid.M);

    bool usable = true;
    try {
        std::vector<double> v(grid.M), u(grid.M);
        if (grid.m > 0) {
            const auto back = rk4_ivp(f, sp, 0.0, v_s, u_s, static_cast<int>(grid.m * sub));
            for (std::size_t k = 0; k <= grid.m; ++k) {
                v[grid.m - k] = back.y[k * sub];
                u[grid.m - k] = back.yp[k * sub];
            }
        }
        const auto fwd = rk4_ivp(f, sp, grid.half_period, v_s, u_s, static_cast<int>((grid.M - grid.m) * sub));
        for (std::size_t k = grid.m; k < grid.M; ++k) {
            v[k] = fwd.y[(k - grid.m) * sub];
            u[k] = fwd.yp[(k - grid.m) * sub];
        }
        for (std::size_t k = 0; k < grid.M; ++k) {
            out.z[k] = rhs.value(right[k], v[k], u[k]);
            if (!std::isfinite(out.z[k]) || std::abs(out.z[k]) > kInitMagnitudeCap) usable = false;
        }
    } catch (const NumericalError&) {
        usable = false;
    }
    if (usable) return out;

    out.linear_fallback = true;
    for (std::size_t k = 0; k < grid.M; ++k) {
        out.z[k] = rhs.value(right[k], v_s + u_s * (right[k] - sp), u_s);
        if (!std::isfinite(out.z[k])) out.z[k] = 0.0;
    }
    return out;
}

}  // namespace tibo
