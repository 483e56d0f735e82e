#include "tibo/optimizer.hpp"

#include "tibo/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace tibo {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

struct Correction {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

// Two-loop recursion: returns -H g.
std::vector<double> lbfgs_direction(std::span<const double> g, const std::deque<Correction>& memory) {
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
        alpha[i] = memory[i].rho * dot(memory[i].s, q);
        for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * memory[i].y[k];
    }
    if (!memory.empty()) {
        const auto& last = memory.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
        const double beta = memory[i].rho * dot(memory[i].y, q);
        for (std::size_t k = 0; k < q.size(); ++k) q[k] += memory[i].s[k] * (alpha[i] - beta);
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace

std::string_view to_string(OptimizerStatus status) {
    switch (status) {
        case OptimizerStatus::converged: return "converged";
        case OptimizerStatus::stalled: return "stalled";
        case OptimizerStatus::iteration_cap: return "iteration_cap";
    }
    return "unknown";
}

void OptimizerOptions::validate() const {
    if (max_iters <= 0 || !(grad_tol > 0.0) || !(obj_tol > 0.0) || memory <= 0 || !(armijo_c > 0.0)) {
        throw ValidationError("OptimizerOptions: all settings must be positive");
    }
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
        throw ValidationError("OptimizerOptions: backtrack_factor must lie in (0, 1)");
    }
}

MinimizeResult minimize(const ObjectiveFn& objective, std::vector<double> init, const OptimizerOptions& options) {
    options.validate();
    constexpr int kMaxBacktracks = 60;
    const std::size_t dim = init.size();

    MinimizeResult out;
    out.x = std::move(init);
    std::vector<double> g(dim, 0.0);
    out.f = objective(out.x, g);
    if (!std::isfinite(out.f)) throw ValidationError("minimize: initial objective is not finite");
    out.history.push_back(out.f);

    std::deque<Correction> memory;
    std::vector<double> trial(dim), g_trial(dim);

    for (int iter = 0;; ++iter) {
        out.grad_inf = inf_norm(g);
        out.iterations = iter;
        if (out.grad_inf <= options.grad_tol) {
            out.status = OptimizerStatus::converged;
            return out;
        }
        if (iter >= options.max_iters) {
            out.status = OptimizerStatus::iteration_cap;
            return out;
        }

        bool accepted = false;
        double f_trial = 0.0;
        // A failed quasi-Newton search falls back once to steepest descent.
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            std::vector<double> d = lbfgs_direction(g, memory);
            double slope = dot(g, d);
            if (!(slope < 0.0)) {
                memory.clear();
                d = lbfgs_direction(g, {});
                slope = dot(g, d);
            }
            double step = memory.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(g, g))) : 1.0;
            for (int bt = 0; bt < kMaxBacktracks; ++bt) {
                for (std::size_t k = 0; k < dim; ++k) trial[k] = out.x[k] + step * d[k];
                f_trial = objective(trial, g_trial);
                if (std::isfinite(f_trial) && f_trial <= out.f + options.armijo_c * step * slope) {
                    accepted = true;
                    break;
                }
                step *= options.backtrack_factor;
            }
            if (!accepted) {
                if (memory.empty()) break;
                memory.clear();
            }
        }
        if (!accepted) {
            out.status = OptimizerStatus::stalled;
            return out;
        }

        Correction c{std::vector<double>(dim), std::vector<double>(dim), 0.0};
        for (std::size_t k = 0; k < dim; ++k) {
            c.s[k] = trial[k] - out.x[k];
            c.y[k] = g_trial[k] - g[k];
        }
        const double sy = dot(c.s, c.y);
        if (sy > std::numeric_limits<double>::epsilon() * dot(c.y, c.y)) {
            c.rho = 1.0 / sy;
            memory.push_back(std::move(c));
            if (memory.size() > static_cast<std::size_t>(options.memory)) memory.pop_front();
        }

        const double decrease = out.f - f_trial;
        out.x.swap(trial);
        g.swap(g_trial);
        out.f = f_trial;
        out.history.push_back(out.f);
        if (decrease <= options.obj_tol * std::abs(out.f + decrease)) {
            out.grad_inf = inf_norm(g);
            out.iterations = iter + 1;
            out.status = OptimizerStatus::converged;
            return out;
        }
    }
}

void ConstraintSet::validate() const {
    if (!(penalty_weight > 0.0) || !(weight_growth >= 1.0) || max_rounds < 1 || !(violation_tol >= 0.0)) {
        throw ValidationError("ConstraintSet: penalty weight must be positive and growth >= 1");
    }
    for (const auto& item : items) {
        if (const auto* w = std::get_if<DerivativeWindow>(&item); w && !(w->radius > 0.0)) {
            throw ValidationError("ConstraintSet: derivative window radius must be positive");
        }
    }
}

ObjectiveFn penalized(ObjectiveFn objective, const ConstraintSet& constraints, double weight,
                      const AffineConstraintMaps& maps) {
    return [objective = std::move(objective), items = constraints.items, weight, &maps](
               std::span<const double> x, std::span<double> grad) {
        double f = objective(x, grad);
        if (!std::isfinite(f)) return f;
        for (const auto& item : items) {
            if (const auto* w = std::get_if<DerivativeWindow>(&item)) {
                const double offset = maps.derivative_at_s(x) - w->center;
                const double violation = std::abs(offset) - w->radius;
                if (violation <= 0.0) continue;
                f += weight * violation * violation;
                if (!grad.empty()) {
                    const double scale = 2.0 * weight * violation * (offset > 0.0 ? 1.0 : -1.0);
                    const auto dg = maps.derivative_at_s_gradient();
                    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += scale * dg[k];
                }
            } else {
                const auto& lb = std::get<LowerBound>(item);
                const auto values = maps.interval_values(x);
                std::vector<double> weights(values.size(), 0.0);
                bool active = false;
                for (std::size_t i = 0; i < values.size(); ++i) {
                    const double violation = lb.level - values[i];
                    if (violation <= 0.0) continue;
                    active = true;
                    f += weight * violation * violation;
                    weights[i] = -2.0 * weight * violation;
                }
                if (active && !grad.empty()) maps.add_interval_pullback(weights, grad);
            }
        }
        return f;
    };
}

double max_violation(std::span<const double> x, const ConstraintSet& constraints, const AffineConstraintMaps& maps) {
    double worst = 0.0;
    for (const auto& item : constraints.items) {
        if (const auto* w = std::get_if<DerivativeWindow>(&item)) {
            worst = std::max(worst, std::abs(maps.derivative_at_s(x) - w->center) - w->radius);
        } else {
            const double level = std::get<LowerBound>(item).level;
            for (double v : maps.interval_values(x)) worst = std::max(worst, level - v);
        }
    }
    return worst;
}

PenalizedResult minimize_penalized(const ObjectiveFn& objective, std::vector<double> init,
                                   const ConstraintSet& constraints, const AffineConstraintMaps& maps,
                                   const OptimizerOptions& options) {
    constraints.validate();
    PenalizedResult out;
    out.final_weight = constraints.penalty_weight;
    std::vector<double> x = std::move(init);
    int total_iterations = 0;
    for (int round = 0; round < constraints.max_rounds; ++round) {
        out.result = minimize(penalized(objective, constraints, out.final_weight, maps), std::move(x), options);
        total_iterations += out.result.iterations;
        out.rounds = round + 1;
        out.max_violation = max_violation(out.result.x, constraints, maps);
        if (out.max_violation <= constraints.violation_tol || round + 1 == constraints.max_rounds) break;
        out.final_weight *= constraints.weight_growth;
        x = out.result.x;
    }
    out.result.iterations = total_iterations;
    return out;
}

}  // namespace tibo
