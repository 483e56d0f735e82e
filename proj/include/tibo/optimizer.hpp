#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace tibo {

/// Objective evaluator. Returns f(x); when `grad` is non-empty it also
/// receives the gradient. A non-finite return value marks x as infeasible.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OptimizerOptions {
    int max_iters = 50000;
    /// Infinity-norm gradient threshold.
    double grad_tol = 1e-12;
    /// Relative objective decrease below which the iteration stops.
    double obj_tol = 1e-16;
    /// Quasi-Newton history length.
    int memory = 10;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;

    void validate() const;
};

enum class OptimizerStatus { converged, stalled, iteration_cap };

std::string_view to_string(OptimizerStatus status);

struct MinimizeResult {
    std::vector<double> x;
    double f = 0.0;
    double grad_inf = 0.0;
    int iterations = 0;
    OptimizerStatus status = OptimizerStatus::stalled;
    /// Objective after each accepted step, starting with f(init).
    std::vector<double> history;
};

/// Limited-memory BFGS with Armijo backtracking. Deterministic.
/// Throws ValidationError if the initial objective is not finite.
MinimizeResult minimize(const ObjectiveFn& objective, std::vector<double> init,
                        const OptimizerOptions& options = {});

/// |u(s) - center| <= radius
struct DerivativeWindow {
    double center = 0.0;
    double radius = 1.0;
};

/// v(x_k) >= level at every grid point x_k in [s, e]
struct LowerBound {
    double level = 0.0;
};

using Constraint = std::variant<DerivativeWindow, LowerBound>;

struct ConstraintSet {
    std::vector<Constraint> items;
    double penalty_weight = 1e4;
    /// Multiplier applied while a violation persists after a round.
    double weight_growth = 10.0;
    int max_rounds = 6;
    double violation_tol = 1e-10;

    void validate() const;
};

/// Constraint quantities that are affine in the optimization vector.
class AffineConstraintMaps {
public:
    virtual ~AffineConstraintMaps() = default;

    virtual double derivative_at_s(std::span<const double> x) const = 0;
    /// Constant gradient of derivative_at_s.
    virtual std::span<const double> derivative_at_s_gradient() const = 0;

    /// Solution values at the grid points inside [s, e].
    virtual std::vector<double> interval_values(std::span<const double> x) const = 0;
    /// grad += sum_i weights[i] * d(interval_values[i])/dx
    virtual void add_interval_pullback(std::span<const double> weights, std::span<double> grad) const = 0;
};

/// obj + weight * sum(violation^2), with the exact chain-rule gradient.
/// Satisfied constraints contribute nothing, so the result is bitwise equal
/// to `objective` wherever every constraint holds.
ObjectiveFn penalized(ObjectiveFn objective, const ConstraintSet& constraints, double weight,
                      const AffineConstraintMaps& maps);

double max_violation(std::span<const double> x, const ConstraintSet& constraints,
                     const AffineConstraintMaps& maps);

struct PenalizedResult {
    MinimizeResult result;
    double final_weight = 0.0;
    double max_violation = 0.0;
    int rounds = 0;
};

/// Quadratic-penalty loop: minimize, then grow the weight while the worst
/// violation exceeds `violation_tol`. Iteration counts accumulate over rounds.
PenalizedResult minimize_penalized(const ObjectiveFn& objective, std::vector<double> init,
                                   const ConstraintSet& constraints, const AffineConstraintMaps& maps,
                                   const OptimizerOptions& options = {});

}  // namespace tibo
