#pragma once

#include "tibo/optimizer.hpp"
#include "tibo/periodic_extension.hpp"
#include "tibo/problem.hpp"
#include "tibo/trig_interp.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tibo {

// Notation used throughout this module (all on the shifted domain [0, b]):
//
//   z(t) = sum_j b_j sin(j pi t / b)                                   (= v'')
//   u(t) = a0 - (b/pi)   sum_{j>0} b_j/j   cos(j pi t / b)             (= v')
//   v(t) = a1 + a0 t - (b/pi)^2 sum_{j>0} b_j/j^2 sin(j pi t / b)
//
// The optimization vector Z holds z at the right half grid x_M ... x_{N-1};
// the left half follows from odd symmetry.

/// The 2x2 system that pins a0, a1 to the boundary rows.
struct BoundarySystem {
    double m11 = 0.0;
    double m12 = 0.0;
    double m21 = 0.0;
    double m22 = 0.0;
    double det = 0.0;
};

/// Validates rank(D) = 2 and a non-singular 2x2 system on `grid`.
BoundarySystem boundary_system(const BoundaryConditions& bc, const GridSpec& grid);

/// S_m, S_{m+n} (sine sums of v) and C_m, C_{m+n} (cosine sums of u) at s and e.
struct BoundarySums {
    double s_m = 0.0;
    double s_mn = 0.0;
    double c_m = 0.0;
    double c_mn = 0.0;
};

struct IntegrationConstants {
    double a0 = 0.0;
    double a1 = 0.0;
};

/// Constant gradients of a0, a1 (and of C_m, used for u(s)) with respect to Z.
struct ConstantGradients {
    std::vector<double> a0;
    std::vector<double> a1;
    std::vector<double> c_m;
};

/// b_j = (4/N) sum_{k=M}^{N-1} (-1)^j z_k sin(2 pi j k / N), via odd interpolation.
std::vector<double> coeffs_from_z(std::span<const double> z, const GridSpec& grid);

BoundarySums boundary_sums(std::span<const double> coeffs, const GridSpec& grid);

IntegrationConstants solve_a0_a1(const BoundaryConditions& bc, const BoundarySums& sums, const GridSpec& grid);

ConstantGradients grad_a0_a1(const BoundaryConditions& bc, const GridSpec& grid);

/// u_k, M <= k < N.
std::vector<double> reconstruct_u(std::span<const double> z, double a0, const GridSpec& grid);
/// v_k, M <= k < N.
std::vector<double> reconstruct_v(std::span<const double> z, double a0, double a1, const GridSpec& grid);

/// sum_k w_k grad(u_k) over the right half grid.
std::vector<double> pullback_u(std::span<const double> weights, const ConstantGradients& grads,
                               const GridSpec& grid);
/// sum_k w_k grad(v_k) over the right half grid.
std::vector<double> pullback_v(std::span<const double> weights, const ConstantGradients& grads,
                               const GridSpec& grid);

/// Residual objective phi(Z) = 1/(2M) sum_k (z_k - F_k)^2 with its FFT gradient.
///
/// Precomputes the extended rhs, the boundary system and the constant
/// gradients; evaluation is const and safe to call from several threads if
/// the problem evaluators are.
class TiboObjective final : public AffineConstraintMaps {
public:
    TiboObjective(const OdeProblem& problem, const BoundaryConditions& bc, const GridSpec& grid,
                  double cutoff_sharpness = kDefaultCutoffSharpness);

    struct Reconstruction {
        std::vector<double> coeffs;
        IntegrationConstants constants;
        std::vector<double> u;
        std::vector<double> v;
    };

    Reconstruction reconstruct(std::span<const double> z) const;

    /// Throws NumericalError naming the offending grid index if F is not finite.
    double value(std::span<const double> z) const;
    double value_and_gradient(std::span<const double> z, std::span<double> grad) const;

    /// Wraps value_and_gradient; non-finite evaluations become +inf.
    ObjectiveFn as_function() const;

    double derivative_at_s(std::span<const double> z) const override;
    std::span<const double> derivative_at_s_gradient() const override { return u_s_gradient_; }
    std::vector<double> interval_values(std::span<const double> z) const override;
    void add_interval_pullback(std::span<const double> weights, std::span<double> grad) const override;

    const GridSpec& grid() const noexcept { return grid_; }
    const ExtendedRhs& rhs() const noexcept { return rhs_; }
    const BoundaryConditions& boundary() const noexcept { return bc_; }
    const ConstantGradients& constant_gradients() const noexcept { return grads_; }

private:
    GridSpec grid_;
    BoundaryConditions bc_;
    ExtendedRhs rhs_;
    ConstantGradients grads_;
    std::vector<double> right_x_;
    std::vector<double> u_s_gradient_;
};

double objective(std::span<const double> z, const OdeProblem& problem, const BoundaryConditions& bc,
                 const GridSpec& grid);
std::vector<double> gradient(std::span<const double> z, const OdeProblem& problem, const BoundaryConditions& bc,
                             const GridSpec& grid);

enum class SolveStatus { converged, stalled, iteration_cap };

std::string_view to_string(SolveStatus status);

/// Closed-form approximation returned by `solve`. Evaluators take original x.
class TiboSolution {
public:
    TiboSolution(GridSpec grid, double cutoff_sharpness, std::vector<double> z, TrigPolyOdd z_poly,
                 IntegrationConstants constants);

    double y(double x) const { return v_shifted(x - grid_.origin); }
    double dy(double x) const { return u_shifted(x - grid_.origin); }
    double d2y(double x) const { return z_poly_.eval(x - grid_.origin); }

    double v_shifted(double t) const;
    double u_shifted(double t) const;
    double z_shifted(double t) const { return z_poly_.eval(t); }

    const GridSpec& grid() const noexcept { return grid_; }
    double cutoff_sharpness() const noexcept { return cutoff_sharpness_; }
    const TrigPolyOdd& z_poly() const noexcept { return z_poly_; }
    std::span<const double> z() const noexcept { return z_; }
    double a0() const noexcept { return constants_.a0; }
    double a1() const noexcept { return constants_.a1; }

    double objective_final = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::stalled;
    double max_violation = 0.0;
    double penalty_weight = 0.0;
    /// Set when the optimizer could not start or threw; the solution is the input state.
    std::string diagnostic;

private:
    GridSpec grid_;
    double cutoff_sharpness_;
    std::vector<double> z_;
    TrigPolyOdd z_poly_;
    IntegrationConstants constants_;
};

struct SolveOptions {
    OptimizerOptions optimizer{};
    double cutoff_sharpness = kDefaultCutoffSharpness;
};

/// Minimizes the residual objective from `init` (length M), optionally under
/// penalty constraints. Optimizer trouble is reported through `status`.
TiboSolution solve(const OdeProblem& problem, const BoundaryConditions& bc, const GridSpec& grid,
                   std::span<const double> init, const std::optional<ConstraintSet>& constraints = std::nullopt,
                   const SolveOptions& options = {});

/// Builds the solution record for a given Z without optimizing.
TiboSolution make_solution(const TiboObjective& model, std::span<const double> z);

/// max |v'' - F(t, v, v')| over 2^eval_q equally spaced points of [0, b].
double residual_max(const TiboSolution& solution, const OdeProblem& problem, int eval_q);

}  // namespace tibo
