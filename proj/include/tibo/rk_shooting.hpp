#pragma once

#include "tibo/periodic_extension.hpp"
#include "tibo/problem.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tibo {

/// Uniform RK4 trajectory of v' = u, u' = f(x, v, u).
struct IvpResult {
    double step = 0.0;  ///< signed; negative for backward integration
    std::vector<double> nodes;
    std::vector<double> y;
    std::vector<double> yp;
};

/// One classic RK4 step of size h from (x, v, u).
std::pair<double, double> rk4_step(const StateFunction& rhs, double x, double v, double u, double h);

/// Throws ValidationError if steps < 1 and NumericalError (with the step
/// index) once the state stops being finite.
IvpResult rk4_ivp(const StateFunction& rhs, double x0, double x1, double v0, double u0, int steps);

/// (v, u) at an arbitrary x inside the span, by a partial RK4 step from the
/// node preceding x in the integration direction.
std::pair<double, double> rk4_dense_value(const StateFunction& rhs, const IvpResult& ivp, double x);

enum class ShootingStatus { converged, failed };

struct ShootingResult {
    ShootingStatus status = ShootingStatus::failed;
    double v_s = 0.0;
    double u_s = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::string message;
};

/// Secant search on u(s) so that v(e) = beta, with v(s) = alpha.
ShootingResult shoot_dirichlet(const StateFunction& rhs, double s, double e, double alpha, double beta,
                               double guess_up, int steps);

/// Damped Newton on (v(s), u(s)) so that both boundary rows hold.
ShootingResult shoot_mixed(const StateFunction& rhs, double s, double e, const BoundaryConditions& bc,
                           double guess_vs, double guess_us, int steps);

struct InitialState {
    std::vector<double> z;
    /// True when the integrated trajectory was unusable and a straight line was used.
    bool linear_fallback = false;
};

/// Initial right-half state for the optimizer: integrate the extended rhs
/// from (v_s, u_s) at the shifted s back to 0 and forward to b, then sample
/// F along the trajectory. `substeps` RK4 steps per grid spacing.
InitialState tibo_initial_state(const ExtendedRhs& rhs, const GridSpec& grid, double v_s, double u_s,
                                int substeps = 4);

}  // namespace tibo
