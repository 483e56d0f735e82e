#pragma once

#include <array>
#include <functional>

namespace tibo {

/// Scalar evaluator g(x, v, u) where v = y(x) and u = y'(x).
using StateFunction = std::function<double(double x, double v, double u)>;

/// Second-order ODE  y'' = f(x, y, y')  on [s, e], with the partials of f.
struct OdeProblem {
    StateFunction rhs;
    StateFunction d_dv;
    StateFunction d_du;
    double s = 0.0;
    double e = 1.0;
};

/// Two linear boundary rows  D (y(s), y'(s), y(e), y'(e))^T = (alpha, beta)^T.
struct BoundaryConditions {
    std::array<std::array<double, 4>, 2> d{};
    double alpha = 0.0;
    double beta = 0.0;

    /// Applies row i of D to (v_s, u_s, v_e, u_e).
    double apply_row(int row, double v_s, double u_s, double v_e, double u_e) const {
        const auto& r = d[static_cast<std::size_t>(row)];
        return r[0] * v_s + r[1] * u_s + r[2] * v_e + r[3] * u_e;
    }
};

}  // namespace tibo
