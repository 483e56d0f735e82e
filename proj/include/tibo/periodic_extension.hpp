#pragma once

#include "tibo/problem.hpp"

#include <cstddef>
#include <vector>

namespace tibo {

/// Interpolation grid for the extended problem.
///
/// The original interval [s, e] is padded by delta on both sides and shifted by
/// o = s - delta so that the working domain is [0, b] with b = e - s + 2 delta.
/// The full grid x_k = -b + k lambda (0 <= k < N) covers [-b, b); x_M = 0 and
/// the shifted s and e land on x_{M+m} and x_{M+m+n}.
struct GridSpec {
    double s = 0.0;
    double e = 0.0;
    double delta = 0.0;
    double origin = 0.0;       ///< o = s - delta
    double half_period = 0.0;  ///< b
    int q = 0;
    std::size_t M = 0;
    std::size_t N = 0;
    double lambda = 0.0;
    std::size_t m = 0;  ///< grid offset of s from x_M
    std::size_t n = 0;  ///< grid count from s to e

    double shifted_s() const noexcept { return s - origin; }
    double shifted_e() const noexcept { return e - origin; }
    double x(std::size_t k) const noexcept {
        return -half_period + lambda * static_cast<double>(k);
    }
    /// Full shifted grid (x_0 ... x_{N-1}).
    std::vector<double> abscissae() const;
    /// Right half (x_M ... x_{N-1}).
    std::vector<double> right_abscissae() const;
};

/// Padding that keeps the grid integral for every q >= 3.
inline double default_delta(double s, double e) { return 0.5 * (e - s); }

GridSpec make_grid(double s, double e, double delta, int q);

/// Sharpness of the default cut-off transition.
inline constexpr double kDefaultCutoffSharpness = 2.0;

/// C-infinity cut-off: 1 on [s, e], 0 outside (s - delta, e + delta).
///
///   sigma(t) = exp(-kappa / t) for t > 0, else 0
///   step(t)  = sigma(t) / (sigma(t) + sigma(1 - t))
///   h(x)     = step((x - s + delta) / delta) * step((e + delta - x) / delta)
struct CutoffFn {
    double s = 0.0;
    double e = 1.0;
    double delta = 1.0;
    double sharpness = kDefaultCutoffSharpness;
};

double smooth_step(double t, double sharpness = kDefaultCutoffSharpness);
double cutoff_value(const CutoffFn& h, double x);

/// Cut-off in the shifted coordinates of `grid`.
CutoffFn shifted_cutoff(const GridSpec& grid, double sharpness = kDefaultCutoffSharpness);

/// F(t, v, u) = f(t + o, v, u) h(t) on the shifted domain, with partials
/// scaled the same way. Outside the cut-off support F and its partials are 0
/// and f is not evaluated.
class ExtendedRhs {
public:
    struct Values {
        double value;
        double d_dv;
        double d_du;
    };

    ExtendedRhs(OdeProblem problem, CutoffFn cutoff, double origin);

    double value(double t, double v, double u) const;
    Values evaluate(double t, double v, double u) const;

    const CutoffFn& cutoff() const noexcept { return cutoff_; }
    double origin() const noexcept { return origin_; }
    const OdeProblem& problem() const noexcept { return problem_; }

private:
    OdeProblem problem_;
    CutoffFn cutoff_;
    double origin_;
};

ExtendedRhs extend_rhs(const OdeProblem& problem, const GridSpec& grid,
                       double sharpness = kDefaultCutoffSharpness);

}  // namespace tibo
