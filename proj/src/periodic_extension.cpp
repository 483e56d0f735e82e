#include "tibo/periodic_extension.hpp"

#include "tibo/error.hpp"

#include <cmath>
#include <sstream>

namespace tibo {
namespace {

std::size_t exact_index(double value, const char* what, double s, double e) {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9 * (1.0 + std::abs(value)) || rounded < 0.0) {
        std::ostringstream msg;
        msg << "make_grid: " << what << " = " << value
            << " is not an integer grid offset; try delta = (e - s)/2 = " << default_delta(s, e);
        throw ValidationError(msg.str());
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace

std::vector<double> GridSpec::abscissae() const {
    std::vector<double> out(N);
    for (std::size_t k = 0; k < N; ++k) out[k] = x(k);
    return out;
}

std::vector<double> GridSpec::right_abscissae() const {
    std::vector<double> out(M);
    for (std::size_t k = 0; k < M; ++k) out[k] = x(M + k);
    return out;
}

GridSpec make_grid(double s, double e, double delta, int q) {
    if (!(s < e) || !std::isfinite(s) || !std::isfinite(e)) {
        throw ValidationError("make_grid: require finite s < e");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("make_grid: delta must be positive");
    if (q < 3 || q > 24) throw ValidationError("make_grid: q must lie in [3, 24]");

    GridSpec g;
    g.s = s;
    g.e = e;
    g.delta = delta;
    g.origin = s - delta;
    g.half_period = e + delta - g.origin;
    g.q = q;
    g.M = std::size_t{1} << q;
    g.N = 2 * g.M;
    g.lambda = 2.0 * g.half_period / static_cast<double>(g.N);
    const double n_total = static_cast<double>(g.N);
    g.m = exact_index(delta * n_total / (2.0 * g.half_period), "m = delta N / (2b)", s, e);
    g.n = exact_index((e - s) * n_total / (2.0 * g.half_period), "n = (e - s) N / (2b)", s, e);
    return g;
}

double smooth_step(double t, double sharpness) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-sharpness / t);
    const double b = std::exp(-sharpness / (1.0 - t));
    return a / (a + b);
}

double cutoff_value(const CutoffFn& h, double x) {
    return smooth_step((x - h.s + h.delta) / h.delta, h.sharpness) *
           smooth_step((h.e + h.delta - x) / h.delta, h.sharpness);
}

CutoffFn shifted_cutoff(const GridSpec& grid, double sharpness) {
    return CutoffFn{grid.shifted_s(), grid.shifted_e(), grid.delta, sharpness};
}

ExtendedRhs::ExtendedRhs(OdeProblem problem, CutoffFn cutoff, double origin)
    : problem_(std::move(problem)), cutoff_(cutoff), origin_(origin) {
    if (!problem_.rhs || !problem_.d_dv || !problem_.d_du) {
        throw ValidationError("ExtendedRhs: problem is missing an evaluator");
    }
}

double ExtendedRhs::value(double t, double v, double u) const {
    const double h = cutoff_value(cutoff_, t);
    if (h == 0.0) return 0.0;
    return problem_.rhs(t + origin_, v, u) * h;
}

ExtendedRhs::Values ExtendedRhs::evaluate(double t, double v, double u) const {
    const double h = cutoff_value(cutoff_, t);
    if (h == 0.0) return {0.0, 0.0, 0.0};
    const double x = t + origin_;
    return {problem_.rhs(x, v, u) * h, problem_.d_dv(x, v, u) * h, problem_.d_du(x, v, u) * h};
}

ExtendedRhs extend_rhs(const OdeProblem& problem, const GridSpec& grid, double sharpness) {
    return ExtendedRhs(problem, shifted_cutoff(grid, sharpness), grid.origin);
}

}  // namespace tibo
