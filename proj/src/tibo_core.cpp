#include "tibo/tibo_core.hpp"

#include "tibo/error.hpp"
#include "tibo/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace tibo {

using std::numbers::pi;
using cvec = std::vector<std::complex<double>>;

namespace {

double sign_of(std::size_t j) { return (j % 2 == 0) ? 1.0 : -1.0; }

void require_length(std::span<const double> z, const GridSpec& grid, const char* who) {
    if (z.size() != grid.M) {
        std::ostringstream msg;
        msg << who << ": expected " << grid.M << " values, got " << z.size();
        throw ValidationError(msg.str());
    }
}

// Im(ifft(Z_full)), shared by the coefficient, U and V reconstructions.
std::vector<double> half_spectrum(std::span<const double> z) {
    const auto spectrum = fft::ifft(odd_symmetrize(z));
    std::vector<double> im(spectrum.size());
    for (std::size_t j = 0; j < spectrum.size(); ++j) im[j] = spectrum[j].imag();
    return im;
}

// J^p o w, truncated to the first M slots; J = (0, 1, 1/2, ..., 1/(M-1), 0_M).
cvec weight_by_j(std::span<const double> w, std::size_t m, int power) {
    cvec out(2 * m, 0.0);
    for (std::size_t j = 1; j < m; ++j) out[j] = w[j] * std::pow(1.0 / static_cast<double>(j), power);
    return out;
}

// N * Im(ifft(w))[M:N-1] or N * Re(...) for a length-N spectrum.
std::vector<double> right_half_part(const cvec& spectrum_in, std::size_t m, bool imaginary) {
    const auto out = fft::ifft(spectrum_in);
    const double n = static_cast<double>(2 * m);
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = n * (imaginary ? out[m + k].imag() : out[m + k].real());
    return r;
}

// G[t] = sum_{0<j<M} w_j d b_j / d z_t = (4/N) sum_j w_j (-1)^j sin(2 pi j t / N),
// assembled as 4 * Im(ifft(A o w_N))[M:N-1].
std::vector<double> coefficient_pullback(std::span<const double> w, std::size_t m) {
    cvec spec(2 * m, 0.0);
    for (std::size_t j = 1; j < m; ++j) spec[j] = sign_of(j) * w[j];
    auto g = right_half_part(spec, m, true);
    const double n = static_cast<double>(2 * m);
    for (double& v : g) v *= 4.0 / n;
    return g;
}

}  // namespace

BoundarySystem boundary_system(const BoundaryConditions& bc, const GridSpec& grid) {
    const auto& d = bc.d;
    // rank check through the singular values of the 2x4 matrix
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        g11 += d[0][k] * d[0][k];
        g12 += d[0][k] * d[1][k];
        g22 += d[1][k] * d[1][k];
    }
    const double tr = g11 + g22;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (g11 - g22) * (g11 - g22) + g12 * g12));
    const double lmax = 0.5 * tr + disc;
    const double lmin = std::max(0.0, 0.5 * tr - disc);
    if (!(lmax > 0.0) || std::sqrt(lmin) <= 1e-10 * std::sqrt(lmax)) {
        throw ValidationError("boundary matrix D must have rank 2");
    }

    const double s = grid.shifted_s();
    const double e = grid.shifted_e();
    BoundarySystem sys;
    sys.m11 = d[0][0] * s + d[0][1] + d[0][2] * e + d[0][3];
    sys.m12 = d[0][0] + d[0][2];
    sys.m21 = d[1][0] * s + d[1][1] + d[1][2] * e + d[1][3];
    sys.m22 = d[1][0] + d[1][2];
    sys.det = sys.m11 * sys.m22 - sys.m12 * sys.m21;
    const double scale = std::max({std::abs(sys.m11), std::abs(sys.m12), std::abs(sys.m21), std::abs(sys.m22)});
    if (!(std::abs(sys.det) > 1e-12 * scale * scale)) {
        std::ostringstream msg;
        msg << "boundary system is singular for D = [[" << d[0][0] << ", " << d[0][1] << ", " << d[0][2] << ", "
            << d[0][3] << "], [" << d[1][0] << ", " << d[1][1] << ", " << d[1][2] << ", " << d[1][3]
            << "]] (det " << sys.det << ")";
        throw ValidationError(msg.str());
    }
    return sys;
}

std::vector<double> coeffs_from_z(std::span<const double> z, const GridSpec& grid) {
    require_length(z, grid, "coeffs_from_z");
    const GridSamples samples(odd_symmetrize(z));
    const auto poly = odd_interpolate(samples, grid.half_period);
    const auto c = poly.coeffs();
    return {c.begin(), c.end()};
}

BoundarySums boundary_sums(std::span<const double> coeffs, const GridSpec& grid) {
    const double b = grid.half_period;
    const double n = static_cast<double>(grid.N);
    const double ms = static_cast<double>(grid.m);
    const double me = static_cast<double>(grid.m + grid.n);
    BoundarySums sums;
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
        const double jj = static_cast<double>(j);
        const double w = 2.0 * pi * jj / n;
        sums.s_m += coeffs[j] / (jj * jj) * std::sin(w * ms);
        sums.s_mn += coeffs[j] / (jj * jj) * std::sin(w * me);
        sums.c_m += coeffs[j] / jj * std::cos(w * ms);
        sums.c_mn += coeffs[j] / jj * std::cos(w * me);
    }
    const double bs = (b / pi) * (b / pi);
    sums.s_m *= bs;
    sums.s_mn *= bs;
    sums.c_m *= b / pi;
    sums.c_mn *= b / pi;
    return sums;
}

IntegrationConstants solve_a0_a1(const BoundaryConditions& bc, const BoundarySums& sums, const GridSpec& grid) {
    const auto sys = boundary_system(bc, grid);
    const auto& d = bc.d;
    const double mu = d[0][0] * sums.s_m + d[0][1] * sums.c_m + d[0][2] * sums.s_mn + d[0][3] * sums.c_mn;
    const double nu = d[1][0] * sums.s_m + d[1][1] * sums.c_m + d[1][2] * sums.s_mn + d[1][3] * sums.c_mn;
    const double ra = bc.alpha + mu;
    const double rb = bc.beta + nu;
    return {(sys.m22 * ra - sys.m12 * rb) / sys.det, (-sys.m21 * ra + sys.m11 * rb) / sys.det};
}

ConstantGradients grad_a0_a1(const BoundaryConditions& bc, const GridSpec& grid) {
    const auto sys = boundary_system(bc, grid);
    const std::size_t m = grid.M;
    const double b = grid.half_period;
    const double n = static_cast<double>(grid.N);

    // Coefficient weights of each boundary sum, then pulled back through db_j/dz_t.
    std::vector<double> ws_m(m, 0.0), ws_mn(m, 0.0), wc_m(m, 0.0), wc_mn(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) {
        const double jj = static_cast<double>(j);
        const double w = 2.0 * pi * jj / n;
        ws_m[j] = (b / pi) * (b / pi) / (jj * jj) * std::sin(w * static_cast<double>(grid.m));
        ws_mn[j] = (b / pi) * (b / pi) / (jj * jj) * std::sin(w * static_cast<double>(grid.m + grid.n));
        wc_m[j] = (b / pi) / jj * std::cos(w * static_cast<double>(grid.m));
        wc_mn[j] = (b / pi) / jj * std::cos(w * static_cast<double>(grid.m + grid.n));
    }
    const auto gs_m = coefficient_pullback(ws_m, m);
    const auto gs_mn = coefficient_pullback(ws_mn, m);
    const auto gc_m = coefficient_pullback(wc_m, m);
    const auto gc_mn = coefficient_pullback(wc_mn, m);

    const auto& d = bc.d;
    ConstantGradients out{std::vector<double>(m), std::vector<double>(m), gc_m};
    for (std::size_t t = 0; t < m; ++t) {
        const double gmu = d[0][0] * gs_m[t] + d[0][1] * gc_m[t] + d[0][2] * gs_mn[t] + d[0][3] * gc_mn[t];
        const double gnu = d[1][0] * gs_m[t] + d[1][1] * gc_m[t] + d[1][2] * gs_mn[t] + d[1][3] * gc_mn[t];
        out.a0[t] = (sys.m22 * gmu - sys.m12 * gnu) / sys.det;
        out.a1[t] = (-sys.m21 * gmu + sys.m11 * gnu) / sys.det;
    }
    return out;
}

std::vector<double> reconstruct_u(std::span<const double> z, double a0, const GridSpec& grid) {
    require_length(z, grid, "reconstruct_u");
    const auto im = half_spectrum(z);
    const auto part = right_half_part(weight_by_j(im, grid.M, 1), grid.M, false);
    std::vector<double> u(grid.M);
    for (std::size_t k = 0; k < grid.M; ++k) u[k] = a0 - (2.0 * grid.half_period / pi) * part[k];
    return u;
}

std::vector<double> reconstruct_v(std::span<const double> z, double a0, double a1, const GridSpec& grid) {
    require_length(z, grid, "reconstruct_v");
    const auto im = half_spectrum(z);
    const auto part = right_half_part(weight_by_j(im, grid.M, 2), grid.M, true);
    const double b = grid.half_period;
    std::vector<double> v(grid.M);
    for (std::size_t k = 0; k < grid.M; ++k) {
        v[k] = a1 + a0 * grid.x(grid.M + k) - (2.0 * b * b / (pi * pi)) * part[k];
    }
    return v;
}

std::vector<double> pullback_u(std::span<const double> weights, const ConstantGradients& grads,
                               const GridSpec& grid) {
    const std::size_t m = grid.M;
    cvec psi(2 * m, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        psi[m + k] = weights[k];
        total += weights[k];
    }
    const auto inner = fft::ifft(psi);
    cvec outer(2 * m, 0.0);
    for (std::size_t j = 1; j < m; ++j) outer[j] = inner[j].real() / static_cast<double>(j);
    const auto part = right_half_part(outer, m, true);
    const double n = static_cast<double>(grid.N);
    std::vector<double> out(m);
    for (std::size_t t = 0; t < m; ++t) {
        out[t] = total * grads.a0[t] - (4.0 * grid.half_period * n / pi) * (part[t] / n);
    }
    return out;
}

std::vector<double> pullback_v(std::span<const double> weights, const ConstantGradients& grads,
                               const GridSpec& grid) {
    const std::size_t m = grid.M;
    cvec psi(2 * m, 0.0);
    double total = 0.0;
    double moment = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        psi[m + k] = weights[k];
        total += weights[k];
        moment += weights[k] * grid.x(m + k);
    }
    const auto inner = fft::ifft(psi);
    cvec outer(2 * m, 0.0);
    for (std::size_t j = 1; j < m; ++j) {
        const double jj = static_cast<double>(j);
        outer[j] = inner[j].imag() / (jj * jj);
    }
    const auto part = right_half_part(outer, m, true);
    const double b = grid.half_period;
    const double n = static_cast<double>(grid.N);
    std::vector<double> out(m);
    for (std::size_t t = 0; t < m; ++t) {
        out[t] = total * grads.a1[t] + moment * grads.a0[t] - (4.0 * b * b * n / (pi * pi)) * (part[t] / n);
    }
    return out;
}

TiboObjective::TiboObjective(const OdeProblem& problem, const BoundaryConditions& bc, const GridSpec& grid,
                             double cutoff_sharpness)
    : grid_(grid),
      bc_(bc),
      rhs_(extend_rhs(problem, grid, cutoff_sharpness)),
      grads_(grad_a0_a1(bc, grid)),
      right_x_(grid.right_abscissae()) {
    u_s_gradient_.resize(grid_.M);
    for (std::size_t t = 0; t < grid_.M; ++t) u_s_gradient_[t] = grads_.a0[t] - grads_.c_m[t];
}

TiboObjective::Reconstruction TiboObjective::reconstruct(std::span<const double> z) const {
    require_length(z, grid_, "TiboObjective");
    const auto im = half_spectrum(z);
    const std::size_t m = grid_.M;
    Reconstruction r;
    r.coeffs.resize(m);
    for (std::size_t j = 0; j < m; ++j) r.coeffs[j] = j == 0 ? 0.0 : sign_of(j) * 2.0 * im[j];
    r.constants = solve_a0_a1(bc_, boundary_sums(r.coeffs, grid_), grid_);

    const double b = grid_.half_period;
    const auto part_u = right_half_part(weight_by_j(im, m, 1), m, false);
    const auto part_v = right_half_part(weight_by_j(im, m, 2), m, true);
    r.u.resize(m);
    r.v.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        r.u[k] = r.constants.a0 - (2.0 * b / pi) * part_u[k];
        r.v[k] = r.constants.a1 + r.constants.a0 * right_x_[k] - (2.0 * b * b / (pi * pi)) * part_v[k];
    }
    return r;
}

double TiboObjective::value(std::span<const double> z) const { return value_and_gradient(z, {}); }

double TiboObjective::value_and_gradient(std::span<const double> z, std::span<double> grad) const {
    const auto r = reconstruct(z);
    const std::size_t m = grid_.M;
    std::vector<double> resid(m), psi_u(m), psi_v(m);
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto f = rhs_.evaluate(right_x_[k], r.v[k], r.u[k]);
        if (!std::isfinite(f.value) || !std::isfinite(f.d_dv) || !std::isfinite(f.d_du)) {
            throw NumericalError("objective: non-finite rhs at grid point", static_cast<long>(m + k));
        }
        resid[k] = z[k] - f.value;
        psi_u[k] = resid[k] * f.d_du;
        psi_v[k] = resid[k] * f.d_dv;
        sum += resid[k] * resid[k];
    }
    const double phi = sum / (2.0 * static_cast<double>(m));
    if (grad.empty()) return phi;

    const auto phi_u = pullback_u(psi_u, grads_, grid_);
    const auto phi_v = pullback_v(psi_v, grads_, grid_);
    for (std::size_t t = 0; t < m; ++t) {
        grad[t] = (resid[t] - phi_u[t] - phi_v[t]) / static_cast<double>(m);
    }
    return phi;
}

ObjectiveFn TiboObjective::as_function() const {
    return [this](std::span<const double> z, std::span<double> grad) {
        try {
            return value_and_gradient(z, grad);
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    };
}

double TiboObjective::derivative_at_s(std::span<const double> z) const {
    const auto coeffs = coeffs_from_z(z, grid_);
    const auto sums = boundary_sums(coeffs, grid_);
    return solve_a0_a1(bc_, sums, grid_).a0 - sums.c_m;
}

std::vector<double> TiboObjective::interval_values(std::span<const double> z) const {
    const auto r = reconstruct(z);
    return {r.v.begin() + static_cast<long>(grid_.m), r.v.begin() + static_cast<long>(grid_.m + grid_.n + 1)};
}

void TiboObjective::add_interval_pullback(std::span<const double> weights, std::span<double> grad) const {
    std::vector<double> w(grid_.M, 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i) w[grid_.m + i] = weights[i];
    const auto g = pullback_v(w, grads_, grid_);
    for (std::size_t t = 0; t < grid_.M; ++t) grad[t] += g[t];
}

double objective(std::span<const double> z, const OdeProblem& problem, const BoundaryConditions& bc,
                 const GridSpec& grid) {
    return TiboObjective(problem, bc, grid).value(z);
}

std::vector<double> gradient(std::span<const double> z, const OdeProblem& problem, const BoundaryConditions& bc,
                             const GridSpec& grid) {
    std::vector<double> g(grid.M);
    TiboObjective(problem, bc, grid).value_and_gradient(z, g);
    return g;
}

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::stalled: return "stalled";
        case SolveStatus::iteration_cap: return "iteration_cap";
    }
    return "unknown";
}

TiboSolution::TiboSolution(GridSpec grid, double cutoff_sharpness, std::vector<double> z, TrigPolyOdd z_poly,
                           IntegrationConstants constants)
    : grid_(grid),
      cutoff_sharpness_(cutoff_sharpness),
      z_(std::move(z)),
      z_poly_(std::move(z_poly)),
      constants_(constants) {}

double TiboSolution::v_shifted(double t) const {
    const auto c = z_poly_.coeffs();
    const double b = grid_.half_period;
    const double w = pi * t / b;
    double sum = 0.0;
    for (std::size_t j = 1; j < c.size(); ++j) {
        const double jj = static_cast<double>(j);
        sum += c[j] / (jj * jj) * std::sin(jj * w);
    }
    return constants_.a1 + constants_.a0 * t - (b / pi) * (b / pi) * sum;
}

double TiboSolution::u_shifted(double t) const {
    const auto c = z_poly_.coeffs();
    const double b = grid_.half_period;
    const double w = pi * t / b;
    double sum = 0.0;
    for (std::size_t j = 1; j < c.size(); ++j) {
        const double jj = static_cast<double>(j);
        sum += c[j] / jj * std::cos(jj * w);
    }
    return constants_.a0 - (b / pi) * sum;
}

TiboSolution make_solution(const TiboObjective& model, std::span<const double> z) {
    const auto& grid = model.grid();
    auto coeffs = coeffs_from_z(z, grid);
    const auto constants = solve_a0_a1(model.boundary(), boundary_sums(coeffs, grid), grid);
    return TiboSolution(grid, model.rhs().cutoff().sharpness, {z.begin(), z.end()},
                        TrigPolyOdd(grid.half_period, std::move(coeffs)), constants);
}

TiboSolution solve(const OdeProblem& problem, const BoundaryConditions& bc, const GridSpec& grid,
                   std::span<const double> init, const std::optional<ConstraintSet>& constraints,
                   const SolveOptions& options) {
    require_length(init, grid, "solve");
    for (double v : init) {
        if (!std::isfinite(v)) throw ValidationError("solve: initial state must be finite");
    }
    const TiboObjective model(problem, bc, grid, options.cutoff_sharpness);
    const auto fn = model.as_function();

    std::vector<double> z(init.begin(), init.end());
    MinimizeResult result;
    double violation = 0.0;
    double weight = 0.0;
    std::string diagnostic;
    try {
        if (constraints && !constraints->items.empty()) {
            auto pr = minimize_penalized(fn, z, *constraints, model, options.optimizer);
            result = std::move(pr.result);
            violation = pr.max_violation;
            weight = pr.final_weight;
        } else {
            result = minimize(fn, z, options.optimizer);
        }
    } catch (const ValidationError& err) {
        diagnostic = err.what();
        result.x = z;
        result.f = std::numeric_limits<double>::infinity();
        result.status = OptimizerStatus::stalled;
    }

    auto sol = make_solution(model, result.x);
    try {
        sol.objective_final = model.value(result.x);
    } catch (const NumericalError&) {
        sol.objective_final = std::numeric_limits<double>::infinity();
    }
    sol.iterations = result.iterations;
    switch (result.status) {
        case OptimizerStatus::converged: sol.status = SolveStatus::converged; break;
        case OptimizerStatus::stalled: sol.status = SolveStatus::stalled; break;
        case OptimizerStatus::iteration_cap: sol.status = SolveStatus::iteration_cap; break;
    }
    sol.max_violation = violation;
    sol.penalty_weight = weight;
    sol.diagnostic = std::move(diagnostic);
    return sol;
}

double residual_max(const TiboSolution& solution, const OdeProblem& problem, int eval_q) {
    const auto& grid = solution.grid();
    const auto rhs = extend_rhs(problem, grid, solution.cutoff_sharpness());
    const std::size_t points = std::size_t{1} << eval_q;
    const double b = grid.half_period;
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = b * static_cast<double>(i) / static_cast<double>(points - 1);
        const double r = solution.z_shifted(t) - rhs.value(t, solution.v_shifted(t), solution.u_shifted(t));
        if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace tibo
