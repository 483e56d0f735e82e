#pragma once

// Brute-force reference computations. Nothing here calls into the library's
// FFT or reconstruction code; only plain loops over the defining sums.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Full odd sample vector from its right half (slots M..N-1).
inline std::vector<double> full_odd(const std::vector<double>& right) {
    const std::size_t m = right.size();
    std::vector<double> full(2 * m, 0.0);
    for (std::size_t k = 0; k < m; ++k) full[m + k] = right[k];
    for (std::size_t k = 1; k < m; ++k) full[m - k] = -right[k];
    return full;
}

/// a_j = (2/N) sum_k y_k sin(j pi x_k / b), x_k = -b + 2bk/N, 0 <= j < N/2.
inline std::vector<double> sine_coeffs(const std::vector<double>& full, double b) {
    const std::size_t n = full.size();
    const double lambda = 2.0 * b / static_cast<double>(n);
    std::vector<double> a(n / 2, 0.0);
    for (std::size_t j = 1; j < n / 2; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double x = -b + lambda * static_cast<double>(k);
            sum += full[k] * std::sin(static_cast<double>(j) * pi * x / b);
        }
        a[j] = 2.0 * sum / static_cast<double>(n);
    }
    return a;
}

inline double sine_series(const std::vector<double>& a, double b, double x) {
    double sum = 0.0;
    for (std::size_t j = 1; j < a.size(); ++j) sum += a[j] * std::sin(static_cast<double>(j) * pi * x / b);
    return sum;
}

/// Antiderivative pieces without constants: P(t) = (b/pi) sum a_j/j cos, Q(t) = (b/pi)^2 sum a_j/j^2 sin.
inline double cos_part(const std::vector<double>& a, double b, double t) {
    double sum = 0.0;
    for (std::size_t j = 1; j < a.size(); ++j) {
        const double jj = static_cast<double>(j);
        sum += a[j] / jj * std::cos(jj * pi * t / b);
    }
    return b / pi * sum;
}

inline double sin_part(const std::vector<double>& a, double b, double t) {
    double sum = 0.0;
    for (std::size_t j = 1; j < a.size(); ++j) {
        const double jj = static_cast<double>(j);
        sum += a[j] / (jj * jj) * std::sin(jj * pi * t / b);
    }
    return (b / pi) * (b / pi) * sum;
}

/// u(t) = a0 - P(t), v(t) = a1 + a0 t - Q(t) with (a0, a1) solved from the
/// boundary rows by plugging the closed forms in and applying Cramer's rule.
struct State {
    std::vector<double> coeffs;
    double b = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;

    double u(double t) const { return a0 - cos_part(coeffs, b, t); }
    double v(double t) const { return a1 + a0 * t - sin_part(coeffs, b, t); }
};

inline State solve_state(const std::vector<double>& right, double b, double s_shift, double e_shift,
                         const std::array<std::array<double, 4>, 2>& d, double alpha, double beta) {
    State st;
    st.b = b;
    st.coeffs = sine_coeffs(full_odd(right), b);
    const double ps = cos_part(st.coeffs, b, s_shift), pe = cos_part(st.coeffs, b, e_shift);
    const double qs = sin_part(st.coeffs, b, s_shift), qe = sin_part(st.coeffs, b, e_shift);
    // row . (v_s, u_s, v_e, u_e) = rhs, with v = a1 + a0 t - Q and u = a0 - P
    double coef[2][2];
    double rhs[2];
    const double target[2] = {alpha, beta};
    for (int r = 0; r < 2; ++r) {
        const auto& row = d[static_cast<std::size_t>(r)];
        coef[r][0] = row[0] * s_shift + row[1] + row[2] * e_shift + row[3];
        coef[r][1] = row[0] + row[2];
        rhs[r] = target[r] + row[0] * qs + row[1] * ps + row[2] * qe + row[3] * pe;
    }
    const double det = coef[0][0] * coef[1][1] - coef[0][1] * coef[1][0];
    st.a0 = (rhs[0] * coef[1][1] - coef[0][1] * rhs[1]) / det;
    st.a1 = (coef[0][0] * rhs[1] - rhs[0] * coef[1][0]) / det;
    return st;
}

/// Jacobian columns of an affine map: J[:, t] = f(e_t) - f(0).
inline std::vector<std::vector<double>> affine_jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& f, std::size_t dim) {
    const auto base = f(std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> cols(dim);
    for (std::size_t t = 0; t < dim; ++t) {
        std::vector<double> e(dim, 0.0);
        e[t] = 1.0;
        auto col = f(e);
        for (std::size_t k = 0; k < col.size(); ++k) col[k] -= base[k];
        cols[t] = std::move(col);
    }
    return cols;
}

/// Central difference of a scalar function along coordinate i.
inline double central_diff(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                           std::size_t i, double h) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double fp = f(x);
    x[i] = x0 - h;
    const double fm = f(x);
    return (fp - fm) / (2.0 * h);
}

/// Fourth-order central difference, for oracles that need more accuracy.
inline double central_diff4(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                            std::size_t i, double h) {
    const double x0 = x[i];
    auto at = [&](double off) {
        x[i] = x0 + off;
        return f(x);
    };
    return (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace oracle
