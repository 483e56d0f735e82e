#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tibo {

/// Odd trigonometric polynomial  p(x) = sum_{0<=j<M} c_j sin(j pi x / b).
///
/// c_0 is kept for index alignment with the sample grid but is forced to zero
/// at construction; it never contributes to evaluation.
class TrigPolyOdd {
public:
    TrigPolyOdd(double half_period, std::vector<double> coeffs);

    double half_period() const noexcept { return half_period_; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::size_t degree_bound() const noexcept { return coeffs_.size(); }

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;

    /// Term-wise derivative of the sine series. Orders 0..4.
    double derivative(double x, int order) const;

private:
    double half_period_;
    std::vector<double> coeffs_;
};

inline constexpr int kMaxDerivativeOrder = 4;

/// Samples y_k = f(x_k) of an odd 2b-periodic function on x_k = -b + 2bk/N.
///
/// Construction validates N (power of two, >= 4) and odd grid symmetry:
/// y_0 = 0 and y_k = -y_{N-k} for 1 <= k < N/2, within 1e-9 (1 + max|y|).
/// The midpoint sample y_{N/2} sits at x = 0 and is not constrained.
class GridSamples {
public:
    explicit GridSamples(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Sample abscissae x_k = -b + 2bk/N.
    static std::vector<double> abscissae(std::size_t n, double half_period);

private:
    std::vector<double> values_;
};

/// Max over 1 <= k < N/2 of |y_k + y_{N-k}|, together with |y_0|.
double odd_asymmetry(std::span<const double> values);

/// Builds the full length-N odd vector (0, -z_{N-1}, ..., -z_{N/2+1}, z_{N/2}, ..., z_{N-1})
/// from its right half (z_{N/2} ... z_{N-1}).
std::vector<double> odd_symmetrize(std::span<const double> right_half);

/// Coefficients a_j = (2/N) sum_k (-1)^j y_k sin(2 pi j k / N), obtained as
/// (-1)^j * 2 * Im(ifft(y))_j.
TrigPolyOdd odd_interpolate(const GridSamples& samples, double half_period);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace tibo
