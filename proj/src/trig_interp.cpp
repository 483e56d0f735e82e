#include "tibo/trig_interp.hpp"

#include "tibo/error.hpp"
#include "tibo/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tibo {

using std::numbers::pi;

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

TrigPolyOdd::TrigPolyOdd(double half_period, std::vector<double> coeffs)
    : half_period_(half_period), coeffs_(std::move(coeffs)) {
    if (!(half_period_ > 0.0) || !std::isfinite(half_period_)) {
        throw ValidationError("TrigPolyOdd: half period must be positive and finite");
    }
    if (!coeffs_.empty()) coeffs_[0] = 0.0;
}

double TrigPolyOdd::eval(double x) const {
    const double w = pi * x / half_period_;
    double sum = 0.0;
    for (std::size_t j = 1; j < coeffs_.size(); ++j) {
        sum += coeffs_[j] * std::sin(static_cast<double>(j) * w);
    }
    return sum;
}

double TrigPolyOdd::derivative(double x, int order) const {
    if (order < 0 || order > kMaxDerivativeOrder) {
        throw ValidationError("TrigPolyOdd::derivative: unsupported order " + std::to_string(order));
    }
    if (order == 0) return eval(x);
    const double w = pi * x / half_period_;
    double sum = 0.0;
    for (std::size_t j = 1; j < coeffs_.size(); ++j) {
        const double k = static_cast<double>(j) * pi / half_period_;
        const double phase = static_cast<double>(j) * w;
        // d^r/dx^r sin(kx) = k^r sin(kx + r pi/2)
        double term = 0.0;
        switch (order % 4) {
            case 0: term = std::sin(phase); break;
            case 1: term = std::cos(phase); break;
            case 2: term = -std::sin(phase); break;
            default: term = -std::cos(phase); break;
        }
        sum += coeffs_[j] * std::pow(k, order) * term;
    }
    return sum;
}

double odd_asymmetry(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    double worst = std::abs(values[0]);
    for (std::size_t k = 1; k < n / 2; ++k) {
        worst = std::max(worst, std::abs(values[k] + values[n - k]));
    }
    return worst;
}

GridSamples::GridSamples(std::vector<double> values) : values_(std::move(values)) {
    const std::size_t n = values_.size();
    if (n < 4 || !is_power_of_two(n)) {
        throw ValidationError("GridSamples: sample count " + std::to_string(n) +
                              " must be a power of two >= 4");
    }
    double scale = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("GridSamples: non-finite sample");
        scale = std::max(scale, std::abs(v));
    }
    const double asym = odd_asymmetry(values_);
    if (asym > 1e-9 * (1.0 + scale)) {
        std::ostringstream msg;
        msg << "GridSamples: samples are not odd-symmetric (max asymmetry " << asym << ")";
        throw ValidationError(msg.str());
    }
}

std::vector<double> GridSamples::abscissae(std::size_t n, double half_period) {
    std::vector<double> x(n);
    const double step = 2.0 * half_period / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = -half_period + step * static_cast<double>(k);
    return x;
}

std::vector<double> odd_symmetrize(std::span<const double> right_half) {
    const std::size_t m = right_half.size();
    std::vector<double> full(2 * m, 0.0);
    for (std::size_t k = 0; k < m; ++k) full[m + k] = right_half[k];
    for (std::size_t k = 1; k < m; ++k) full[k] = -full[2 * m - k];
    return full;
}

TrigPolyOdd odd_interpolate(const GridSamples& samples, double half_period) {
    const auto y = samples.values();
    const std::size_t m = y.size() / 2;
    const auto spectrum = fft::ifft(y);
    std::vector<double> coeffs(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        coeffs[j] = sign * 2.0 * spectrum[j].imag();
    }
    return TrigPolyOdd(half_period, std::move(coeffs));
}

}  // namespace tibo
