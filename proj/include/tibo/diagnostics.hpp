#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tibo {

struct InterpOrderRow {
    std::string name;
    /// Continuous derivatives of the test function; -1 marks an analytic one.
    int smoothness = 0;
    std::vector<std::size_t> sizes;
    std::vector<double> errors;
    /// Smallest log2 error ratio between consecutive sizes.
    double order = 0.0;
};

/// Max interpolation error of odd test functions sin(w)|sin(w)|^p (p = 1, 3, 5)
/// and the analytic sin(sin(w)), w = pi x / b, for each sample count.
std::vector<InterpOrderRow> interp_order_table(std::span<const std::size_t> sizes);
std::vector<InterpOrderRow> interp_order_table();

std::string format_interp_order(std::span<const InterpOrderRow> rows);

struct GradcheckReport {
    std::size_t m = 0;
    int trials = 0;
    double worst_rel = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double seconds = 0.0;
};

/// Compares the analytic objective gradient with fourth-order central
/// differences on random states of the example problem (theta = pi/2,
/// Neumann rows). `m` must be a power of two >= 8.
GradcheckReport run_gradcheck(std::size_t m, int trials, std::uint64_t seed = 1, double tolerance = 1e-6);

}  // namespace tibo
