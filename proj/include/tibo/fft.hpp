#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tibo::fft {

/// Normalized inverse DFT: out[j] = (1/N) sum_k in[k] exp(+2 pi i j k / N).
///
/// Matches the numpy/MATLAB `ifft` convention. Plans are cached per size and
/// shared between threads; working buffers are per call.
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> in);

/// Real-input overload of `ifft`.
std::vector<std::complex<double>> ifft(std::span<const double> in);

}  // namespace tibo::fft
