#include "tibo/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace tibo::fft {
namespace {

// fftw_execute_dft is the only thread-safe FFTW entry point, so planning goes
// through one lock and execution uses the new-array interface.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan backward(int n) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(static_cast<size_t>(n));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(n, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<int, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> in) {
    const int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> data(in.begin(), in.end());
    if (n == 0) return data;
    fftw_plan plan = cache().backward(n);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
    const double scale = 1.0 / n;
    for (auto& c : data) c *= scale;
    return data;
}

std::vector<std::complex<double>> ifft(std::span<const double> in) {
    std::vector<std::complex<double>> data(in.begin(), in.end());
    return ifft(std::span<const std::complex<double>>(data));
}

}  // namespace tibo::fft
