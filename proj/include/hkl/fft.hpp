#pragma once

// Complex DFT of arbitrary length on top of FFTW.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hkl::fft {

using cd = std::complex<double>;

namespace detail {

// FFTW planning touches global state; execution of a finished plan does not.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace detail

/// Unscaled DFT X_k = sum_j x_j exp(sign 2 pi i jk / n) for any n.
inline std::vector<cd> dft(const std::vector<cd>& x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    std::vector<cd> in = x, out(n);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard lock(detail::planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), pin, pout, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fft: FFTW could not create a plan of length " + std::to_string(n));
    fftw_execute(plan);
    std::lock_guard lock(detail::planner_mutex());
    fftw_destroy_plan(plan);
    return out;
}

/// n-fold cyclic self-convolution of x (length N): (x * x * ... * x)[j].
inline std::vector<cd> cyclic_convolution_power(const std::vector<cd>& x, unsigned power) {
    const std::size_t n = x.size();
    std::vector<cd> spec = dft(x, -1);
    for (auto& s : spec) {
        cd acc = 1.0;
        for (unsigned i = 0; i < power; ++i) acc *= s;
        s = acc;
    }
    std::vector<cd> out = dft(spec, +1);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= inv_n;
    return out;
}

}  // namespace hkl::fft
