#include "gmflou/fft_correlate.hpp"

#include <algorithm>
#include <complex>
#include <mutex>

#include <fftw3.h>

namespace gmflou {

namespace {

// Planner calls are not thread-safe in FFTW; execution with new-array calls is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

}  // namespace

std::vector<double> correlate_direct(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<double> z(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t kmax = std::min(y.size(), n - j);
        double acc = 0.0;
        for (std::size_t k = 0; k < kmax; ++k) acc += x[j + k] * y[k];
        z[j] = acc;
    }
    return z;
}

std::vector<double> correlate_fft(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t ny = std::min(y.size(), n);
    const std::size_t size = next_pow2(n + ny);
    const std::size_t spectrum = size / 2 + 1;

    FftwBuffer a_buf(sizeof(double) * size), b_buf(sizeof(double) * size);
    FftwBuffer fa_buf(sizeof(fftw_complex) * spectrum), fb_buf(sizeof(fftw_complex) * spectrum);
    auto* a = static_cast<double*>(a_buf.ptr);
    auto* b = static_cast<double*>(b_buf.ptr);
    auto* fa = static_cast<fftw_complex*>(fa_buf.ptr);
    auto* fb = static_cast<fftw_complex*>(fb_buf.ptr);

    // Reversing x turns the correlation into a linear convolution.
    std::fill(a, a + size, 0.0);
    std::fill(b, b + size, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i] = x[n - 1 - i];
    for (std::size_t k = 0; k < ny; ++k) b[k] = y[k];

    fftw_plan forward_a, forward_b, backward;
    {
        std::lock_guard lock(planner_mutex());
        forward_a = fftw_plan_dft_r2c_1d(static_cast<int>(size), a, fa, FFTW_ESTIMATE);
        forward_b = fftw_plan_dft_r2c_1d(static_cast<int>(size), b, fb, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(size), fa, a, FFTW_ESTIMATE);
    }
    fftw_execute(forward_a);
    fftw_execute(forward_b);
    for (std::size_t i = 0; i < spectrum; ++i) {
        const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
        const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
        fa[i][0] = re;
        fa[i][1] = im;
    }
    fftw_execute(backward);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_a);
        fftw_destroy_plan(forward_b);
        fftw_destroy_plan(backward);
    }

    std::vector<double> z(n);
    const double scale = 1.0 / static_cast<double>(size);
    for (std::size_t j = 0; j < n; ++j) z[j] = a[n - 1 - j] * scale;
    return z;
}

std::vector<double> correlate(std::span<const double> x, std::span<const double> y) {
    if (x.size() * std::min(x.size(), y.size()) <= (1u << 20)) return correlate_direct(x, y);
    return correlate_fft(x, y);
}

}  // namespace gmflou
