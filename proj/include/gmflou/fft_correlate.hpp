#pragma once

#include <span>
#include <vector>

namespace gmflou {

/// z[j] = sum_{k >= 0, j + k < N} x[j + k] * y[k] for j = 0..N-1, with N = x.size().
/// y may be shorter than x (missing entries are zero).
std::vector<double> correlate_direct(std::span<const double> x, std::span<const double> y);

/// Same result through an FFT convolution, O(N log N).
std::vector<double> correlate_fft(std::span<const double> x, std::span<const double> y);

/// Direct below a size threshold, FFT above it.
std::vector<double> correlate(std::span<const double> x, std::span<const double> y);

}  // namespace gmflou
