#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pinlab::fftconv {

// Full linear convolution, out[k] = sum_i a[i] b[k-i], size |a|+|b|-1.
// FFTW-backed above a size threshold, direct below.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

// Solves the triangular "chaos prefix" recursion
//   B[n] = zeta[n] * (c[n] + sum_{m<n} B[m] * k[n-m]),  n = 0..L-1,
// where k is indexed by the gap (k[0] unused). Divide-and-conquer with FFT
// crossovers; exact up to roundoff against the direct O(L^2) loop.
void prefix_solve(std::span<const double> zeta, std::span<const double> c,
                  std::span<const double> k, std::span<double> out, bool use_fft = true);

// Direct O(L^2) reference implementation of the same recursion.
void prefix_solve_naive(std::span<const double> zeta, std::span<const double> c,
                        std::span<const double> k, std::span<double> out);

} // namespace pinlab::fftconv
