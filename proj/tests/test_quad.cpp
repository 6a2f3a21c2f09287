#include "pinlab/cheb.hpp"
#include "pinlab/fftconv.hpp"
#include "pinlab/quad.hpp"
#include "pinlab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace pinlab;

TEST_CASE("gauss-legendre integrates polynomials up to exactness degree") {
    const auto& gl = quad::gauss_legendre(8);
    for (int deg = 0; deg <= 15; ++deg) {
        double s = 0;
        for (int i = 0; i < 8; ++i) s += gl.w[i] * std::pow(gl.x[i], deg);
        const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
        CHECK(std::abs(s - exact) < 1e-13);
    }
}

TEST_CASE("doubling and adaptive quadrature hit tolerances") {
    auto f = [](double x) { return std::exp(x); };
    auto r = quad::integrate_doubling(f, 0.0, 1.0, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-12);
    auto a = quad::integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 1e-12,
                                      1.0, 1e-9);
    CHECK(std::abs(a.value - (2.0 - 2e-6)) < 1e-6);
}

TEST_CASE("chebyshev interpolant: values, full and partial integrals") {
    cheb::Interpolant c([](double x) { return std::sin(3 * x); }, 0.0, 2.0, 48);
    CHECK(std::abs(c(1.3) - std::sin(3.9)) < 1e-12);
    CHECK(std::abs(c.integral() - (1 - std::cos(6.0)) / 3) < 1e-12);
    CHECK(std::abs(c.integral_to(0.7) - (1 - std::cos(2.1)) / 3) < 1e-12);
}

TEST_CASE("fft convolution matches direct") {
    rng::CounterStream cs(7, 0);
    std::vector<double> a(513), b(777);
    for (auto& v : a) v = cs.next_unit() - 0.5;
    for (auto& v : b) v = cs.next_unit() - 0.5;
    auto fast = fftconv::convolve(a, b);
    std::vector<double> slow(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) slow[i + j] += a[i] * b[j];
    double err = 0;
    for (std::size_t i = 0; i < slow.size(); ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("prefix solver: fft path equals naive path") {
    rng::CounterStream cs(11, 0);
    const std::size_t L = 2000;
    std::vector<double> zeta(L), c(L), k(L + 1), naive(L), fast(L);
    for (auto& v : zeta) v = cs.next_unit() - 0.5;
    for (auto& v : c) v = cs.next_unit();
    k[0] = 0;
    for (std::size_t i = 1; i <= L; ++i) k[i] = 0.5 / std::pow(static_cast<double>(i), 1.0);
    fftconv::prefix_solve_naive(zeta, c, k, naive);
    fftconv::prefix_solve(zeta, c, k, fast, true);
    double err = 0;
    for (std::size_t i = 0; i < L; ++i) err = std::max(err, std::abs(naive[i] - fast[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("inverse normal cdf roundtrip") {
    for (double p : {1e-10, 1e-4, 0.1, 0.5, 0.77, 1 - 1e-6}) {
        double x = rng::inv_normal_cdf(p);
        double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
        CHECK(std::abs(back - p) < 1e-14 * std::max(1.0, std::abs(x)));
    }
    CHECK(rng::inv_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("counter stream is pure in (seed, stream, counter)") {
    rng::CounterStream a(42, 3), b(42, 3), c(42, 4);
    CHECK(a.at(17) == b.at(17));
    CHECK(a.at(17) != c.at(17));
    a.next_u64();
    CHECK(a.at(17) == b.at(17)); // at() ignores the cursor
}
