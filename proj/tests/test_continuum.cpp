#include "pinlab/continuum.hpp"
#include "pinlab/quad.hpp"
#include "pinlab/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace pinlab;

TEST_CASE("heat kernel conventions and normalization") {
    CHECK(cont::heat_kernel(1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)));
    CHECK(cont::heat_kernel(0.0, 0.0) == 1.0);
    CHECK(cont::heat_kernel(0.0, 0.3) == 0.0);
    for (double t : {0.1, 1.0}) {
        auto r = quad::integrate_doubling([t](double x) { return cont::heat_kernel(t, x); },
                                          -12 * std::sqrt(t), 12 * std::sqrt(t), 1e-11);
        CHECK(std::abs(r.value - 1.0) < 1e-10);
    }
}

TEST_CASE("hitting moments: quadrature equals (2k+1)!! s^k") {
    for (int k = 0; k <= 6; ++k) {
        for (double s : {0.25, 0.5, 1.0}) {
            const double cut = 30 * std::sqrt(s);
            auto r = quad::integrate_doubling(
                [k, s](double x) {
                    return 2 * std::pow(x, 2 * k + 1) * cont::bm_first_hit(x, s);
                },
                0.0, cut, 1e-12, 24);
            const double exact = cont::double_factorial_odd(k) * std::pow(s, k);
            CHECK(std::abs(r.value - exact) / exact < 1e-8);
        }
    }
}

TEST_CASE("first-hit density integrates to 1 over time") {
    const double x = 0.7;
    auto near = quad::integrate_doubling(
        [x](double s) { return cont::bm_first_hit(x, s); }, 1e-8, 1.0, 1e-11, 24);
    // tail s in (1, inf): substitute s = 1/v^2, ds = -2/v^3 dv (smooth integrand)
    auto tail = quad::integrate_doubling(
        [x](double v) { return cont::bm_first_hit(x, 1.0 / (v * v)) * 2.0 / (v * v * v); },
        1e-9, 1.0, 1e-11, 24);
    CHECK(std::abs(near.value + tail.value - 1.0) < 1e-8);
}

TEST_CASE("no-hit kernel: sign structure and total probability") {
    CHECK(cont::bm_no_hit(0.5, -0.3) == 0.0);
    CHECK(cont::bm_no_hit(-0.5, 0.3) == 0.0);
    CHECK(cont::bm_no_hit(0.5, 0.3) > 0.0);
    const double x = 0.7;
    auto stay = quad::integrate_doubling([x](double y) { return cont::bm_no_hit(x, y); },
                                         0.0, x + 14.0, 1e-11, 24);
    auto hit = quad::integrate_doubling([x](double s) { return cont::bm_first_hit(x, s); },
                                        1e-12, 1.0, 1e-11, 24);
    CHECK(std::abs(stay.value + hit.value - 1.0) < 1e-8);
}

TEST_CASE("no-hit kernel vs discretized Brownian motion with bridge correction") {
    // survival estimator: product of per-step bridge no-crossing probabilities
    const double x = 0.7;
    auto psi = cont::gaussian_bump(0.5, 0.8);
    const int steps = 512;
    const double dt = 1.0 / steps, sdt = std::sqrt(dt);
    const std::int64_t paths = 100000;
    double sum = 0, sumsq = 0;
    for (std::int64_t p = 0; p < paths; ++p) {
        rng::CounterStream cs(2024, static_cast<std::uint64_t>(p));
        double b = x, surv = 1.0;
        for (int i = 0; i < steps; ++i) {
            double nb = b + sdt * cs.next_normal();
            if (b * nb <= 0)
                surv = 0.0;
            else
                surv *= 1.0 - std::exp(-2 * b * nb / dt);
            b = nb;
            if (surv == 0) break;
        }
        const double v = surv * psi(b);
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / paths;
    const double se = std::sqrt((sumsq / paths - mean * mean) / paths);
    auto exact = quad::integrate_doubling(
        [&](double y) { return cont::bm_no_hit(x, y) * psi(y); }, 0.0, 8.0, 1e-10, 16);
    CHECK(std::abs(mean - exact.value) < 3 * se + 1e-4);
}

TEST_CASE("time-integrated first-hit mass equals sqrt(2/(pi s))") {
    for (double t : {0.0, 0.3, 0.7}) {
        const double s = 1 - t;
        auto r = quad::integrate_doubling(
            [s](double y) { return 2 * cont::bm_first_hit(y, s); }, 0.0, 30 * std::sqrt(s),
            1e-11, 24);
        CHECK(std::abs(r.value - std::sqrt(2.0 / (M_PI * s))) < 1e-8);
    }
}

TEST_CASE("pairings: bounds, decay, closed-form Gaussian oracle") {
    auto phi = cont::gaussian_bump(0.5);
    auto psi = cont::gaussian_bump(0.5);
    CHECK(std::abs(cont::pair_phi(phi, 0.3, 64.0)) <= phi.sup_norm + 1e-12);
    CHECK(cont::pair_phi_psi(phi, psi, 4096.0) < 0.02);
    // untruncated Gaussians: int int phi g_t psi = sigma^2 sqrt(2 pi/(2 sigma^2 + t))
    const double sigma = 0.5;
    for (double t : {0.5, 1.0, 2.0}) {
        const double closed = sigma * sigma * std::sqrt(2 * M_PI / (2 * sigma * sigma + t));
        CHECK(std::abs(cont::pair_phi_psi(phi, psi, t, 1e-10) - closed) < 1e-8);
    }
}

TEST_CASE("sE: linear in phi, analytic bound, well defined") {
    auto phi = cont::gaussian_bump(0.5);
    auto psi = cont::gaussian_bump(0.5);
    cont::TestFn zero{[](double) { return 0.0; }, -1.0, 1.0, 0.0, "zero"};
    CHECK(cont::sE(zero, psi) == doctest::Approx(0.0));
    const double val = cont::sE(phi, psi, 1e-7);
    // |sE| <= ||phi|| ||psi|| / (2pi)^{3/2} * 2pi * (int |x| e^{-x^2/2})^2
    const double bound = 1.0 * 1.0 / std::pow(2 * M_PI, 1.5) * 2 * M_PI * 4.0;
    CHECK(std::abs(val) <= bound);
    CHECK(val > 0.0);
}

TEST_CASE("hitting basis projection: exact low-degree cases") {
    auto p0 = cont::project_onto_hitting_basis([](double) { return 1.0; }, 0);
    REQUIRE(p0.coeffs.size() == 1);
    CHECK(p0.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p0.phi(2.0) - 2.0) < 1e-12); // phi = |x|
    auto p1 = cont::project_onto_hitting_basis([](double s) { return s; }, 1);
    CHECK(p1.coeffs[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(p1.coeffs[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(p1.phi(2.0) - 8.0 / 3.0) < 1e-9); // |x|^3 / 3
}

TEST_CASE("hitting basis projection reproduces e^s through the hit kernel") {
    auto proj = cont::project_onto_hitting_basis([](double s) { return std::exp(s); }, 8);
    CHECK(proj.sup_error < 1e-4);
    CHECK(proj.cond_estimate < 1e9);
    for (double s : {0.1, 0.45, 0.9}) {
        auto r = quad::integrate_doubling(
            [&](double x) { return 2 * proj.phi(x) * cont::bm_first_hit(x, s); }, 0.0,
            30 * std::sqrt(s) + 10, 1e-10, 24);
        CHECK(std::abs(r.value - std::exp(s)) < 1e-4);
    }
}
