#include "pinlab/disorder.hpp"
#include "pinlab/kernel_table.hpp"
#include "pinlab/quad.hpp"
#include "pinlab/steplaw.hpp"

#include <doctest.h>

#include <cmath>

using namespace pinlab;

TEST_CASE("log-MGF closed forms and zero point") {
    auto g = disorder::DisorderLaw::gaussian();
    CHECK(g.log_mgf(0.3) == doctest::Approx(0.045).epsilon(1e-14));
    auto r = disorder::DisorderLaw::rademacher();
    CHECK(r.log_mgf(0.7) == doctest::Approx(std::log(std::cosh(0.7))).epsilon(1e-14));
    for (auto* law : {&g, &r})
        CHECK(law->log_mgf(0.0) == doctest::Approx(0.0));
}

TEST_CASE("custom tabulated uniform density matches the closed-form oracle") {
    // tabulated flat density on [-sqrt3, sqrt3]; piecewise-linear integration
    // is exact for it, so the only differences are normalization steps
    std::vector<double> xs, ps;
    const double s3 = std::sqrt(3.0);
    for (int i = 0; i <= 64; ++i) {
        xs.push_back(-s3 + 2 * s3 * i / 64);
        ps.push_back(1.0);
    }
    auto custom = disorder::DisorderLaw::custom(xs, ps, 1e6);
    auto uni = disorder::DisorderLaw::uniform_sqrt3();
    for (double b : {0.05, 0.3, 1.1, 2.5})
        CHECK(std::abs(custom.log_mgf(b) - uni.log_mgf(b)) < 1e-10);
}

TEST_CASE("lambda is convex on a grid") {
    for (auto name : {"gaussian", "rademacher", "uniform"}) {
        auto law = disorder::disorder_by_name(name);
        const double h = 0.05;
        for (double b = -1.0; b <= 1.0; b += 0.1) {
            double dd = law.log_mgf(b + h) - 2 * law.log_mgf(b) + law.log_mgf(b - h);
            CHECK(dd >= -1e-10);
        }
    }
}

TEST_CASE("critical window: gaussian closed form and residual") {
    auto walk = walks::default_step_law();
    auto kt = walks::build_return_table(walk, 10000);
    auto law = disorder::DisorderLaw::gaussian();
    auto w = disorder::solve_critical_beta(law, 10000, 0.5, kt.R_at(10000));
    const double target = (1 + 0.5 / std::log(1e4)) / kt.R_at(10000);
    CHECK(std::abs(w.beta - std::sqrt(std::log1p(target))) < 1e-12);
    CHECK(w.residual < 1e-14);
    CHECK(w.lambda_N == doctest::Approx(1 + 0.5 / std::log(1e4)).epsilon(1e-12));
}

TEST_CASE("beta_N^2 R_N trends to 1 through the window") {
    // beta_N^2 = R_N^{-1} + O(R_N^{-2}) for Gaussian disorder; the deviation
    // decays only like 1/R_N ~ 2pi/log N, so this is a trend check.
    auto walk = walks::default_step_law();
    auto law = disorder::DisorderLaw::gaussian();
    double prev = 1e9;
    for (std::int64_t N : {1000, 10000, 100000, 1000000}) {
        auto kt = walks::build_return_table(walk, N);
        auto w = disorder::solve_critical_beta(law, N, 0.0, kt.R_at(N));
        const double dev = std::abs(w.beta * w.beta * w.R_N - 1.0);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 0.25);
}

TEST_CASE("critical beta is increasing in vartheta at fixed N") {
    auto walk = walks::default_step_law();
    auto kt = walks::build_return_table(walk, 5000);
    auto law = disorder::DisorderLaw::rademacher();
    double prev = -1;
    for (double vt : {-1.0, 0.0, 1.0, 2.0}) {
        auto w = disorder::solve_critical_beta(law, 5000, vt, kt.R_at(5000));
        CHECK(w.beta > prev);
        prev = w.beta;
    }
}

TEST_CASE("zeta field: centering, variance, two-point support, reproducibility") {
    auto law = disorder::DisorderLaw::gaussian();
    const double beta = 0.8;
    auto f = disorder::zeta_field(law, beta, 1, 1000000, 99, 0);
    double m = 0;
    for (double z : f.zeta) m += z;
    m /= static_cast<double>(f.zeta.size());
    double v = 0;
    for (double z : f.zeta) v += (z - m) * (z - m);
    v /= static_cast<double>(f.zeta.size() - 1);
    const double sigma2 = std::expm1(law.log_mgf(2 * beta) - 2 * law.log_mgf(beta));
    // stderr of the mean is sqrt(sigma2/n); variance concentrates similarly
    CHECK(std::abs(m) < 3 * std::sqrt(sigma2 / 1e6));
    // relative spread of the sample variance involves the 4th moment; be generous
    CHECK(std::abs(v - sigma2) / sigma2 < 0.05);

    auto r = disorder::zeta_field(disorder::DisorderLaw::rademacher(), 0.5, 1, 2000, 7, 0);
    const double lam = disorder::DisorderLaw::rademacher().log_mgf(0.5);
    for (double z : r.zeta) {
        bool ok = std::abs(z - std::expm1(0.5 - lam)) < 1e-15 ||
                  std::abs(z - std::expm1(-0.5 - lam)) < 1e-15;
        CHECK(ok);
    }

    auto f2 = disorder::zeta_field(law, beta, 1, 1000000, 99, 0);
    CHECK(std::equal(f.zeta.begin(), f.zeta.end(), f2.zeta.begin()));
}
