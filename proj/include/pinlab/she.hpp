#pragma once

#include "pinlab/cheb.hpp"
#include "pinlab/continuum.hpp"
#include "pinlab/dickman.hpp"
#include "pinlab/mc.hpp"

#include <cstdint>
#include <vector>

namespace pinlab::she {

// Smooth even compactly supported probability density, plus its
// self-convolution (cached as a Chebyshev interpolant on [0, 2 radius]).
class Mollifier {
public:
    // Default: c exp(-1/(1-x^2)) on (-1,1), normalized.
    Mollifier();

    double radius() const { return radius_; }
    double rho(double x) const;
    double rho2(double x) const; // (rho * rho)(x)
    double sup() const { return sup_; }
    double mass_error() const { return mass_error_; }

private:
    double radius_ = 1.0;
    double norm_ = 1.0;
    double sup_ = 0.0;
    double mass_error_ = 0.0;
    cheb::Interpolant rho2_;
};

// r(t) = h(t)^2 with h(t) = int g_t(a) (rho*rho)(a) da.
double r_of_t(const Mollifier& rho, double t, double tol = 1e-11);

// R_delta = int_0^{1/delta^2} r(t) dt.
double R_delta(const Mollifier& rho, double delta2);

// vartheta(theta, rho) = log 2 - gamma + I2(rho) + theta / (2 pi), with
// I2 = -int int (rho*rho)(a)(rho*rho)(b) log(a^2+b^2) da db (polar quadrature).
double vartheta_from_theta(double theta, const Mollifier& rho);
double log_kernel_pairing(const Mollifier& rho); // I2 alone

struct ContinuumWindow {
    double delta2 = 0;
    double theta = 0;
    double beta2 = 0;    // 2 pi / log(1/delta^2) + theta / log^2
    double vartheta = 0;
    double R = 0;        // R_delta by quadrature
    double residual = 0; // beta^2 R - 1 - vartheta/log(1/delta^2)
};

ContinuumWindow make_continuum_window(double delta2, double theta, const Mollifier& rho);

// Semianalytic second moment of u^delta[f]: renewal (Volterra) resummation of
// the r-kernel on a uniform grid of `grid` points.
struct SheSecondMoment {
    double value = 0;        // E[(u^delta[f])^2], semianalytic
    double mean_sq = 0;      // (int f)^2
    double k1_term = 0;      // beta^2 int J^2 dtau (single-contact term)
    double limit_value = 0;  // (int f)^2 + 2 pi  int (g_t(f,0))^2 int_0^{1-t} G dt
};

SheSecondMoment she_second_moment_semianalytic(double delta2, double theta,
                                               const cont::TestFn& f, const Mollifier& rho,
                                               int grid = 8192);

// Monte Carlo over noise realizations for u^delta[f]. Per noise, the inner
// expectation over the Brownian path is computed exactly (up to grid error)
// by integrating the mollified SPDE in micro coordinates with Crank-Nicolson
// diffusion and exact pointwise noise factors e^{beta rho dW - beta^2 rho^2
// dt / 2} (left-point Ito convention); u^delta[f] = delta int h(T, y) dy for
// the field started from h(0, y) = f(delta y).
struct SheMcResult {
    mc::MCEstimate estimate; // over noise realizations
    std::vector<double> per_noise;
    double dt = 0;
    double dx = 0;
    std::int64_t n_steps = 0;
    std::int64_t n_grid = 0;
};

SheMcResult she_mc(double delta2, double theta, const cont::TestFn& f, const Mollifier& rho,
                   double dt, double dx, std::int64_t n_noise, std::uint64_t seed,
                   int workers);

} // namespace pinlab::she
