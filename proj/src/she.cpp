#include "pinlab/she.hpp"

#include "pinlab/quad.hpp"
#include "pinlab/rng.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pinlab::she {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060651209;

double bump_raw(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}
} // namespace

Mollifier::Mollifier() {
    auto mass = quad::integrate_doubling(bump_raw, -1.0, 1.0, 1e-13, 24);
    norm_ = 1.0 / mass.value;
    sup_ = norm_ * bump_raw(0.0);
    // self-convolution, even; interpolate on [0, 2]
    rho2_ = cheb::Interpolant(
        [this](double a) {
            double lo = std::max(-1.0, a - 1.0), hi = std::min(1.0, a + 1.0);
            if (lo >= hi) return 0.0;
            auto r = quad::integrate_doubling(
                [this, a](double y) { return rho(y) * rho(a - y); }, lo, hi, 1e-13, 24);
            return r.value;
        },
        0.0, 2.0, 140);
    auto check = quad::integrate_doubling([this](double x) { return rho(x); }, -1.0, 1.0,
                                          1e-13, 24);
    mass_error_ = std::abs(check.value - 1.0);
}

double Mollifier::rho(double x) const { return norm_ * bump_raw(x / radius_) / radius_; }

double Mollifier::rho2(double x) const {
    double ax = std::abs(x);
    if (ax >= 2 * radius_) return 0.0;
    return rho2_(ax);
}

double r_of_t(const Mollifier& rho, double t, double tol) {
    if (t <= 0) throw std::invalid_argument("r_of_t: t > 0 required");
    const double R2 = 2 * rho.radius();
    // h(t) = 2 int_0^{2R} g_t(a) rho2(a) da (both factors even)
    double h;
    if (t >= R2 * R2) {
        auto r = quad::integrate_doubling(
            [&](double a) { return cont::heat_kernel(t, a) * rho.rho2(a); }, 0.0, R2, tol, 16);
        h = 2 * r.value;
    } else {
        auto edges = quad::geometric_edges(0.0, R2, std::sqrt(t) / 8, 1.4);
        h = 2 * quad::integrate_edges(
                    [&](double a) { return cont::heat_kernel(t, a) * rho.rho2(a); }, edges, 16);
    }
    return h * h;
}

double R_delta(const Mollifier& rho, double delta2) {
    const double T = 1.0 / delta2;
    auto edges = quad::geometric_edges(0.0, T, 1e-3, 1.2);
    return quad::integrate_edges([&](double t) { return t == 0 ? r_of_t(rho, 1e-12) : r_of_t(rho, t); },
                                 edges, 12);
}

double log_kernel_pairing(const Mollifier& rho) {
    // I2 = - int int F(a,b) log(a^2+b^2) da db, F = rho2 x rho2, in polar
    // coordinates: -2 int_0^{Rmax} r log r [int_0^{2pi} F d phi] dr.
    const double Rmax = 2 * std::sqrt(2.0) * rho.radius() * 2; // beyond support
    auto angular = [&](double r) {
        auto g = quad::integrate_doubling(
            [&](double phi) {
                return rho.rho2(r * std::cos(phi)) * rho.rho2(r * std::sin(phi));
            },
            0.0, M_PI / 4, 1e-10, 16);
        return 8.0 * g.value;
    };
    cheb::Interpolant ang(angular, 0.0, Rmax, 120);
    auto edges = quad::geometric_edges(0.0, Rmax, 1e-6, 1.5);
    double I = quad::integrate_edges(
        [&](double r) { return r <= 0 ? 0.0 : -2.0 * r * std::log(r) * ang(r); }, edges, 16);
    return I;
}

double vartheta_from_theta(double theta, const Mollifier& rho) {
    return std::log(2.0) - kEulerGamma + log_kernel_pairing(rho) + theta / (2 * M_PI);
}

ContinuumWindow make_continuum_window(double delta2, double theta, const Mollifier& rho) {
    ContinuumWindow w;
    w.delta2 = delta2;
    w.theta = theta;
    const double L = std::log(1.0 / delta2);
    w.beta2 = 2 * M_PI / L + theta / (L * L);
    w.vartheta = vartheta_from_theta(theta, rho);
    w.R = R_delta(rho, delta2);
    w.residual = w.beta2 * w.R - 1.0 - w.vartheta / L;
    return w;
}

namespace {

// J(tau) = int int f(w) rho(z) g_tau(delta z - w) dz dw, smooth in sqrt(tau).
cheb::Interpolant build_J(const cont::TestFn& f, const Mollifier& rho, double delta) {
    const auto& gl = quad::gauss_legendre(16);
    return cheb::Interpolant(
        [&](double wv) {
            const double tau = wv * wv;
            double acc = 0;
            for (int i = 0; i < 16; ++i) {
                const double z = gl.x[i] * rho.radius();
                const double w = gl.w[i] * rho.radius();
                acc += w * rho.rho(z) * cont::pair_phi(f, delta * z, tau, 1e-10);
            }
            return acc;
        },
        0.0, 1.0, 64);
}

} // namespace

SheSecondMoment she_second_moment_semianalytic(double delta2, double theta,
                                               const cont::TestFn& f, const Mollifier& rho,
                                               int grid) {
    SheSecondMoment out;
    const double L = std::log(1.0 / delta2);
    const double beta2 = 2 * M_PI / L + theta / (L * L);
    const double T = 1.0 / delta2;
    const double delta = std::sqrt(delta2);

    auto fint = quad::integrate_doubling([&](double x) { return f(x); }, f.lo, f.hi, 1e-11, 16);
    out.mean_sq = fint.value * fint.value;

    // Volterra renewal sum: Kv(t) = 1 + beta^2 int_0^t r(u) Kv(t-u) du on a
    // uniform grid (trapezoid, implicit in the diagonal term).
    const int G = grid;
    const double h = T / G;
    std::vector<double> r(static_cast<std::size_t>(G) + 1), Kv(static_cast<std::size_t>(G) + 1);
    for (int i = 0; i <= G; ++i) {
        const double t = i == 0 ? h * 1e-6 : i * h;
        r[static_cast<std::size_t>(i)] = r_of_t(rho, t, 1e-10);
    }
    Kv[0] = 1.0;
    const double diag = 0.5 * beta2 * h * r[0];
    for (int j = 1; j <= G; ++j) {
        double conv = 0.5 * r[static_cast<std::size_t>(j)] * Kv[0];
        for (int i = 1; i < j; ++i)
            conv += r[static_cast<std::size_t>(i)] * Kv[static_cast<std::size_t>(j - i)];
        Kv[static_cast<std::size_t>(j)] = (1.0 + beta2 * h * conv) / (1.0 - diag);
    }

    // S = beta^2 int_0^1 J(tau)^2 Kv(T (1 - tau)) dtau  (tau = delta^2 t_1)
    cheb::Interpolant J = build_J(f, rho, delta);
    double S = 0, S1 = 0;
    for (int j = 0; j <= G; ++j) {
        const double tau = static_cast<double>(j) / G;
        const double Jv = J(std::sqrt(tau));
        const double w = (j == 0 || j == G) ? 0.5 : 1.0;
        S += w * Jv * Jv * Kv[static_cast<std::size_t>(G - j)];
        S1 += w * Jv * Jv;
    }
    S *= beta2 / G;
    S1 *= beta2 / G;
    out.value = out.mean_sq + S;
    out.k1_term = S1;

    // Continuum limit: (int f)^2 + 2 pi int_0^1 G_theta(u) Phi(u) du with
    // Phi(u) = int_0^{1-u} (g_t(f,0))^2 dt.
    const double vth = vartheta_from_theta(theta, rho);
    dickman::GTheta g(vth, 1.0);
    cheb::Interpolant gf([&](double wv) { return cont::pair_phi(f, 0.0, wv * wv, 1e-10); },
                         0.0, 1.0, 64);
    auto Phi = [&](double u) {
        if (u >= 1) return 0.0;
        return quad::integrate_panels(
            [&](double t) {
                double v = gf(std::sqrt(t));
                return v * v;
            },
            0.0, 1.0 - u, 16, 6);
    };
    auto edges = quad::geometric_edges(0.0, 1.0, 1e-5, 1.35);
    double lim = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        const double mass = g.integral(a, b, 0);
        if (mass == 0) continue;
        const double m1 = g.integral(a, b, 1);
        const double mid = m1 / mass;
        lim += Phi(mid) * mass;
    }
    out.limit_value = out.mean_sq + 2 * M_PI * lim;
    return out;
}

SheMcResult she_mc(double delta2, double theta, const cont::TestFn& f, const Mollifier& rho,
                   double dt, double dx, std::int64_t n_noise, std::uint64_t seed,
                   int workers) {
    if (!f.bounded()) throw std::invalid_argument("she_mc: compact f required");
    const double L = std::log(1.0 / delta2);
    const double beta2 = 2 * M_PI / L + theta / (L * L);
    const double beta = std::sqrt(std::max(0.0, beta2));
    const double T = 1.0 / delta2;
    const std::int64_t n_steps = static_cast<std::int64_t>(std::llround(T / dt));
    if (n_steps < 8) throw std::invalid_argument("she_mc: dt too large");
    if (beta2 * rho.sup() * rho.sup() * dt > 0.1)
        throw std::invalid_argument("she_mc: beta^2 rho^2 dt too large, refine dt");
    const double delta = std::sqrt(delta2);
    const double sdt = std::sqrt(dt);

    // micro-coordinate grid covering supp f / delta plus the diffusive spread
    const double ext = std::max(std::abs(f.lo), std::abs(f.hi)) / delta;
    const std::int64_t half = static_cast<std::int64_t>((ext + 6.5 * std::sqrt(T)) / dx) + 2;
    const std::int64_t G = 2 * half + 1;

    SheMcResult out;
    out.dt = dt;
    out.dx = dx;
    out.n_steps = n_steps;
    out.n_grid = G;
    out.per_noise.resize(static_cast<std::size_t>(n_noise));

    // Crank-Nicolson for dh/dt = h''/2 with far Dirichlet ends:
    // (I - r A) h+ = (I + r A) h, A = tridiag(1, -2, 1), r = dt/(4 dx^2).
    const double r = dt / (4 * dx * dx);
    const double d0 = 1 + 2 * r;
    std::vector<double> cp(static_cast<std::size_t>(G), 0.0); // Thomas factors
    cp[0] = -r / d0;
    for (std::int64_t i = 1; i < G; ++i)
        cp[static_cast<std::size_t>(i)] = -r / (d0 + r * cp[static_cast<std::size_t>(i - 1)]);

    // rho on the grid: nonzero only on the mollifier support
    std::vector<double> rg(static_cast<std::size_t>(G), 0.0);
    std::vector<std::int64_t> ridx;
    for (std::int64_t i = 0; i < G; ++i) {
        const double y = static_cast<double>(i - half) * dx;
        const double v = rho.rho(y);
        if (v > 0) {
            rg[static_cast<std::size_t>(i)] = v;
            ridx.push_back(i);
        }
    }

    auto t0 = std::chrono::steady_clock::now();
    mc::parallel_for(n_noise, workers, [&](std::int64_t j) {
        rng::CounterStream wstream(seed, static_cast<std::uint64_t>(j));
        std::vector<double> h(static_cast<std::size_t>(G)), rhs(static_cast<std::size_t>(G));
        for (std::int64_t i = 0; i < G; ++i)
            h[static_cast<std::size_t>(i)] = f(delta * static_cast<double>(i - half) * dx);
        for (std::int64_t s = 0; s < n_steps; ++s) {
            const double dW =
                sdt * rng::inv_normal_cdf(
                          (static_cast<double>(wstream.at(static_cast<std::uint64_t>(s)) >> 11) +
                           0.5) *
                          0x1.0p-53);
            // noise factor (exact pointwise solution of dh = beta rho h dW)
            for (std::int64_t i : ridx) {
                const double rv = rg[static_cast<std::size_t>(i)];
                h[static_cast<std::size_t>(i)] *=
                    std::exp(beta * rv * dW - 0.5 * beta2 * rv * rv * dt);
            }
            // CN diffusion: assemble (I + r A) h, then Thomas solve
            double left = 0;
            for (std::int64_t i = 0; i < G; ++i) {
                const double hc = h[static_cast<std::size_t>(i)];
                const double right = (i + 1 < G) ? h[static_cast<std::size_t>(i + 1)] : 0.0;
                rhs[static_cast<std::size_t>(i)] = r * left + (1 - 2 * r) * hc + r * right;
                left = hc;
            }
            rhs[0] /= d0;
            for (std::int64_t i = 1; i < G; ++i)
                rhs[static_cast<std::size_t>(i)] =
                    (rhs[static_cast<std::size_t>(i)] + r * rhs[static_cast<std::size_t>(i - 1)]) /
                    (d0 + r * cp[static_cast<std::size_t>(i - 1)]);
            h[static_cast<std::size_t>(G - 1)] = rhs[static_cast<std::size_t>(G - 1)];
            for (std::int64_t i = G - 2; i >= 0; --i)
                h[static_cast<std::size_t>(i)] =
                    rhs[static_cast<std::size_t>(i)] -
                    cp[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i + 1)];
        }
        double total = 0;
        for (double v : h) total += v;
        const double val = delta * dx * total;
        if (!std::isfinite(val)) throw std::runtime_error("she_mc: field overflow");
        out.per_noise[static_cast<std::size_t>(j)] = val;
    });
    auto t1 = std::chrono::steady_clock::now();
    out.estimate = mc::summarize(out.per_noise, seed,
                                 std::chrono::duration<double>(t1 - t0).count());
    return out;
}

} // namespace pinlab::she
