#include "pinlab/continuum.hpp"

#include "pinlab/cheb.hpp"
#include "pinlab/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace pinlab::cont {

double heat_kernel(double t, double x) {
    if (t < 0) throw std::invalid_argument("heat_kernel: t < 0");
    if (t == 0) return x == 0 ? 1.0 : 0.0;
    return std::exp(-x * x / (2 * t)) / std::sqrt(2 * M_PI * t);
}

double bm_first_hit(double x, double s) {
    if (s <= 0) throw std::invalid_argument("bm_first_hit: s <= 0");
    return std::abs(x) * std::exp(-x * x / (2 * s)) / (std::sqrt(2 * M_PI) * std::pow(s, 1.5));
}

double bm_no_hit(double x, double y) {
    if (x * y <= 0) return 0.0;
    return heat_kernel(1.0, y - x) - heat_kernel(1.0, y + x);
}

TestFn gaussian_bump(double sigma, double center) {
    TestFn t;
    const double r = 8 * sigma; // tail below 1.3e-14 at the cut
    t.lo = center - r;
    t.hi = center + r;
    t.sup_norm = 1.0;
    t.name = "gaussian_bump";
    t.f = [sigma, center, r](double x) {
        if (std::abs(x - center) >= r) return 0.0;
        double z = (x - center) / sigma;
        return std::exp(-z * z / 2);
    };
    return t;
}

TestFn tent(double half_width) {
    TestFn t;
    t.lo = -half_width;
    t.hi = half_width;
    t.sup_norm = 1.0;
    t.name = "tent";
    t.f = [half_width](double x) {
        double v = 1.0 - std::abs(x) / half_width;
        return v > 0 ? v : 0.0;
    };
    return t;
}

TestFn indicator_smooth(double edge) {
    // Quintic smoothstep transition from 1 on [-1+edge/?..] -- transition
    // bands [1-edge, 1+edge] on both sides of the unit interval.
    TestFn t;
    t.lo = -1 - edge;
    t.hi = 1 + edge;
    t.sup_norm = 1.0;
    t.name = "indicator_smooth";
    t.f = [edge](double x) {
        double ax = std::abs(x);
        if (ax <= 1 - edge) return 1.0;
        if (ax >= 1 + edge) return 0.0;
        double u = (ax - (1 - edge)) / (2 * edge); // 0..1 across the band
        double s = 1 - u * u * u * (10 - 15 * u + 6 * u * u);
        return s;
    };
    return t;
}

TestFn test_fn(const std::string& name) {
    if (name == "gaussian_bump") return gaussian_bump();
    if (name == "tent") return tent();
    if (name == "indicator_smooth") return indicator_smooth();
    throw std::invalid_argument("unknown test function: " + name);
}

namespace {

// Integration interval for a test function against a Gaussian of scale
// sqrt(t) centered at c.
std::pair<double, double> overlap_range(const TestFn& fn, double c, double t) {
    const double r = 9.0 * std::sqrt(std::max(t, 1e-300));
    double lo = c - r, hi = c + r;
    if (fn.bounded()) {
        lo = std::max(lo, fn.lo);
        hi = std::min(hi, fn.hi);
    }
    return {lo, hi};
}

} // namespace

double pair_phi(const TestFn& phi, double a, double t, double tol) {
    if (t == 0) return phi(a);
    auto [lo, hi] = overlap_range(phi, a, t);
    if (lo >= hi) return 0.0;
    auto r = quad::integrate_doubling(
        [&](double x) { return phi(x) * heat_kernel(t, a - x); }, lo, hi, tol, 16);
    if (!r.converged) throw std::runtime_error("pair_phi: tolerance not achieved");
    return r.value;
}

double pair_psi(double b, const TestFn& psi, double t, double tol) {
    if (t == 0) return psi(b);
    auto [lo, hi] = overlap_range(psi, b, t);
    if (lo >= hi) return 0.0;
    auto r = quad::integrate_doubling(
        [&](double y) { return heat_kernel(t, y - b) * psi(y); }, lo, hi, tol, 16);
    if (!r.converged) throw std::runtime_error("pair_psi: tolerance not achieved");
    return r.value;
}

double pair_phi_psi(const TestFn& phi, const TestFn& psi, double t, double tol) {
    if (!phi.bounded()) throw std::invalid_argument("pair_phi_psi: phi must be compact");
    auto r = quad::integrate_doubling(
        [&](double x) { return phi(x) * pair_psi(x, psi, t, tol / 10); }, phi.lo, phi.hi,
        tol, 16);
    if (!r.converged) throw std::runtime_error("pair_phi_psi: tolerance not achieved");
    return r.value;
}

namespace {

// A(s) = integral phi(sqrt(s) x) |x| e^{-x^2/2} dx (Gaussian-moment reduced
// inner integral of sE).
double moment_profile(const TestFn& fn, double s, double tol) {
    const double rs = std::sqrt(s);
    double cut = 9.0;
    if (fn.bounded()) {
        double m = std::max(std::abs(fn.lo), std::abs(fn.hi));
        cut = std::min(cut, m / std::max(rs, 1e-300));
    }
    if (cut <= 0) return 0.0;
    auto r = quad::integrate_doubling(
        [&](double x) {
            return (fn(rs * x) + fn(-rs * x)) * x * std::exp(-x * x / 2);
        },
        0.0, cut, tol, 16);
    return r.value;
}

} // namespace

double sE(const TestFn& phi, const TestFn& psi, double tol) {
    if (!phi.bounded() || !psi.bounded())
        throw std::invalid_argument("sE: compactly supported arguments required");
    // sE = (2 pi)^{-3/2} int_{0<s<t<1} A(s) B(1-t) / sqrt(s (t-s) (1-t))
    // with A(s) = int phi(sqrt(s) x)|x|e^{-x^2/2} dx and likewise B. Both are
    // smooth in sqrt(s); cache them as Chebyshev interpolants in w = sqrt(s).
    cheb::Interpolant Aw([&](double w) { return moment_profile(phi, w * w, tol / 100); },
                         0.0, 1.0, 80);
    cheb::Interpolant Bw([&](double w) { return moment_profile(psi, w * w, tol / 100); },
                         0.0, 1.0, 80);
    // Outer s = sigma^2 kills the 1/sqrt(s); inner split at the midpoint with
    // sqrt substitutions at both ends.
    auto inner = [&](double s) {
        const double A = Aw(std::sqrt(s));
        if (A == 0) return 0.0;
        const double mid = (s + 1) / 2;
        // t in (s, mid]: t = s + xi^2, dt = 2 xi dxi, 1/sqrt(t-s) = 1/xi
        auto f1 = [&](double xi) {
            const double t = s + xi * xi;
            return 2.0 * Bw(std::sqrt(1 - t)) / std::sqrt(1 - t);
        };
        // t in (mid, 1): t = 1 - tau^2, 1/sqrt(1-t) = 1/tau
        auto f2 = [&](double tau) {
            const double t = 1 - tau * tau;
            return 2.0 * Bw(tau) / std::sqrt(t - s);
        };
        double i1 = quad::integrate_doubling(f1, 0.0, std::sqrt(mid - s), tol / 10, 12).value;
        double i2 = quad::integrate_doubling(f2, 0.0, std::sqrt(1 - mid), tol / 10, 12).value;
        return A * (i1 + i2);
    };
    auto outer = [&](double sigma) { return 2.0 * inner(sigma * sigma); };
    auto r = quad::integrate_doubling(outer, 0.0, 1.0, tol, 16);
    if (!r.converged) throw std::runtime_error("sE: tolerance not achieved");
    return r.value / std::pow(2 * M_PI, 1.5);
}

double double_factorial_odd(int k) {
    double v = 1;
    for (int j = 1; j <= 2 * k + 1; j += 2) v *= j;
    return v;
}

BasisProjection project_onto_hitting_basis(const std::function<double(double)>& f, int K) {
    if (K < 0) throw std::invalid_argument("projection: K >= 0 required");
    const int n_pts = std::max(40, 8 * (K + 1));
    std::vector<double> s(n_pts);
    for (int i = 0; i < n_pts; ++i)
        s[i] = 0.5 - 0.5 * std::cos(M_PI * (i + 0.5) / n_pts); // Chebyshev points on [0,1]

    // Least squares via Householder-free modified Gram-Schmidt QR.
    const int m = n_pts, nc = K + 1;
    std::vector<std::vector<double>> A(nc, std::vector<double>(m));
    for (int k = 0; k <= K; ++k)
        for (int i = 0; i < m; ++i) A[k][i] = std::pow(s[i], k);
    std::vector<double> rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = f(s[i]);

    std::vector<std::vector<double>> Q = A;
    std::vector<std::vector<double>> R(nc, std::vector<double>(nc, 0.0));
    for (int k = 0; k < nc; ++k) {
        double nrm = 0;
        for (int i = 0; i < m; ++i) nrm += Q[k][i] * Q[k][i];
        nrm = std::sqrt(nrm);
        R[k][k] = nrm;
        if (nrm < 1e-300) throw std::runtime_error("projection: rank deficient fit");
        for (int i = 0; i < m; ++i) Q[k][i] /= nrm;
        for (int j = k + 1; j < nc; ++j) {
            double d = 0;
            for (int i = 0; i < m; ++i) d += Q[k][i] * Q[j][i];
            R[k][j] = d;
            for (int i = 0; i < m; ++i) Q[j][i] -= d * Q[k][i];
        }
    }
    std::vector<double> c(nc, 0.0);
    for (int k = 0; k < nc; ++k) {
        double d = 0;
        for (int i = 0; i < m; ++i) d += Q[k][i] * rhs[i];
        c[k] = d;
    }
    for (int k = nc - 1; k >= 0; --k) {
        double v = c[k];
        for (int j = k + 1; j < nc; ++j) v -= R[k][j] * c[j];
        c[k] = v / R[k][k];
    }

    BasisProjection out;
    out.coeffs = c;
    double rmin = 1e300, rmax = 0;
    for (int k = 0; k < nc; ++k) {
        rmin = std::min(rmin, std::abs(R[k][k]));
        rmax = std::max(rmax, std::abs(R[k][k]));
    }
    out.cond_estimate = rmax / rmin;
    out.fitted = [c](double sv) {
        double acc = 0, pw = 1;
        for (double ck : c) {
            acc += ck * pw;
            pw *= sv;
        }
        return acc;
    };
    out.phi = [c](double x) {
        double acc = 0;
        double ax = std::abs(x);
        double pw = ax; // |x|^{2k+1}
        for (std::size_t k = 0; k < c.size(); ++k) {
            acc += c[k] * pw / double_factorial_odd(static_cast<int>(k));
            pw *= ax * ax;
        }
        return acc;
    };
    double sup = 0;
    for (int i = 0; i <= 400; ++i) {
        double sv = i / 400.0;
        sup = std::max(sup, std::abs(f(sv) - out.fitted(sv)));
    }
    out.sup_error = sup;
    return out;
}

} // namespace pinlab::cont
