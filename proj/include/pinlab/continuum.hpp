#pragma once

#include <functional>
#include <string>
#include <vector>

namespace pinlab::cont {

// Heat kernel g_t(x) with the convention g_0(0) = 1.
double heat_kernel(double t, double x);

// Density in s of the first visit to 0 of a Brownian motion started at x.
double bm_first_hit(double x, double s);

// Density at (1, y) of a Brownian motion from (0, x) that avoids 0 on (0,1).
double bm_no_hit(double x, double y);

// Test function with declared support and sup norm. `lo > hi` encodes
// unbounded support.
struct TestFn {
    std::function<double(double)> f;
    double lo = 0, hi = 0;
    double sup_norm = 1;
    std::string name;

    bool bounded() const { return lo <= hi; }
    double operator()(double x) const { return f(x); }
};

// Named catalog used by configs: gaussian_bump, tent, indicator_smooth.
TestFn test_fn(const std::string& name);
TestFn gaussian_bump(double sigma = 0.5, double center = 0.0);
TestFn tent(double half_width = 1.0);
TestFn indicator_smooth(double edge = 0.25);

// Pairings against the heat kernel; quadrature error <= tol.
double pair_phi(const TestFn& phi, double a, double t, double tol = 1e-9);
double pair_psi(double b, const TestFn& psi, double t, double tol = 1e-9);
double pair_phi_psi(const TestFn& phi, const TestFn& psi, double t, double tol = 1e-9);

// Deterministic term correction sE(phi, psi): double time integral of the
// first-hit densities from both ends, reduced to 1D Gaussian moments.
double sE(const TestFn& phi, const TestFn& psi, double tol = 1e-7);

// Least-squares fit f(s) ~ sum_k c_k s^k on [0,1] (Chebyshev grid), and the
// matching hitting-kernel preimage phi(x) = sum_k c_k |x|^{2k+1}/(2k+1)!!.
struct BasisProjection {
    std::vector<double> coeffs;
    double sup_error = 0;     // max |f - fit| on a dense grid
    double cond_estimate = 0; // R diagonal ratio from the QR factorization
    std::function<double(double)> phi;
    std::function<double(double)> fitted; // s -> sum c_k s^k
};

BasisProjection project_onto_hitting_basis(const std::function<double(double)>& f, int K);

double double_factorial_odd(int k); // (2k+1)!!

} // namespace pinlab::cont
