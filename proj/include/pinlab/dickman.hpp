#pragma once

#include "pinlab/cheb.hpp"
#include "pinlab/kernel_table.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace pinlab::dickman {

// Density f_s(t) of the Dickman subordinator Y_s. Closed form on (0,1];
// continued interval by interval through the Volterra identity
//   f_s(t) = s t^{s-1} [ e^{-gamma s}/Gamma(s+1) - int_0^{t-1} f_s(a) (1+a)^{-s} da ].
class DickmanDensity {
public:
    explicit DickmanDensity(double s, double t_max = 4.0);

    double s() const { return s_; }
    double t_max() const { return t_max_; }
    void extend(double new_t_max);

    double value(double t) const;
    double cdf(double t) const; // P(Y_s <= t), t <= t_max

    // lim_{t -> k^+} f_s(t) from the continuation piece (k >= 1 integer).
    double limit_from_above(int k) const;

    // Chernoff bound on P(Y_s > t).
    static double tail_bound(double s, double t);

private:
    double s_ = 1;
    double coef_ = 0; // e^{-gamma s} / Gamma(s+1)
    double t_max_ = 1;
    // piece k lives on [k+1, k+2]; interpolants run in xi = (t-k-1)^{1/p_k}
    std::vector<cheb::Interpolant> pieces_;   // f_s(t(xi))
    std::vector<cheb::Interpolant> weighted_; // f (1+t)^{-s} dt/dxi
    std::vector<cheb::Interpolant> dens_;     // f dt/dxi (for the cdf)
    std::vector<int> powers_;
    std::vector<double> weighted_prefix_; // int_0^{k+1} f_s (1+a)^{-s} da
    double closed_form(double t) const;
    double weighted_integral_to(double x) const; // int_0^x f_s(a)(1+a)^{-s} da
    void build_piece();
};

double dickman_density(double s, double t, double t_max = 4.0);

// G_theta(t) = int_0^inf e^{theta s} f_s(t) ds. Closed-form s-integral for
// t <= 1; cached per-s continuations for t in (1, t_max].
class GTheta {
public:
    explicit GTheta(double theta, double t_max = 4.0);

    double theta() const { return theta_; }
    double value(double t) const;

    // Exact-swap integrals over t for 0 <= a < b <= 1:
    //   int_a^b u^moment G(u) du, moment in {0, 1, 2}
    double integral(double a, double b, int moment = 0) const;

private:
    double theta_ = 0;
    double t_max_ = 4.0;
    double s_max_ = 50;
    std::vector<double> s_nodes_, s_weights_;
    mutable std::vector<std::unique_ptr<DickmanDensity>> conts_; // lazy, per node
    void ensure_continuations() const;
};

// Relative gap between G(t) and the renewal double integral
// int int_{0<u<tbar<=v<t} G(u) (v-u)^{-1} G(t-v) du dv, both by quadrature.
double renewal_identity_rel_error(const GTheta& g, double t, double tbar);

// Discrete renewal kernel: Ubar(0) = sigma2, Ubar(n) = sigma2 W(n) with
// W(n) = sigma2 (u(n) + sum_{j<n} u(j) W(n-j)).
struct UbarTable {
    std::int64_t N = 0;
    double sigma2 = 0;
    std::vector<double> vals; // index 0..n_max

    double at(std::int64_t n) const { return vals[static_cast<std::size_t>(n)]; }
};

UbarTable build_ubar(std::int64_t N, double sigma2, const walks::KernelTable& kt,
                     bool use_fft = true);

// Renewal increments with law u(n)/R_N on {1..N}; returns samples of
// iota_{floor(s log N)} / N plus the KS distance to the Y_s CDF.
struct DickmanRenewalResult {
    std::vector<double> samples;
    double ks = 0;
    double mean_increment = 0; // empirical E[iota_1]
    double exact_mean_increment = 0;
};

// `stratified` draws each increment slot from a keyed random permutation of
// the count strata plus jitter (randomized QMC): same law, lower empirical
// discrepancy. Deterministic per (seed, sample index) either way.
DickmanRenewalResult sample_dickman_renewal(std::int64_t N, double s, std::int64_t count,
                                            std::uint64_t seed,
                                            const walks::KernelTable& kt, int workers = 1,
                                            bool stratified = false);

} // namespace pinlab::dickman
