#pragma once

#include "pinlab/rng.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace pinlab::disorder {

// Mean-zero unit-variance disorder law with finite log-MGF on (-beta0, beta0).
class DisorderLaw {
public:
    enum class Kind { gaussian, rademacher, uniform, custom };

    static DisorderLaw gaussian();
    static DisorderLaw rademacher();
    static DisorderLaw uniform_sqrt3(); // uniform on [-sqrt(3), sqrt(3)]
    // Piecewise-linear density from samples (xs increasing); normalized and
    // standardized to mean 0, variance 1 internally.
    static DisorderLaw custom(const std::vector<double>& xs, const std::vector<double>& ps,
                              double beta0);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double beta0() const { return beta0_; }

    double log_mgf(double beta) const;
    // omega sample from one uniform draw (inverse CDF).
    double sample(double unit) const;
    double cumulant(int k) const; // k = 2..4

private:
    Kind kind_ = Kind::gaussian;
    std::string name_ = "gaussian";
    double beta0_ = 1e308;
    // custom law data
    std::vector<double> xs_, pdf_, cdf_;
    double custom_log_mgf(double beta) const;
    double custom_inverse_cdf(double u) const;
};

DisorderLaw disorder_by_name(const std::string& name);

double log_mgf(const DisorderLaw& law, double beta);

struct CriticalWindow {
    std::int64_t N = 0;
    double vartheta = 0;
    double R_N = 0;
    double sigma2 = 0;   // e^{lambda(2b) - 2 lambda(b)} - 1 at the solution
    double beta = 0;
    double lambda_N = 0; // sigma2 * R_N
    double residual = 0; // solver residual on sigma2
};

// Solves sigma_N^2 = (1/R_N)(1 + vartheta / log N) for beta (bisection plus
// Newton polish; residual below 1e-14).
CriticalWindow solve_critical_beta(const DisorderLaw& law, std::int64_t N, double vartheta,
                                   double R_N);

// One disorder realization: zeta[i] = e^{beta omega_{lo+i} - lambda(beta)} - 1
// for i = 0..(hi-lo). Each index maps to a fixed counter of the stream, so
// the field is reproducible from (law, beta, range, seed, stream).
struct ChaosField {
    std::vector<double> zeta;
    std::int64_t lo = 0;
    double beta = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string law;

    double at(std::int64_t n) const { return zeta[static_cast<std::size_t>(n - lo)]; }
};

ChaosField zeta_field(const DisorderLaw& law, double beta, std::int64_t lo, std::int64_t hi,
                      std::uint64_t seed, std::uint64_t stream = 0);

} // namespace pinlab::disorder
