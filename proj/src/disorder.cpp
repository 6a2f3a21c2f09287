#include "pinlab/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pinlab::disorder {

DisorderLaw DisorderLaw::gaussian() {
    DisorderLaw l;
    l.kind_ = Kind::gaussian;
    l.name_ = "gaussian";
    return l;
}

DisorderLaw DisorderLaw::rademacher() {
    DisorderLaw l;
    l.kind_ = Kind::rademacher;
    l.name_ = "rademacher";
    return l;
}

DisorderLaw DisorderLaw::uniform_sqrt3() {
    DisorderLaw l;
    l.kind_ = Kind::uniform;
    l.name_ = "uniform";
    return l;
}

DisorderLaw DisorderLaw::custom(const std::vector<double>& xs, const std::vector<double>& ps,
                                double beta0) {
    if (xs.size() != ps.size() || xs.size() < 2)
        throw std::invalid_argument("custom disorder: need matching xs/ps, size >= 2");
    DisorderLaw l;
    l.kind_ = Kind::custom;
    l.name_ = "custom";
    l.beta0_ = beta0;
    l.xs_ = xs;
    l.pdf_ = ps;
    // Normalize (trapezoid-exact for the piecewise-linear interpolant).
    double mass = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        mass += 0.5 * (ps[i] + ps[i + 1]) * (xs[i + 1] - xs[i]);
    for (auto& p : l.pdf_) p /= mass;
    // Standardize to mean 0, variance 1 by an affine change of variable.
    auto moment = [&](int k) {
        double m = 0;
        for (std::size_t i = 0; i + 1 < l.xs_.size(); ++i) {
            // exact moments of a linear density segment via 2-point Gauss
            double a = l.xs_[i], b = l.xs_[i + 1];
            double fa = l.pdf_[i], fb = l.pdf_[i + 1];
            const double g = 0.5773502691896257645;
            for (double t : {-g, g}) {
                double x = (a + b) / 2 + (b - a) / 2 * t;
                double w = (b - a) / 2;
                double f = fa + (fb - fa) * (x - a) / (b - a);
                m += w * f * std::pow(x, k);
            }
        }
        return m;
    };
    double mu = moment(1);
    for (auto& x : l.xs_) x -= mu;
    double var = moment(2);
    double sd = std::sqrt(var);
    for (auto& x : l.xs_) x /= sd;
    for (auto& p : l.pdf_) p *= sd;
    // CDF at the nodes for inverse sampling.
    l.cdf_.assign(l.xs_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < l.xs_.size(); ++i)
        l.cdf_[i + 1] = l.cdf_[i] + 0.5 * (l.pdf_[i] + l.pdf_[i + 1]) * (l.xs_[i + 1] - l.xs_[i]);
    double total = l.cdf_.back();
    for (auto& c : l.cdf_) c /= total;
    return l;
}

double DisorderLaw::custom_log_mgf(double beta) const {
    // Exact integral of e^{beta x} against the piecewise-linear density.
    double s = 0;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        double a = xs_[i], b = xs_[i + 1], fa = pdf_[i], fb = pdf_[i + 1];
        double h = b - a;
        if (std::abs(beta) < 1e-8) {
            // series to keep precision near 0
            const int order = 6;
            for (int q = 0; q <= order; ++q) {
                // int x^q over segment against linear density, times beta^q/q!
                double m = 0;
                const double g = 0.5773502691896257645;
                for (double t : {-g, g}) {
                    double x = (a + b) / 2 + h / 2 * t;
                    double f = fa + (fb - fa) * (x - a) / h;
                    m += h / 2 * f * std::pow(x, q);
                }
                double fac = 1;
                for (int j = 2; j <= q; ++j) fac *= j;
                s += m * std::pow(beta, q) / fac;
            }
        } else {
            // int (fa + (fb-fa)(x-a)/h) e^{beta x} dx in closed form
            double c1 = (fb - fa) / h;
            double ea = std::exp(beta * a), eb = std::exp(beta * b);
            double I0 = (eb - ea) / beta;
            double I1 = (b * eb - a * ea) / beta - I0 / beta; // int x e^{beta x}
            s += (fa - c1 * a) * I0 + c1 * I1;
        }
    }
    return std::log(s);
}

double DisorderLaw::custom_inverse_cdf(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = std::min<std::size_t>(
        cdf_.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                             0, (it - cdf_.begin()) - 1)));
    double c0 = cdf_[i], c1 = cdf_[i + 1];
    double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    return xs_[i] + t * (xs_[i + 1] - xs_[i]);
}

double DisorderLaw::log_mgf(double beta) const {
    if (std::abs(beta) >= beta0_)
        throw std::domain_error("log_mgf: beta outside finiteness interval");
    switch (kind_) {
        case Kind::gaussian:
            return beta * beta / 2;
        case Kind::rademacher: {
            double ab = std::abs(beta);
            return ab + std::log1p(std::exp(-2 * ab)) - std::log(2.0);
        }
        case Kind::uniform: {
            // log( sinh(beta sqrt3) / (beta sqrt3) )
            double z = beta * std::sqrt(3.0);
            if (std::abs(z) < 1e-6) return std::log1p(z * z / 6 + z * z * z * z / 120);
            return std::log(std::sinh(std::abs(z)) / std::abs(z));
        }
        case Kind::custom:
            return custom_log_mgf(beta);
    }
    return 0;
}

double DisorderLaw::sample(double unit) const {
    switch (kind_) {
        case Kind::gaussian:
            return rng::inv_normal_cdf(unit);
        case Kind::rademacher:
            return unit < 0.5 ? -1.0 : 1.0;
        case Kind::uniform:
            return std::sqrt(3.0) * (2 * unit - 1);
        case Kind::custom:
            return custom_inverse_cdf(unit);
    }
    return 0;
}

double DisorderLaw::cumulant(int k) const {
    // Small central-difference ladder on log_mgf.
    const double h = 1e-2;
    auto lm = [&](double b) { return log_mgf(b); };
    switch (k) {
        case 2:
            return (lm(h) - 2 * lm(0) + lm(-h)) / (h * h);
        case 3:
            return (lm(2 * h) - 2 * lm(h) + 2 * lm(-h) - lm(-2 * h)) / (2 * h * h * h);
        case 4:
            return (lm(2 * h) - 4 * lm(h) + 6 * lm(0) - 4 * lm(-h) + lm(-2 * h)) /
                   (h * h * h * h);
        default:
            throw std::invalid_argument("cumulant: k in 2..4");
    }
}

DisorderLaw disorder_by_name(const std::string& name) {
    if (name == "gaussian") return DisorderLaw::gaussian();
    if (name == "rademacher") return DisorderLaw::rademacher();
    if (name == "uniform") return DisorderLaw::uniform_sqrt3();
    throw std::invalid_argument("unknown disorder law: " + name);
}

double log_mgf(const DisorderLaw& law, double beta) { return law.log_mgf(beta); }

CriticalWindow solve_critical_beta(const DisorderLaw& law, std::int64_t N, double vartheta,
                                   double R_N) {
    if (N < 3) throw std::invalid_argument("critical window: N >= 3");
    const double target = (1.0 + vartheta / std::log(static_cast<double>(N))) / R_N;
    if (!(target > 0)) throw std::domain_error("critical window: nonpositive target");
    auto sigma2 = [&](double b) {
        return std::expm1(law.log_mgf(2 * b) - 2 * law.log_mgf(b));
    };
    // Bracket on (0, beta0/2).
    double hi = std::min(1.0, law.beta0() / 4);
    double cap = law.beta0() / 2;
    while (sigma2(hi) < target) {
        hi *= 1.5;
        if (hi >= cap) throw std::domain_error("critical window: target unattainable");
    }
    double lo = 0;
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        if (sigma2(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    double beta = (lo + hi) / 2;
    // Newton polish with numeric derivative.
    for (int it = 0; it < 4; ++it) {
        double f = sigma2(beta) - target;
        double db = std::max(1e-9, 1e-7 * beta);
        double fp = (sigma2(beta + db) - sigma2(beta - db)) / (2 * db);
        if (fp <= 0) break;
        double nb = beta - f / fp;
        if (nb > 0 && nb < cap) beta = nb;
    }
    CriticalWindow w;
    w.N = N;
    w.vartheta = vartheta;
    w.R_N = R_N;
    w.beta = beta;
    w.sigma2 = sigma2(beta);
    w.lambda_N = w.sigma2 * R_N;
    w.residual = std::abs(w.sigma2 - target);
    return w;
}

ChaosField zeta_field(const DisorderLaw& law, double beta, std::int64_t lo, std::int64_t hi,
                      std::uint64_t seed, std::uint64_t stream) {
    if (hi < lo) throw std::invalid_argument("zeta_field: hi < lo");
    ChaosField f;
    f.lo = lo;
    f.beta = beta;
    f.seed = seed;
    f.stream = stream;
    f.law = law.name();
    const double lambda = law.log_mgf(beta);
    rng::CounterStream cs(seed, stream);
    f.zeta.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double u =
            (static_cast<double>(cs.at(static_cast<std::uint64_t>(n - lo)) >> 11) + 0.5) *
            0x1.0p-53;
        const double omega = law.sample(u);
        f.zeta[static_cast<std::size_t>(n - lo)] = std::expm1(beta * omega - lambda);
    }
    return f;
}

} // namespace pinlab::disorder
