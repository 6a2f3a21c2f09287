#include "pinlab/dickman.hpp"

#include "pinlab/fftconv.hpp"
#include "pinlab/mc.hpp"
#include "pinlab/quad.hpp"
#include "pinlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pinlab::dickman {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060651209;
}

// On (0,1]: f_s(t) = C s t^{s-1} with C = e^{-gamma s}/Gamma(s+1), and
//   int_0^x f_s(a) (1+a)^{-s} da = C int_0^{x^s} (1+w^{1/s})^{-s} dw =: I0(x^s),
// which is smooth in y = x^s. Pieces on [k+1, k+2] carry a left-edge
// singular term (t-k-1)^{k+s}; interpolation runs in the variable
// xi = (t-k-1)^{1/p} with p chosen so p (k+s) >= 8, which turns that term
// into an xi-power of order >= 8 (spectrally resolvable).
namespace {

// int_0^x C s a^{s-1} (1+a)^{-s} da, exact: binomial series in a for the
// singular left part, plain quadrature for the smooth remainder.
double weighted_01(double s, double C, double x) {
    if (x <= 0) return 0.0;
    const double split = std::min(x, 0.55);
    double series = 0, b = 1.0; // b = binom(-s, k) (-1)^k-free signed value
    for (int k = 0; k < 120; ++k) {
        const double term = b * std::pow(split, s + k) / (s + k);
        series += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(series)) && k > 4) break;
        b *= -(s + k) / (k + 1);
    }
    double out = C * s * series;
    if (x > split) {
        auto r = quad::integrate_doubling(
            [&](double a) { return C * s * std::pow(a, s - 1) * std::pow(1.0 + a, -s); },
            split, x, 1e-14, 20);
        out += r.value;
    }
    return out;
}

} // namespace

DickmanDensity::DickmanDensity(double s, double t_max) : s_(s) {
    if (s <= 0) throw std::invalid_argument("dickman: s > 0 required");
    coef_ = std::exp(-kEulerGamma * s - std::lgamma(s + 1));
    t_max_ = 1.0;
    weighted_prefix_.push_back(weighted_01(s_, coef_, 1.0));
    extend(t_max);
}

double DickmanDensity::closed_form(double t) const {
    return s_ * std::pow(t, s_ - 1) * coef_;
}

double DickmanDensity::weighted_integral_to(double x) const {
    if (x <= 0) return 0.0;
    if (x <= 1.0) return weighted_01(s_, coef_, x);
    std::size_t k = static_cast<std::size_t>(std::floor(x - 1.0));
    if (k > weighted_.size()) throw std::runtime_error("dickman: continuation too short");
    if (k == weighted_.size()) k = weighted_.size() - 1; // x at the built boundary
    const double lo = 1.0 + static_cast<double>(k);
    const double xi = std::pow(std::max(0.0, x - lo), 1.0 / powers_[k]);
    return weighted_prefix_[k] + weighted_[k].integral_to(xi);
}

void DickmanDensity::build_piece() {
    const std::size_t k = pieces_.size();
    const double lo = 1.0 + static_cast<double>(k);
    const int p = std::max(1, static_cast<int>(std::ceil(8.0 / (static_cast<double>(k) + s_))));
    powers_.push_back(p);
    auto f_of_xi = [&](double xi) {
        const double t = lo + std::pow(xi, p);
        return s_ * std::pow(t, s_ - 1) * (coef_ - weighted_integral_to(t - 1.0));
    };
    pieces_.emplace_back(f_of_xi, 0.0, 1.0, 72);
    const auto& piece = pieces_.back();
    weighted_.emplace_back(
        [&](double xi) {
            const double t = lo + std::pow(xi, p);
            return piece(xi) * std::pow(1.0 + t, -s_) * p * std::pow(xi, p - 1);
        },
        0.0, 1.0, 72);
    dens_.emplace_back(
        [&](double xi) { return piece(xi) * p * std::pow(xi, p - 1); }, 0.0, 1.0, 72);
    weighted_prefix_.push_back(weighted_prefix_.back() + weighted_.back().integral());
}

void DickmanDensity::extend(double new_t_max) {
    while (t_max_ < new_t_max - 1e-12) {
        build_piece();
        t_max_ += 1.0;
    }
}

double DickmanDensity::value(double t) const {
    if (t <= 0) throw std::domain_error("dickman: t > 0 required");
    if (t <= 1.0) return closed_form(t);
    if (t > t_max_ + 1e-12) throw std::domain_error("dickman: continuation not built to t");
    std::size_t k = static_cast<std::size_t>(std::floor(t - 1.0));
    if (k >= pieces_.size()) k = pieces_.size() - 1;
    const double lo = 1.0 + static_cast<double>(k);
    const double xi = std::pow(std::max(0.0, t - lo), 1.0 / powers_[k]);
    return pieces_[k](xi);
}

double DickmanDensity::limit_from_above(int k) const {
    if (k < 1 || static_cast<std::size_t>(k) > pieces_.size())
        throw std::domain_error("dickman: limit_from_above outside continuation");
    return pieces_[static_cast<std::size_t>(k - 1)](0.0);
}

double DickmanDensity::cdf(double t) const {
    if (t <= 0) return 0.0;
    if (t <= 1.0) return coef_ * std::pow(t, s_);
    if (t > t_max_ + 1e-12) throw std::domain_error("dickman: continuation not built to t");
    double acc = coef_;
    std::size_t k = static_cast<std::size_t>(std::floor(t - 1.0));
    if (k >= pieces_.size()) k = pieces_.size() - 1;
    for (std::size_t j = 0; j < k; ++j) acc += dens_[j].integral();
    const double lo = 1.0 + static_cast<double>(k);
    const double xi = std::pow(std::max(0.0, t - lo), 1.0 / powers_[k]);
    acc += dens_[k].integral_to(xi);
    return std::min(acc, 1.0);
}

double DickmanDensity::tail_bound(double s, double t) {
    // P(Y_s > t) <= exp( s I(th) - th t ),  I(th) = int_0^1 (e^{th x}-1)/x dx.
    auto exponent = [&](double th) {
        double I = 0, term = th;
        for (int k = 1; k < 200; ++k) { // sum th^k / (k k!)
            I += term / k;
            term *= th / (k + 1);
            if (term / (k + 1) < 1e-18 * std::max(1.0, I)) break;
        }
        return s * I - th * t;
    };
    double lo = 0, hi = 80;
    const double gr = 0.6180339887498949;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = exponent(a), fb = exponent(b);
    for (int it = 0; it < 80; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - gr * (hi - lo);
            fa = exponent(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + gr * (hi - lo);
            fb = exponent(b);
        }
    }
    return std::exp(std::min(exponent((lo + hi) / 2), 0.0));
}

double dickman_density(double s, double t, double t_max) {
    DickmanDensity d(s, std::max(t_max, t));
    return d.value(t);
}

GTheta::GTheta(double theta, double t_max) : theta_(theta), t_max_(t_max) {
    s_max_ = 50 + 5 * std::abs(theta);
    auto edges = quad::geometric_edges(0.0, s_max_, 1e-4, 1.5);
    const auto& gl = quad::gauss_legendre(16);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        double mid = (edges[p] + edges[p + 1]) / 2, half = (edges[p + 1] - edges[p]) / 2;
        for (int i = 0; i < 16; ++i) {
            s_nodes_.push_back(mid + half * gl.x[i]);
            s_weights_.push_back(half * gl.w[i]);
        }
    }
}

double GTheta::value(double t) const {
    if (t <= 0) throw std::domain_error("g_theta: t > 0 required");
    if (t <= 1.0) {
        const double lt = std::log(t);
        double acc = 0;
        for (std::size_t i = 0; i < s_nodes_.size(); ++i) {
            const double s = s_nodes_[i];
            acc += s_weights_[i] *
                   std::exp(std::log(s) + (theta_ - kEulerGamma) * s + (s - 1) * lt -
                            std::lgamma(s + 1));
        }
        return acc;
    }
    if (t > t_max_ + 1e-12) throw std::domain_error("g_theta: t beyond t_max");
    ensure_continuations();
    double acc = 0;
    for (std::size_t i = 0; i < s_nodes_.size(); ++i)
        acc += s_weights_[i] * std::exp(theta_ * s_nodes_[i]) * conts_[i]->value(t);
    return acc;
}

void GTheta::ensure_continuations() const {
    if (!conts_.empty()) return;
    conts_.resize(s_nodes_.size());
    for (std::size_t i = 0; i < s_nodes_.size(); ++i)
        conts_[i] = std::make_unique<DickmanDensity>(s_nodes_[i], t_max_);
}

double GTheta::integral(double a, double b, int moment) const {
    if (!(0 <= a && a <= b && b <= 1.0 + 1e-12))
        throw std::invalid_argument("g_theta integral: need 0 <= a <= b <= 1");
    double acc = 0;
    for (std::size_t i = 0; i < s_nodes_.size(); ++i) {
        const double s = s_nodes_[i];
        const double base = std::exp((theta_ - kEulerGamma) * s - std::lgamma(s + 1));
        double term;
        if (moment == 0)
            term = std::pow(b, s) - std::pow(a, s);
        else if (moment == 1)
            term = s / (s + 1) * (std::pow(b, s + 1) - std::pow(a, s + 1));
        else
            term = s / (s + 2) * (std::pow(b, s + 2) - std::pow(a, s + 2));
        acc += s_weights_[i] * base * term;
    }
    return acc;
}

double renewal_identity_rel_error(const GTheta& g, double t, double tbar) {
    // G(t) = int_{0<u<tbar} int_{0<w<=t-tbar} G(u) G(w) / (t-u-w) du dw
    // (w = t - v). Cells graded toward both the G singularities at 0 and the
    // corner u -> tbar, w -> t-tbar where the denominator vanishes; per
    // cell pair the denominator is expanded to second order around the
    // G-weighted centroid.
    auto mirrored = [](double len) {
        auto left = quad::geometric_edges(0.0, len / 2, 1e-7, 1.15);
        auto right = quad::geometric_edges(0.0, len / 2, 1e-7, 1.15);
        std::vector<double> e(left);
        for (auto it = right.rbegin(); it != right.rend(); ++it) e.push_back(len - *it);
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    };
    struct Cell {
        double mass, mean, var;
    };
    auto cells_of = [&](double len) {
        auto e = mirrored(len);
        std::vector<Cell> cs;
        for (std::size_t i = 0; i + 1 < e.size(); ++i) {
            const double m0 = g.integral(e[i], e[i + 1], 0);
            if (m0 <= 0) continue;
            const double m1 = g.integral(e[i], e[i + 1], 1);
            const double m2 = g.integral(e[i], e[i + 1], 2);
            const double mean = m1 / m0;
            cs.push_back({m0, mean, std::max(0.0, m2 / m0 - mean * mean)});
        }
        return cs;
    };
    auto cu = cells_of(tbar);
    auto cw = cells_of(t - tbar);
    double acc = 0;
    for (const auto& a : cu)
        for (const auto& b : cw) {
            const double D = t - a.mean - b.mean;
            acc += a.mass * b.mass / D * (1.0 + (a.var + b.var) / (D * D));
        }
    const double lhs = g.value(t);
    return std::abs(lhs - acc) / lhs;
}

UbarTable build_ubar(std::int64_t N, double sigma2, const walks::KernelTable& kt,
                     bool use_fft) {
    if (kt.n_max < N) throw std::invalid_argument("build_ubar: kernel table too short");
    UbarTable t;
    t.N = N;
    t.sigma2 = sigma2;
    t.vals.assign(static_cast<std::size_t>(N) + 1, 0.0);
    t.vals[0] = sigma2;
    if (N == 0) return t;
    // W(n) = sigma2 (u(n) + sum_{j<n} W(j) u(n-j)) as a prefix recursion over
    // n = 1..N (index i = n-1).
    const std::size_t L = static_cast<std::size_t>(N);
    std::vector<double> zs(L, sigma2), c(L), W(L);
    for (std::size_t i = 0; i < L; ++i) c[i] = kt.u[i + 1];
    fftconv::prefix_solve(zs, c, kt.u, W, use_fft);
    for (std::size_t i = 0; i < L; ++i) t.vals[i + 1] = sigma2 * W[i];
    return t;
}

DickmanRenewalResult sample_dickman_renewal(std::int64_t N, double s, std::int64_t count,
                                            std::uint64_t seed,
                                            const walks::KernelTable& kt, int workers) {
    if (kt.n_max < N) throw std::invalid_argument("dickman renewal: kernel table too short");
    const std::int64_t k_steps =
        static_cast<std::int64_t>(std::floor(s * std::log(static_cast<double>(N))));
    if (k_steps < 1) throw std::invalid_argument("dickman renewal: s log N < 1");
    std::vector<double> cdf(static_cast<std::size_t>(N) + 1, 0.0);
    for (std::int64_t n = 1; n <= N; ++n)
        cdf[static_cast<std::size_t>(n)] =
            cdf[static_cast<std::size_t>(n - 1)] + kt.u[static_cast<std::size_t>(n)];
    const double RN = cdf.back();
    double exact_mean = 0;
    for (std::int64_t n = 1; n <= N; ++n)
        exact_mean += static_cast<double>(n) * kt.u[static_cast<std::size_t>(n)] / RN;

    DickmanRenewalResult out;
    out.exact_mean_increment = exact_mean;
    out.samples = mc::ensemble(count, workers, [&](std::int64_t i) {
        rng::CounterStream cs(seed, static_cast<std::uint64_t>(i));
        double total = 0;
        for (std::int64_t j = 0; j < k_steps; ++j) {
            const double u = cs.next_unit() * RN;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::int64_t n = std::max<std::int64_t>(1, it - cdf.begin());
            if (n > N) n = N;
            total += static_cast<double>(n);
        }
        return total / static_cast<double>(N);
    });
    double mi = 0;
    for (double v : out.samples) mi += v;
    out.mean_increment = mi / static_cast<double>(out.samples.size()) *
                         static_cast<double>(N) / static_cast<double>(k_steps);

    double max_sample = *std::max_element(out.samples.begin(), out.samples.end());
    DickmanDensity dd(s, std::max(4.0, std::ceil(max_sample) + 1));
    out.ks = mc::ks_to_cdf(out.samples, [&](double x) { return dd.cdf(x); });
    return out;
}

} // namespace pinlab::dickman
