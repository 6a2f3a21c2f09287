#include "pinlab/cheb.hpp"

#include <cmath>
#include <stdexcept>

namespace pinlab::cheb {

Interpolant::Interpolant(const std::function<double(double)>& f, double a, double b,
                         int n)
    : a_(a), b_(b) {
    if (n < 2) throw std::invalid_argument("cheb: need n >= 2 points");
    const int m = n - 1;
    std::vector<double> fv(n);
    for (int j = 0; j <= m; ++j) {
        double t = std::cos(M_PI * j / m); // Lobatto node on [-1,1]
        fv[j] = f(a + (b - a) * (t + 1) / 2);
    }
    // Discrete cosine transform (direct O(n^2); n stays small here).
    coef_.assign(n, 0.0);
    for (int k = 0; k <= m; ++k) {
        double s = 0.5 * (fv[0] + (k % 2 ? -1.0 : 1.0) * fv[m]);
        for (int j = 1; j < m; ++j) s += fv[j] * std::cos(M_PI * k * j / m);
        coef_[k] = 2.0 * s / m;
    }
    coef_[0] /= 2;
    coef_[m] /= 2;
    // Antiderivative coefficients in t (scaled by (b-a)/2 at evaluation).
    icoef_.assign(n + 1, 0.0);
    auto c = [&](int k) { return k < n ? coef_[k] : 0.0; };
    for (int k = 2; k <= n; ++k)
        icoef_[k] = (c(k - 1) - c(k + 1)) / (2.0 * k);
    icoef_[1] = c(0) - c(2) / 2;
}

double Interpolant::operator()(double x) const {
    double t = 2 * (x - a_) / (b_ - a_) - 1;
    if (t < -1) t = -1;
    if (t > 1) t = 1;
    double b1 = 0, b2 = 0;
    for (int k = static_cast<int>(coef_.size()) - 1; k >= 1; --k) {
        double tmp = 2 * t * b1 - b2 + coef_[k];
        b2 = b1;
        b1 = tmp;
    }
    return t * b1 - b2 + coef_[0];
}

namespace {
// Evaluate sum of Chebyshev series with coefficients d (d[0] unused halving
// conventions already applied) at t via Clenshaw.
double clenshaw(const std::vector<double>& d, double t) {
    double b1 = 0, b2 = 0;
    for (int k = static_cast<int>(d.size()) - 1; k >= 1; --k) {
        double tmp = 2 * t * b1 - b2 + d[k];
        b2 = b1;
        b1 = tmp;
    }
    return t * b1 - b2 + d[0];
}
} // namespace

double Interpolant::integral_to(double x) const {
    double t = 2 * (x - a_) / (b_ - a_) - 1;
    if (t < -1) t = -1;
    if (t > 1) t = 1;
    std::vector<double> d = icoef_;
    d[0] = 0.0;
    double val = clenshaw(d, t) - clenshaw(d, -1.0);
    return val * (b_ - a_) / 2;
}

double Interpolant::integral() const { return integral_to(b_); }

} // namespace pinlab::cheb
