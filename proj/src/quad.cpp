#include "pinlab/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace pinlab::quad {

namespace {

GaussLegendre compute_gl(int n) {
    GaussLegendre gl;
    gl.x.resize(n);
    gl.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Initial guess (Chebyshev-like), then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        gl.x[i] = x;
        gl.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

} // namespace

const GaussLegendre& gauss_legendre(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int order, int panels) {
    const auto& gl = gauss_legendre(order);
    const double h = (b - a) / panels;
    double total = 0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + h / 2, half = h / 2;
        double s = 0;
        for (int i = 0; i < order; ++i) s += gl.w[i] * f(mid + half * gl.x[i]);
        total += s * half;
    }
    return total;
}

Result integrate_doubling(const std::function<double(double)>& f, double a, double b,
                          double tol, int order, int max_doublings) {
    Result r;
    int panels = 1;
    double prev = integrate_panels(f, a, b, order, panels);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        double cur = integrate_panels(f, a, b, order, panels);
        r.err_estimate = std::abs(cur - prev);
        r.value = cur;
        if (r.err_estimate <= tol * std::max(1.0, std::abs(cur))) {
            r.converged = true;
            return r;
        }
        prev = cur;
    }
    return r;
}

namespace {

void adapt_rec(const std::function<double(double)>& f, double a, double b,
               double coarse, double tol, int order, int depth, int max_depth,
               Result& out) {
    double fine = integrate_panels(f, a, b, 2 * order, 1);
    double err = std::abs(fine - coarse);
    if (err <= tol || depth >= max_depth) {
        out.value += fine;
        out.err_estimate += err;
        if (depth >= max_depth && err > tol) out.converged = false;
        return;
    }
    double mid = (a + b) / 2;
    double left = integrate_panels(f, a, mid, order, 1);
    double right = integrate_panels(f, mid, b, order, 1);
    adapt_rec(f, a, mid, left, tol / 2, order, depth + 1, max_depth, out);
    adapt_rec(f, mid, b, right, tol / 2, order, depth + 1, max_depth, out);
}

} // namespace

Result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int order, int max_depth) {
    Result out;
    out.converged = true;
    double coarse = integrate_panels(f, a, b, order, 1);
    double tol = abs_tol;
    if (rel_tol > 0) {
        double scale = std::abs(integrate_panels(f, a, b, 2 * order, 4));
        tol = std::max(abs_tol, rel_tol * scale);
    }
    adapt_rec(f, a, b, coarse, tol, order, 0, max_depth, out);
    return out;
}

double integrate_edges(const std::function<double(double)>& f,
                       const std::vector<double>& edges, int order) {
    double total = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += integrate_panels(f, edges[i], edges[i + 1], order, 1);
    return total;
}

std::vector<double> geometric_edges(double a, double b, double h0, double ratio) {
    if (!(b > a) || h0 <= 0 || ratio <= 1)
        throw std::invalid_argument("geometric_edges: bad parameters");
    std::vector<double> e{a};
    double h = h0;
    double x = a;
    while (x + h < b) {
        x += h;
        e.push_back(x);
        h *= ratio;
    }
    e.push_back(b);
    return e;
}

} // namespace pinlab::quad
