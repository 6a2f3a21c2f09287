#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace pinlab::quad {

struct GaussLegendre {
    std::vector<double> x; // nodes on [-1,1]
    std::vector<double> w;
};

// Cached Gauss-Legendre rule of order n (nodes by Newton iteration).
const GaussLegendre& gauss_legendre(int n);

struct Result {
    double value = 0;
    double err_estimate = 0;
    bool converged = false;
};

// Fixed composite rule: `panels` equal panels of order `order` on [a,b].
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int order = 16, int panels = 1);

// Composite rule with panel doubling until two successive refinements agree
// within tol (absolute + relative).
Result integrate_doubling(const std::function<double(double)>& f, double a, double b,
                          double tol, int order = 16, int max_doublings = 14);

// Adaptive bisection, comparing order n against order 2n per panel.
Result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol = 0.0, int order = 12,
                          int max_depth = 40);

// Composite rule over explicit panel edges.
double integrate_edges(const std::function<double(double)>& f,
                       const std::vector<double>& edges, int order = 16);

// Geometric panel edges from a toward b, starting panel width `h0`,
// growth factor `ratio` (>1). Always includes both endpoints.
std::vector<double> geometric_edges(double a, double b, double h0, double ratio);

} // namespace pinlab::quad
