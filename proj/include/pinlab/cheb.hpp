#pragma once

#include <functional>
#include <vector>

namespace pinlab::cheb {

// Chebyshev interpolant on [a,b] built from function values at
// Chebyshev-Lobatto points. Evaluation by Clenshaw recurrence on the
// coefficient form; also exposes integrals via the antiderivative series.
class Interpolant {
public:
    Interpolant() = default;
    Interpolant(const std::function<double(double)>& f, double a, double b, int n);

    double operator()(double x) const;
    double integral() const;               // over [a,b]
    double integral_to(double x) const;    // over [a,x]
    double a() const { return a_; }
    double b() const { return b_; }
    int degree() const { return static_cast<int>(coef_.size()) - 1; }

private:
    double a_ = 0, b_ = 1;
    std::vector<double> coef_;   // Chebyshev coefficients
    std::vector<double> icoef_;  // antiderivative coefficients
};

} // namespace pinlab::cheb
