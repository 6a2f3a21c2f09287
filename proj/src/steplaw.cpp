#include "pinlab/steplaw.hpp"

#include "pinlab/cache.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pinlab::walks {

int StepLaw::max_step() const {
    int m = 0;
    for (const auto& a : atoms)
        if (a.p > 0) m = std::max(m, std::abs(a.offset));
    return m;
}

bool StepLaw::symmetric() const {
    for (const auto& a : atoms)
        if (std::abs(prob(-a.offset) - a.p) > 1e-15) return false;
    return true;
}

double StepLaw::prob(int offset) const {
    for (const auto& a : atoms)
        if (a.offset == offset) return a.p;
    return 0.0;
}

std::uint64_t StepLaw::hash() const {
    std::ostringstream os;
    os << name;
    for (const auto& a : atoms) {
        if (a.exact)
            os << ';' << a.offset << ':' << a.num << '/' << a.den;
        else {
            char buf[40];
            std::snprintf(buf, sizeof buf, ";%d:%.17g", a.offset, a.p);
            os << buf;
        }
    }
    return io::fnv1a(os.str());
}

StepLaw make_law(const std::string& name,
                 const std::vector<std::pair<int, std::pair<long long, long long>>>& ratoms) {
    StepLaw law;
    law.name = name;
    for (const auto& [off, frac] : ratoms) {
        StepLaw::Atom a;
        a.offset = off;
        a.num = frac.first;
        a.den = frac.second;
        a.exact = true;
        a.p = static_cast<double>(frac.first) / static_cast<double>(frac.second);
        law.atoms.push_back(a);
    }
    std::sort(law.atoms.begin(), law.atoms.end(),
              [](const auto& x, const auto& y) { return x.offset < y.offset; });
    return law;
}

StepLaw make_law_float(const std::string& name,
                       const std::vector<std::pair<int, double>>& atoms) {
    StepLaw law;
    law.name = name;
    for (const auto& [off, p] : atoms) {
        StepLaw::Atom a;
        a.offset = off;
        a.p = p;
        law.atoms.push_back(a);
    }
    std::sort(law.atoms.begin(), law.atoms.end(),
              [](const auto& x, const auto& y) { return x.offset < y.offset; });
    return law;
}

StepLaw default_step_law() {
    return make_law("default",
                    {{-2, {1, 16}}, {-1, {1, 4}}, {0, {3, 8}}, {1, {1, 4}}, {2, {1, 16}}});
}

StepLaw range3_step_law() {
    // p(+-1) = 41/100, p(+-3) = 1/100: variance 2*(41/100) + 2*9*(1/100) = 1.
    return make_law("range3",
                    {{-3, {1, 100}}, {-1, {41, 100}}, {0, {16, 100}}, {1, {41, 100}}, {3, {1, 100}}});
}

StepLaw law_by_name(const std::string& name) {
    if (name == "default") return default_step_law();
    if (name == "range3") return range3_step_law();
    if (name == "pm1") return make_law("pm1", {{-1, {1, 2}}, {1, {1, 2}}});
    throw std::invalid_argument("unknown step law: " + name);
}

namespace {

// gcd of return times to 0, found by scanning short cycles of signed sums.
// A return of length n exists iff some n-step offset combination sums to 0
// with positive probability; small BFS over reachable (time, position).
int return_period(const StepLaw& law, int t_max = 24) {
    const int m = law.max_step();
    const int width = m * t_max + 1;
    std::vector<std::vector<char>> reach(
        static_cast<std::size_t>(t_max + 1), std::vector<char>(2 * width + 1, 0));
    reach[0][width] = 1;
    int g = 0;
    for (int t = 1; t <= t_max; ++t) {
        for (int x = -width; x <= width; ++x) {
            if (!reach[t - 1][x + width]) continue;
            for (const auto& a : law.atoms) {
                if (a.p <= 0) continue;
                int y = x + a.offset;
                if (std::abs(y) <= width) reach[t][y + width] = 1;
            }
        }
        if (reach[t][width]) g = std::gcd(g, t);
        if (g == 1) return 1;
    }
    return g;
}

bool is_irreducible(const StepLaw& law) {
    // The walk generates the subgroup d*Z with d = gcd of nonzero offsets
    // (mean zero ensures both directions are reachable).
    int g = 0;
    for (const auto& a : law.atoms)
        if (a.p > 0 && a.offset != 0) g = std::gcd(g, std::abs(a.offset));
    return g == 1;
}

} // namespace

MomentReport validate_step_law(const StepLaw& law) {
    MomentReport r;
    if (law.atoms.empty()) {
        r.violation = "empty support";
        return r;
    }
    bool all_exact = std::all_of(law.atoms.begin(), law.atoms.end(),
                                 [](const auto& a) { return a.exact; });
    r.moments_exact = all_exact;

    bool norm_ok, mean_ok, var_ok, third_ok;
    if (all_exact) {
        // Common denominator integer sums: sum p*x^k = (1/D) * sum n_i*(D/d_i)*x^k.
        long long D = 1;
        for (const auto& a : law.atoms) D = std::lcm(D, a.den);
        long long s0 = 0, s1 = 0, s2 = 0, s3 = 0;
        double m4 = 0;
        for (const auto& a : law.atoms) {
            long long w = a.num * (D / a.den);
            s0 += w;
            s1 += w * a.offset;
            s2 += w * a.offset * a.offset;
            s3 += w * a.offset * a.offset * a.offset;
            m4 += a.p * std::pow(a.offset, 4);
        }
        norm_ok = (s0 == D);
        mean_ok = (s1 == 0);
        var_ok = (s2 == D); // requires mean 0
        third_ok = (s3 == 0);
        r.mean = static_cast<double>(s1) / D;
        r.variance = static_cast<double>(s2) / D - r.mean * r.mean;
        r.third = static_cast<double>(s3) / D;
        r.fourth = m4;
    } else {
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
        for (const auto& a : law.atoms) {
            s0 += a.p;
            s1 += a.p * a.offset;
            s2 += a.p * a.offset * a.offset;
            s3 += a.p * std::pow(a.offset, 3);
            s4 += a.p * std::pow(a.offset, 4);
        }
        r.mean = s1;
        r.variance = s2 - s1 * s1;
        r.third = s3;
        r.fourth = s4;
        const double tol = 1e-12;
        norm_ok = std::abs(s0 - 1) <= tol;
        mean_ok = std::abs(s1) <= tol;
        var_ok = std::abs(r.variance - 1) <= tol;
        third_ok = std::abs(s3) <= tol;
    }
    for (const auto& a : law.atoms)
        if (a.p < 0) {
            r.violation = "negative probability";
            return r;
        }
    if (!norm_ok) {
        r.violation = "probabilities do not sum to 1";
        return r;
    }
    if (!mean_ok) {
        r.violation = "mean is not 0";
        return r;
    }
    if (!var_ok) {
        r.violation = "variance is not 1";
        return r;
    }
    if (!third_ok) {
        r.violation = "third moment is not 0";
        return r;
    }
    r.irreducible = is_irreducible(law);
    if (!r.irreducible) {
        r.violation = "walk is not irreducible on Z";
        return r;
    }
    r.period = return_period(law);
    if (r.period != 1) {
        r.violation = "walk is periodic (period " + std::to_string(r.period) + ")";
        return r;
    }
    r.accepted = true;
    return r;
}

} // namespace pinlab::walks
