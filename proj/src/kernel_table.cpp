#include "pinlab/kernel_table.hpp"

#include "pinlab/cache.hpp"
#include "pinlab/quad.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace pinlab::walks {

namespace {

// Characteristic function phi(t) = sum_j p_j e^{ijt}; real for symmetric laws.
double phi_real(const StepLaw& law, double t) {
    double s = 0;
    for (const auto& a : law.atoms) s += a.p * std::cos(a.offset * t);
    return s;
}

// Quadrature node set on [0, pi]: geometric panels toward 0 so the
// concentration of phi^n (width ~ 1/sqrt(n)) stays resolved for all n.
struct NodeSet {
    std::vector<double> t, w;
};

NodeSet build_nodes(std::int64_t n_max, int order) {
    const double h0 = 0.25 / std::sqrt(static_cast<double>(std::max<std::int64_t>(n_max, 16)));
    auto edges = quad::geometric_edges(0.0, M_PI, h0, 1.35);
    NodeSet ns;
    const auto& gl = quad::gauss_legendre(order);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = (edges[p] + edges[p + 1]) / 2;
        const double half = (edges[p + 1] - edges[p]) / 2;
        for (int i = 0; i < order; ++i) {
            ns.t.push_back(mid + half * gl.x[i]);
            ns.w.push_back(half * gl.w[i]);
        }
    }
    return ns;
}

// All p_n(0), n = 0..n_max, for one node set. Powers of phi are carried
// incrementally across n.
std::vector<double> p0_all_symmetric(const StepLaw& law, std::int64_t n_max,
                                     const NodeSet& ns) {
    const std::size_t m = ns.t.size();
    std::vector<double> phi(m), pw(m, 1.0);
    for (std::size_t k = 0; k < m; ++k) phi[k] = phi_real(law, ns.t[k]);
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = 1.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double s = 0;
        for (std::size_t k = 0; k < m; ++k) {
            pw[k] *= phi[k];
            s += ns.w[k] * pw[k];
        }
        out[static_cast<std::size_t>(n)] = s / M_PI;
    }
    return out;
}

std::vector<double> p0_all_complex(const StepLaw& law, std::int64_t n_max,
                                   const NodeSet& ns) {
    const std::size_t m = ns.t.size();
    std::vector<std::complex<double>> phi(m), pw(m, 1.0);
    for (std::size_t k = 0; k < m; ++k) {
        std::complex<double> s = 0;
        for (const auto& a : law.atoms)
            s += a.p * std::exp(std::complex<double>(0, a.offset * ns.t[k]));
        phi[k] = s;
    }
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = 1.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double s = 0;
        for (std::size_t k = 0; k < m; ++k) {
            pw[k] *= phi[k];
            s += ns.w[k] * pw[k].real(); // integrand even in t
        }
        out[static_cast<std::size_t>(n)] = s / M_PI;
    }
    return out;
}

std::vector<double> p0_all(const StepLaw& law, std::int64_t n_max, int order,
                           double* achieved_err) {
    // Refine by doubling the panel order and comparing a spread of n.
    std::vector<double> cur;
    double err = 1;
    for (int ord = order; ord <= 8 * order; ord *= 2) {
        NodeSet ns = build_nodes(n_max, ord);
        std::vector<double> next = law.symmetric() ? p0_all_symmetric(law, n_max, ns)
                                                   : p0_all_complex(law, n_max, ns);
        if (!cur.empty()) {
            err = 0;
            for (std::int64_t n = 1; n <= n_max; n = std::max<std::int64_t>(n + 1, n * 2))
                err = std::max(err, std::abs(next[static_cast<std::size_t>(n)] -
                                             cur[static_cast<std::size_t>(n)]));
            err = std::max(err, std::abs(next[static_cast<std::size_t>(n_max)] -
                                         cur[static_cast<std::size_t>(n_max)]));
            cur = std::move(next);
            if (err < 1e-13) {
                if (achieved_err) *achieved_err = err;
                return cur;
            }
        } else {
            cur = std::move(next);
        }
    }
    if (err >= 1e-12)
        throw std::runtime_error("kernel table: p0 quadrature did not reach 1e-12 (err=" +
                                 std::to_string(err) + ")");
    if (achieved_err) *achieved_err = err;
    return cur;
}

void fill_uR(KernelTable& t) {
    const std::size_t n = t.p0.size();
    t.u.resize(n);
    t.R.resize(n);
    t.u[0] = 1.0;
    t.R[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        t.u[i] = t.p0[i] * t.p0[i];
        t.R[i] = t.R[i - 1] + t.u[i];
    }
}

} // namespace

KernelTable build_return_table(const StepLaw& law, std::int64_t n_max) {
    if (n_max < 1) throw std::invalid_argument("kernel table: n_max >= 1 required");
    KernelTable t;
    t.n_max = n_max;
    t.law_hash = law.hash();
    t.p0 = p0_all(law, n_max, 24, &t.quad_error);
    fill_uR(t);
    return t;
}

KernelTable build_kernel_table(const StepLaw& law, std::int64_t n_max) {
    KernelTable t = build_return_table(law, n_max);
    // First-return recursion p_n(0) = sum_{j=1..n} K(j) p_{n-j}(0).
    const std::size_t n = static_cast<std::size_t>(n_max);
    t.K.assign(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = t.p0[k];
        const double* Kp = t.K.data();
        const double* pp = t.p0.data();
        for (std::size_t j = 1; j < k; ++j) s -= Kp[j] * pp[k - j];
        t.K[k] = s;
    }
    return t;
}

KAsymptoticsReport k_asymptotics_check(const KernelTable& table, std::int64_t tail_from) {
    if (!table.has_K()) throw std::invalid_argument("k_asymptotics: table lacks K");
    KAsymptoticsReport r;
    r.tail_from = tail_from;
    r.ratio.resize(static_cast<std::size_t>(table.n_max) + 1, 0.0);
    double lo = 1e300, hi = -1e300, mass = 0;
    for (std::int64_t n = 1; n <= table.n_max; ++n) {
        const double k = table.K[static_cast<std::size_t>(n)];
        mass += k;
        const double ratio = std::sqrt(2 * M_PI) * std::pow(static_cast<double>(n), 1.5) * k;
        r.ratio[static_cast<std::size_t>(n)] = ratio;
        if (n >= tail_from) {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    r.k_mass = mass;
    r.min_ratio_tail = lo;
    r.max_ratio_tail = hi;
    r.in_band = (table.n_max >= tail_from) && lo >= 0.9 && hi <= 1.1;
    return r;
}

void save_kernel_table(const std::string& path, const KernelTable& t) {
    io::CacheFile c;
    c.content_hash = t.law_hash;
    c.n_max = static_cast<std::uint64_t>(t.n_max);
    c.arrays = {{"p0", t.p0}, {"K", t.K}, {"u", t.u}, {"R", t.R}};
    io::write_cache(path, c);
}

KernelTable load_kernel_table(const std::string& path) {
    auto c = io::read_cache(path);
    KernelTable t;
    t.n_max = static_cast<std::int64_t>(c.n_max);
    t.law_hash = c.content_hash;
    for (auto& [name, vals] : c.arrays) {
        if (name == "p0") t.p0 = std::move(vals);
        else if (name == "K") t.K = std::move(vals);
        else if (name == "u") t.u = std::move(vals);
        else if (name == "R") t.R = std::move(vals);
    }
    return t;
}

void kernel_table_csv(const std::string& path, const KernelTable& t) {
    std::vector<double> ns(t.p0.size());
    for (std::size_t i = 0; i < ns.size(); ++i) ns[i] = static_cast<double>(i);
    std::vector<std::vector<double>> cols{ns, t.p0,
                                          t.has_K() ? t.K : std::vector<double>(ns.size(), 0.0),
                                          t.u, t.R};
    io::write_csv(path, {"n", "p0", "K", "u", "R"}, cols);
}

} // namespace pinlab::walks
