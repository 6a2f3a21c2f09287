#include "pinlab/partition.hpp"

#include "pinlab/fftconv.hpp"
#include "pinlab/hit_table.hpp"
#include "pinlab/quad.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pinlab::partition {

LatticeFn lattice_test_fn(const cont::TestFn& fn, std::int64_t N) {
    if (!fn.bounded()) throw std::invalid_argument("lattice_test_fn: compact support required");
    const double rN = std::sqrt(static_cast<double>(N));
    LatticeFn out;
    out.lo = static_cast<std::int64_t>(std::floor(fn.lo * rN)) - 1;
    std::int64_t hi = static_cast<std::int64_t>(std::ceil(fn.hi * rN)) + 1;
    out.v.resize(static_cast<std::size_t>(hi - out.lo + 1));
    const auto& gl = quad::gauss_legendre(8);
    for (std::int64_t x = out.lo; x <= hi; ++x) {
        double s = 0;
        for (int i = 0; i < 8; ++i) {
            double t = static_cast<double>(x) + 0.5 + 0.5 * gl.x[i];
            s += 0.5 * gl.w[i] * fn(t / rN);
        }
        out.v[static_cast<std::size_t>(x - out.lo)] = s;
    }
    return out;
}

namespace {

struct Window {
    std::vector<double> v;
    std::int64_t half = 0;
    double& at(std::int64_t x) { return v[static_cast<std::size_t>(x + half)]; }
    double get(std::int64_t x) const {
        if (x < -half || x > half) return 0.0;
        return v[static_cast<std::size_t>(x + half)];
    }
};

// One transition of the forward measure evolution mu_n(y) = sum mu_{n-1}(x) p(y-x).
void evolve_measure(const walks::StepLaw& law, const Window& src, Window& dst) {
    std::fill(dst.v.begin(), dst.v.end(), 0.0);
    const std::int64_t half = src.half;
    for (const auto& a : law.atoms) {
        if (a.p <= 0) continue;
        const double p = a.p;
        const std::int64_t off = a.offset;
        const std::int64_t lo = std::max(-half, -half + off), hi = std::min(half, half + off);
        const double* s = src.v.data();
        double* d = dst.v.data();
        for (std::int64_t y = lo; y <= hi; ++y)
            d[y + half] += p * s[y - off + half];
    }
}

// Function evolution h_n(x) = sum_s law(s) h_{n-1}(x+s).
void evolve_function(const walks::StepLaw& law, const Window& src, Window& dst) {
    std::fill(dst.v.begin(), dst.v.end(), 0.0);
    const std::int64_t half = src.half;
    for (const auto& a : law.atoms) {
        if (a.p <= 0) continue;
        const double p = a.p;
        const std::int64_t off = a.offset;
        const std::int64_t lo = std::max(-half, -half - off), hi = std::min(half, half - off);
        const double* s = src.v.data();
        double* d = dst.v.data();
        for (std::int64_t x = lo; x <= hi; ++x)
            d[x + half] += p * s[x + off + half];
    }
}

std::int64_t dp_half_width(const walks::StepLaw& law, std::int64_t N, std::int64_t extent) {
    // Hoeffding: P(max_k |S_k| >= 12 smax sqrt(n)) < 1e-30; truncation there
    // is invisible at double precision.
    const int smax = law.max_step();
    const std::int64_t diff =
        static_cast<std::int64_t>(12.0 * smax * std::sqrt(static_cast<double>(N))) + smax + 2;
    return extent + std::min<std::int64_t>(smax * N, diff);
}

} // namespace

PolymerKernels build_polymer_kernels(const walks::StepLaw& law, std::int64_t N,
                                     const cont::TestFn& phi, const cont::TestFn& psi) {
    if (N < 2) throw std::invalid_argument("polymer kernels: N >= 2");
    PolymerKernels pk;
    pk.N = N;
    pk.a.assign(static_cast<std::size_t>(N), 0.0);
    pk.b.assign(static_cast<std::size_t>(N), 0.0);

    LatticeFn phiN = lattice_test_fn(phi, N);
    LatticeFn psiN = lattice_test_fn(psi, N);
    const std::int64_t ext =
        std::max({std::llabs(phiN.lo), std::llabs(phiN.lo + static_cast<std::int64_t>(phiN.v.size())),
                  std::llabs(psiN.lo), std::llabs(psiN.lo + static_cast<std::int64_t>(psiN.v.size()))});
    const std::int64_t half = dp_half_width(law, N, ext);

    Window cur{std::vector<double>(static_cast<std::size_t>(2 * half + 1), 0.0), half};
    Window nxt = cur;

    // forward sweep from phi_N: a[n] = mu_n(0); at n = N also c.
    for (std::size_t i = 0; i < phiN.v.size(); ++i)
        cur.at(phiN.lo + static_cast<std::int64_t>(i)) = phiN.v[i];
    for (std::int64_t n = 1; n <= N; ++n) {
        evolve_measure(law, cur, nxt);
        cur.v.swap(nxt.v);
        if (n < N) pk.a[static_cast<std::size_t>(n)] = cur.get(0);
    }
    double c = 0;
    for (std::size_t i = 0; i < psiN.v.size(); ++i)
        c += cur.get(psiN.lo + static_cast<std::int64_t>(i)) * psiN.v[i];
    pk.c = c / std::sqrt(static_cast<double>(N));

    // backward sweep from psi_N: b[n] = h_{N-n}(0).
    std::fill(cur.v.begin(), cur.v.end(), 0.0);
    for (std::size_t i = 0; i < psiN.v.size(); ++i)
        cur.at(psiN.lo + static_cast<std::int64_t>(i)) = psiN.v[i];
    std::vector<double> h0(static_cast<std::size_t>(N) + 1, 0.0);
    h0[0] = cur.get(0);
    for (std::int64_t j = 1; j <= N; ++j) {
        evolve_function(law, cur, nxt);
        cur.v.swap(nxt.v);
        h0[static_cast<std::size_t>(j)] = cur.get(0);
    }
    for (std::int64_t n = 1; n < N; ++n)
        pk.b[static_cast<std::size_t>(n)] = h0[static_cast<std::size_t>(N - n)];
    return pk;
}

double pin_partition(std::span<const double> zeta, double h, std::int64_t M, std::int64_t K,
                     const walks::KernelTable& kt) {
    auto row = pin_partition_row(zeta, h, M, K, kt, true);
    return row.back();
}

std::vector<double> pin_partition_row(std::span<const double> zeta, double h, std::int64_t m,
                                      std::int64_t n_hi, const walks::KernelTable& kt,
                                      bool use_fft) {
    if (n_hi < m) throw std::invalid_argument("pin row: n_hi >= m required");
    const std::int64_t L = n_hi - m + 1;
    if (kt.n_max < L - 1 || !kt.has_K())
        throw std::invalid_argument("pin row: kernel table too short or lacks K");
    if (zeta.size() < static_cast<std::size_t>(L))
        throw std::invalid_argument("pin row: zeta window too short");
    const double eh = std::exp(h);
    std::vector<double> w(static_cast<std::size_t>(L)), c(static_cast<std::size_t>(L), 0.0),
        out(static_cast<std::size_t>(L));
    for (std::int64_t i = 0; i < L; ++i)
        w[static_cast<std::size_t>(i)] = (1.0 + zeta[static_cast<std::size_t>(i)]) * eh;
    c[0] = 1.0;
    fftconv::prefix_solve(w, c, kt.K, out, use_fft);
    return out;
}

double chaos_eval(const disorder::ChaosField& field, std::int64_t N,
                  const walks::KernelTable& kt, bool use_fft) {
    if (kt.n_max < N) throw std::invalid_argument("chaos_eval: kernel table too short");
    const std::size_t L = static_cast<std::size_t>(N);
    std::vector<double> zs(L), c(L), D(L);
    for (std::int64_t n = 1; n <= N; ++n) {
        zs[static_cast<std::size_t>(n - 1)] = field.at(n);
        c[static_cast<std::size_t>(n - 1)] = kt.p0[static_cast<std::size_t>(n)];
    }
    fftconv::prefix_solve(zs, c, kt.p0, D, use_fft);
    double z = 1.0;
    for (double d : D) z += d;
    return z;
}

double point_to_line_via_pin(const disorder::ChaosField& field, std::int64_t N,
                             const walks::KernelTable& kt, bool use_fft) {
    // Z_N = P(tau_1 > N) + sum_{1<=m<=n<=N} K(m) Z_{m,n} Pbar(N-n),
    // Pbar(j) = 1 - sum_{i<=j} K(i).
    std::vector<double> pbar(static_cast<std::size_t>(N) + 1, 1.0);
    for (std::int64_t j = 1; j <= N; ++j)
        pbar[static_cast<std::size_t>(j)] =
            pbar[static_cast<std::size_t>(j - 1)] - kt.K[static_cast<std::size_t>(j)];
    double z = pbar[static_cast<std::size_t>(N)];
    std::vector<double> zw(static_cast<std::size_t>(N) + 1);
    for (std::int64_t n = 0; n <= N; ++n) zw[static_cast<std::size_t>(n)] = field.at(n);
    for (std::int64_t m = 1; m <= N; ++m) {
        auto row = pin_partition_row(
            std::span<const double>(zw.data() + m, static_cast<std::size_t>(N - m + 1)), 0.0,
            m, N, kt, use_fft);
        const double Km = kt.K[static_cast<std::size_t>(m)];
        for (std::int64_t n = m; n <= N; ++n)
            z += Km * row[static_cast<std::size_t>(n - m)] * pbar[static_cast<std::size_t>(N - n)];
    }
    return z;
}

double brute_force_point_to_line(const disorder::ChaosField& field, std::int64_t N,
                                 const walks::KernelTable& kt) {
    if (N > 22) throw std::invalid_argument("brute force: N too large");
    // sum over subsets A of {1..N}: prod_{n in A} zeta_n * prod p0(gaps)
    double total = 0;
    const std::uint64_t lim = 1ULL << N;
    for (std::uint64_t mask = 0; mask < lim; ++mask) {
        double term = 1.0;
        std::int64_t prev = 0;
        for (std::int64_t n = 1; n <= N; ++n) {
            if (mask & (1ULL << (n - 1))) {
                term *= field.at(n) * kt.p0[static_cast<std::size_t>(n - prev)];
                prev = n;
            }
        }
        total += term;
    }
    return total;
}

double brute_force_pin_partition(std::span<const double> zeta, double h, std::int64_t M,
                                 std::int64_t K, const walks::KernelTable& kt) {
    const std::int64_t L = K - M;
    if (L > 22) throw std::invalid_argument("brute force: range too large");
    const double eh = std::exp(h);
    auto w = [&](std::int64_t k) { return (1.0 + zeta[static_cast<std::size_t>(k - M)]) * eh; };
    if (L == 0) return w(M);
    // ordered renewal tuples M < m_1 < ... < m_j = K over subsets of (M, K)
    double total = 0;
    const std::uint64_t lim = 1ULL << (L - 1); // interior points M+1..K-1
    for (std::uint64_t mask = 0; mask < lim; ++mask) {
        double term = w(M);
        std::int64_t prev = M;
        for (std::int64_t n = M + 1; n < K; ++n) {
            if (mask & (1ULL << (n - M - 1))) {
                term *= kt.K[static_cast<std::size_t>(n - prev)] * w(n);
                prev = n;
            }
        }
        term *= kt.K[static_cast<std::size_t>(K - prev)] * w(K);
        total += term;
    }
    return total;
}

double polymer_integral(const disorder::ChaosField& field, const PolymerKernels& pk,
                        const walks::KernelTable& kt, bool use_fft) {
    const std::int64_t N = pk.N;
    if (kt.n_max < N) throw std::invalid_argument("polymer integral: kernel table too short");
    const std::size_t L = static_cast<std::size_t>(N - 1);
    std::vector<double> zs(L), c(L), D(L);
    for (std::int64_t n = 1; n < N; ++n) {
        zs[static_cast<std::size_t>(n - 1)] = field.at(n);
        c[static_cast<std::size_t>(n - 1)] = pk.a[static_cast<std::size_t>(n)];
    }
    fftconv::prefix_solve(zs, c, kt.p0, D, use_fft);
    double acc = 0;
    for (std::int64_t n = 1; n < N; ++n)
        acc += D[static_cast<std::size_t>(n - 1)] * pk.b[static_cast<std::size_t>(n)];
    return pk.c + acc / std::sqrt(static_cast<double>(N));
}

double pinning_integral(const disorder::ChaosField& field, std::int64_t N,
                        const cont::TestFn& f, const cont::TestFn& h, double field_h,
                        const walks::KernelTable& kt) {
    // I_m(f) = int_{m/N}^{(m+1)/N} f; midpoints by GL per cell.
    const auto& gl = quad::gauss_legendre(8);
    auto cell = [&](const cont::TestFn& fn, std::int64_t m) {
        double s = 0;
        const double lo = static_cast<double>(m) / static_cast<double>(N);
        const double w = 1.0 / static_cast<double>(N);
        for (int i = 0; i < 8; ++i) s += 0.5 * gl.w[i] * fn(lo + w * (0.5 + 0.5 * gl.x[i]));
        return s * w;
    };
    std::vector<double> If(static_cast<std::size_t>(N)), Ih(static_cast<std::size_t>(N));
    for (std::int64_t m = 0; m < N; ++m) {
        If[static_cast<std::size_t>(m)] = cell(f, m);
        Ih[static_cast<std::size_t>(m)] = cell(h, m);
    }
    std::vector<double> zw(static_cast<std::size_t>(N) + 1);
    for (std::int64_t n = 0; n <= N; ++n) zw[static_cast<std::size_t>(n)] = field.at(n);
    const double rN = std::sqrt(static_cast<double>(N));
    double acc = 0;
    for (std::int64_t m = 0; m < N; ++m) {
        if (If[static_cast<std::size_t>(m)] == 0.0) continue;
        auto row = pin_partition_row(
            std::span<const double>(zw.data() + m, static_cast<std::size_t>(N - m)), field_h,
            m, N - 1, kt, true);
        double inner = 0;
        for (std::int64_t n = m; n < N; ++n)
            inner += row[static_cast<std::size_t>(n - m)] * Ih[static_cast<std::size_t>(n)];
        acc += If[static_cast<std::size_t>(m)] * rN * inner;
    }
    return acc;
}

double decomposition_identity_gap(const disorder::ChaosField& field, std::int64_t N,
                                  const cont::TestFn& phi, const cont::TestFn& psi,
                                  const walks::StepLaw& law, const walks::KernelTable& kt) {
    PolymerKernels pk = build_polymer_kernels(law, N, phi, psi);
    const double direct = polymer_integral(field, pk, kt);

    LatticeFn phiN = lattice_test_fn(phi, N);
    LatticeFn psiN = lattice_test_fn(psi, N);
    const double rN = std::sqrt(static_cast<double>(N));

    // hitting-time table covering supp(phi_N) and -supp(psi_N)
    std::int64_t xlo = phiN.lo, xhi = phiN.lo + static_cast<std::int64_t>(phiN.v.size()) - 1;
    std::int64_t ylo = -(psiN.lo + static_cast<std::int64_t>(psiN.v.size()) - 1), yhi = -psiN.lo;
    std::int64_t lo = std::min(xlo, ylo), hi = std::max(xhi, yhi);
    walks::HitTable ht = walks::build_hit_table(law, static_cast<int>(lo),
                                                static_cast<int>(hi), N);

    // F(m) = sum_a phi_N(a) q_a(m); G(j) = sum_b psi_N(b) q_{-b}(j)
    std::vector<double> F(static_cast<std::size_t>(N), 0.0),
        G(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t m = 1; m < N; ++m) {
        double s = 0;
        for (std::size_t i = 0; i < phiN.v.size(); ++i)
            s += phiN.v[i] * ht.at(static_cast<int>(phiN.lo + static_cast<std::int64_t>(i)), m);
        F[static_cast<std::size_t>(m)] = s;
        double g = 0;
        for (std::size_t i = 0; i < psiN.v.size(); ++i)
            g += psiN.v[i] * ht.at(static_cast<int>(-(psiN.lo + static_cast<std::int64_t>(i))), m);
        G[static_cast<std::size_t>(m)] = g;
    }

    // no-hit term: evolve phi_N with 0 removed at steps 1..N-1, free at N.
    const std::int64_t half = dp_half_width(law, N, std::max(std::llabs(lo), std::llabs(hi)));
    Window cur{std::vector<double>(static_cast<std::size_t>(2 * half + 1), 0.0), half};
    Window nxt = cur;
    for (std::size_t i = 0; i < phiN.v.size(); ++i)
        cur.at(phiN.lo + static_cast<std::int64_t>(i)) = phiN.v[i];
    for (std::int64_t n = 1; n <= N; ++n) {
        evolve_measure(law, cur, nxt);
        cur.v.swap(nxt.v);
        if (n < N) cur.at(0) = 0.0; // tau_1 >= N: no visit to 0 before N
    }
    double nohit = 0;
    for (std::size_t i = 0; i < psiN.v.size(); ++i)
        nohit += cur.get(psiN.lo + static_cast<std::int64_t>(i)) * psiN.v[i];
    nohit /= rN;

    // pinned block: sum_{1<=m<=n<=N-1} F(m) Z_{m,n} G(N-n) / sqrt(N)
    std::vector<double> zw(static_cast<std::size_t>(N) + 1);
    for (std::int64_t n = 0; n <= N; ++n) zw[static_cast<std::size_t>(n)] = field.at(n);
    double pinned = 0;
    for (std::int64_t m = 1; m < N; ++m) {
        if (F[static_cast<std::size_t>(m)] == 0.0) continue;
        auto row = pin_partition_row(
            std::span<const double>(zw.data() + m, static_cast<std::size_t>(N - m)), 0.0, m,
            N - 1, kt, true);
        double inner = 0;
        for (std::int64_t n = m; n < N; ++n)
            inner += row[static_cast<std::size_t>(n - m)] * G[static_cast<std::size_t>(N - n)];
        pinned += F[static_cast<std::size_t>(m)] * inner;
    }
    pinned /= rN;

    return std::abs(nohit + pinned - direct);
}

double exact_second_moment(const PolymerKernels& pk, const dickman::UbarTable& ubar) {
    const std::int64_t N = pk.N;
    if (ubar.N < N - 1) throw std::invalid_argument("second moment: Ubar table too short");
    std::vector<double> a2(static_cast<std::size_t>(N), 0.0), b2(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t n = 1; n < N; ++n) {
        a2[static_cast<std::size_t>(n)] =
            pk.a[static_cast<std::size_t>(n)] * pk.a[static_cast<std::size_t>(n)];
        b2[static_cast<std::size_t>(n)] =
            pk.b[static_cast<std::size_t>(n)] * pk.b[static_cast<std::size_t>(n)];
    }
    double acc = 0;
    for (std::int64_t d = 0; d <= N - 2; ++d) {
        const double ub = ubar.at(d);
        double dot = 0;
        const double* pa = a2.data() + 1;
        const double* pb = b2.data() + 1 + d;
        const std::int64_t len = N - 1 - d;
        for (std::int64_t i = 0; i < len; ++i) dot += pa[i] * pb[i];
        acc += ub * dot;
    }
    return pk.c * pk.c + acc / static_cast<double>(N);
}

double v1_theta(const cont::TestFn& phi, const cont::TestFn& psi, const dickman::GTheta& g) {
    // V_1 = 2 pi int_0^1 G(u) H(u) du,
    // H(u) = int_0^{1-u} A(r) B(r+u) dr, A(r) = g_r(phi,0)^2, B(s) = g_{1-s}(0,psi)^2.
    cheb::Interpolant Aw([&](double w) {
        double v = cont::pair_phi(phi, 0.0, w * w, 1e-10);
        return v * v;
    }, 0.0, 1.0, 72);
    cheb::Interpolant Bw([&](double w) { // indexed by w = sqrt(1-s)
        double v = cont::pair_psi(0.0, psi, w * w, 1e-10);
        return v * v;
    }, 0.0, 1.0, 72);
    auto H = [&](double u) {
        if (u >= 1) return 0.0;
        return quad::integrate_panels(
            [&](double r) { return Aw(std::sqrt(r)) * Bw(std::sqrt(1 - r - u)); }, 0.0,
            1.0 - u, 16, 8);
    };
    auto edges = quad::geometric_edges(0.0, 1.0, 1e-5, 1.35);
    double acc = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        const double mass = g.integral(a, b, 0);
        if (mass == 0) continue;
        const double m1 = g.integral(a, b, 1);
        const double mid = m1 / mass; // G-weighted center of the cell
        const double h = 1e-5 + (b - a) / 2;
        const double slope = (H(std::min(1.0, mid + h)) - H(std::max(0.0, mid - h))) / (2 * h);
        acc += H(mid) * mass + slope * (m1 - mid * mass);
    }
    return 2 * M_PI * acc;
}

mc::MCEstimate free_energy_estimate(const disorder::DisorderLaw& law, double beta, double h,
                                    std::int64_t N, std::int64_t samples,
                                    std::uint64_t seed, int workers,
                                    const walks::KernelTable& kt,
                                    std::vector<double>* values_out) {
    if (kt.n_max < N || !kt.has_K())
        throw std::invalid_argument("free energy: kernel table too short or lacks K");
    std::vector<double> pbar(static_cast<std::size_t>(N) + 1, 1.0);
    for (std::int64_t j = 1; j <= N; ++j)
        pbar[static_cast<std::size_t>(j)] =
            pbar[static_cast<std::size_t>(j - 1)] - kt.K[static_cast<std::size_t>(j)];
    auto t0 = std::chrono::steady_clock::now();
    auto vals = mc::ensemble(samples, workers, [&](std::int64_t i) {
        auto field = disorder::zeta_field(law, beta, 0, N, seed, static_cast<std::uint64_t>(i));
        const double eh = std::exp(h);
        const std::size_t L = static_cast<std::size_t>(N) + 1;
        std::vector<double> w(L), c(L, 0.0), T(L);
        w[0] = 1.0;
        c[0] = 1.0;
        for (std::int64_t n = 1; n <= N; ++n)
            w[static_cast<std::size_t>(n)] = (1.0 + field.at(n)) * eh;
        fftconv::prefix_solve(w, c, kt.K, T, true);
        double z = 0;
        for (std::int64_t n = 0; n <= N; ++n)
            z += T[static_cast<std::size_t>(n)] * pbar[static_cast<std::size_t>(N - n)];
        return std::log(z) / static_cast<double>(N);
    });
    auto t1 = std::chrono::steady_clock::now();
    if (values_out) *values_out = vals;
    return mc::summarize(vals, seed, std::chrono::duration<double>(t1 - t0).count());
}

double pure_free_energy_bound(double h, std::int64_t N, const walks::KernelTable& kt) {
    std::vector<double> pbar(static_cast<std::size_t>(N) + 1, 1.0);
    for (std::int64_t j = 1; j <= N; ++j)
        pbar[static_cast<std::size_t>(j)] =
            pbar[static_cast<std::size_t>(j - 1)] - kt.K[static_cast<std::size_t>(j)];
    const double eh = std::exp(h);
    const std::size_t L = static_cast<std::size_t>(N) + 1;
    std::vector<double> w(L, eh), c(L, 0.0), T(L);
    w[0] = 1.0;
    c[0] = 1.0;
    fftconv::prefix_solve(w, c, kt.K, T, true);
    double z = 0;
    for (std::int64_t n = 0; n <= N; ++n)
        z += T[static_cast<std::size_t>(n)] * pbar[static_cast<std::size_t>(N - n)];
    return std::log(z) / static_cast<double>(N);
}

} // namespace pinlab::partition
