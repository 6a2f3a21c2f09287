#include "pinlab/coarse_grain.hpp"

#include "pinlab/fftconv.hpp"
#include "pinlab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pinlab::cg {

MesoGrid make_meso_grid(std::int64_t N, double eps, int K_eps, int r_max) {
    MesoGrid g;
    g.N = N;
    g.eps = eps;
    g.M = static_cast<int>(std::floor(1.0 / eps + 1e-9));
    g.L = static_cast<std::int64_t>(std::llround(eps * static_cast<double>(N)));
    if (g.L < 1 ||
        std::abs(eps * static_cast<double>(N) - static_cast<double>(g.L)) > 1e-6)
        throw std::invalid_argument("meso grid: eps*N must be a whole interval length");
    const double l1e = std::log(1.0 / eps);
    if (K_eps < 0)
        K_eps = static_cast<int>(
            std::min(std::ceil(std::pow(l1e, 6.0)), std::floor(1.0 / (4 * eps))));
    if (2 * K_eps >= g.M)
        throw std::invalid_argument("meso grid: K_eps >= 1/(2 eps) empties the index set");
    g.K_eps = K_eps;
    g.r_max = r_max > 0 ? r_max : std::max(1, static_cast<int>(std::floor(l1e * l1e)));
    return g;
}

int block_width(const TimeBlock& b) { return b.second - b.first + 1; }
int block_dist(const TimeBlock& a, const TimeBlock& b) { return b.first - a.second; }

bool no_triple_ok(const std::vector<int>& t, int M, int K_eps) {
    if (t.empty()) return false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < K_eps || t[i] > M - K_eps) return false;
        if (i > 0 && t[i] <= t[i - 1]) return false;
    }
    for (std::size_t i = 0; i + 2 < t.size(); ++i)
        if (t[i + 1] - t[i] < K_eps && t[i + 2] - t[i + 1] < K_eps) return false;
    return true;
}

namespace {
void enum_rec(int M, int K_eps, int k_max, std::vector<int>& cur, bool last_short,
              std::vector<std::vector<int>>& out) {
    if (!cur.empty()) out.push_back(cur);
    if (static_cast<int>(cur.size()) >= k_max) return;
    int from = cur.empty() ? K_eps : cur.back() + 1;
    for (int i = from; i <= M - K_eps; ++i) {
        bool short_gap = !cur.empty() && (i - cur.back() < K_eps);
        if (short_gap && last_short) continue;
        cur.push_back(i);
        enum_rec(M, K_eps, k_max, cur, cur.size() >= 2 ? short_gap : false, out);
        cur.pop_back();
    }
}
} // namespace

std::vector<std::vector<int>> enumerate_no_triple(int M, int K_eps, int k_max) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    enum_rec(M, K_eps, k_max, cur, false, out);
    return out;
}

std::vector<TimeBlock> pair_up(const std::vector<int>& tuple, int K_eps) {
    std::vector<TimeBlock> blocks;
    std::size_t i = 0;
    while (i < tuple.size()) {
        if (i + 1 < tuple.size() && tuple[i + 1] - tuple[i] < K_eps) {
            blocks.emplace_back(tuple[i], tuple[i + 1]);
            i += 2;
        } else {
            blocks.emplace_back(tuple[i], tuple[i]);
            i += 1;
        }
    }
    return blocks;
}

std::vector<std::vector<TimeBlock>> enumerate_no_triple_paired(int M, int K_eps, int r_max) {
    // blocks (i,i') with 0 <= i'-i < K_eps; consecutive blocks dist >= K_eps
    std::vector<TimeBlock> all;
    for (int i = K_eps; i <= M - K_eps; ++i)
        for (int j = i; j <= std::min(M - K_eps, i + K_eps - 1); ++j) all.emplace_back(i, j);
    std::vector<std::vector<TimeBlock>> out;
    std::vector<TimeBlock> cur;
    std::function<void()> rec = [&]() {
        if (!cur.empty()) out.push_back(cur);
        if (static_cast<int>(cur.size()) >= r_max) return;
        for (const auto& b : all) {
            if (!cur.empty() && block_dist(cur.back(), b) < K_eps) continue;
            if (!cur.empty() && b.first <= cur.back().second) continue;
            cur.push_back(b);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

namespace {

// Forward chain sums over one interval: B(n) = zeta_n (1 + sum_{m<n} B(m) p0(n-m)).
std::vector<double> interval_forward(const disorder::ChaosField& field, const MesoGrid& g,
                                     int i, const walks::KernelTable& kt, bool use_fft) {
    const std::int64_t lo = g.lo(i), L = g.L;
    std::vector<double> zs(static_cast<std::size_t>(L)), c(static_cast<std::size_t>(L), 1.0),
        B(static_cast<std::size_t>(L));
    for (std::int64_t j = 0; j < L; ++j)
        zs[static_cast<std::size_t>(j)] = field.at(lo + j);
    fftconv::prefix_solve(zs, c, kt.p0, B, use_fft);
    return B;
}

// Backward chain sums: B'(n) = zeta_n (1 + sum_{m>n} p0(m-n) B'(m)).
std::vector<double> interval_backward(const disorder::ChaosField& field, const MesoGrid& g,
                                      int i, const walks::KernelTable& kt, bool use_fft) {
    const std::int64_t lo = g.lo(i), L = g.L;
    std::vector<double> zs(static_cast<std::size_t>(L)), c(static_cast<std::size_t>(L), 1.0),
        B(static_cast<std::size_t>(L));
    for (std::int64_t j = 0; j < L; ++j)
        zs[static_cast<std::size_t>(j)] = field.at(lo + (L - 1 - j));
    fftconv::prefix_solve(zs, c, kt.p0, B, use_fft);
    std::reverse(B.begin(), B.end());
    return B;
}

double cross_pair(const std::vector<double>& Bf, const std::vector<double>& Bb,
                  std::int64_t gap_lo, const walks::KernelTable& kt) {
    // sum_{f, d'} Bf[f] p0[gap_lo + (d' - f) + (L-1)] ... via correlation:
    // corr[k] = sum_f Bf[f] Bb[f + k - (L-1)], k = 0..2L-2
    std::vector<double> rev(Bf.rbegin(), Bf.rend());
    auto corr = fftconv::convolve(rev, Bb); // corr[k] = sum Bf[L-1-i] Bb[k-i]
    const std::int64_t L = static_cast<std::int64_t>(Bf.size());
    double acc = 0;
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(corr.size()); ++k) {
        // offset d' - f = k - (L-1); true time gap = gap_lo + offset
        const std::int64_t gap = gap_lo + k - (L - 1);
        if (gap < 1 || gap > kt.n_max) continue;
        acc += corr[static_cast<std::size_t>(k)] * kt.p0[static_cast<std::size_t>(gap)];
    }
    return acc;
}

} // namespace

double theta(const disorder::ChaosField& field, const MesoGrid& g, const TimeBlock& blk,
             const walks::KernelTable& kt, bool use_fft) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(g.L));
    if (blk.second == blk.first) {
        auto B = interval_forward(field, g, blk.first, kt, use_fft);
        double s = 0;
        for (double v : B) s += v;
        return norm * s;
    }
    if (blk.second - blk.first >= g.K_eps)
        throw std::invalid_argument("theta: block wider than K_eps");
    auto Bf = interval_forward(field, g, blk.first, kt, use_fft);
    auto Bb = interval_backward(field, g, blk.second, kt, use_fft);
    // gap between f (position j in T(i)) and d' (position j' in T(i')):
    // (lo' + j') - (lo + j); with rev/convolution offset (j' - j), base lo' - lo.
    const std::int64_t base = g.lo(blk.second) - g.lo(blk.first);
    return norm * cross_pair(Bf, Bb, base, kt);
}

double theta_definitional(const disorder::ChaosField& field, const MesoGrid& g,
                          const TimeBlock& blk, const walks::KernelTable& kt) {
    // X_{d,f} with the polymer chaos written out term by term.
    auto X = [&](std::int64_t d, std::int64_t f) {
        if (d == f) return field.at(d);
        // zeta_d * Ztilde_{d,f}(0,0) * zeta_f; Ztilde by its own prefix chaos
        const std::int64_t L = f - d - 1;
        double z = kt.p0[static_cast<std::size_t>(f - d)];
        if (L > 0) {
            std::vector<double> zs(static_cast<std::size_t>(L)),
                c(static_cast<std::size_t>(L)), D(static_cast<std::size_t>(L));
            for (std::int64_t j = 0; j < L; ++j) {
                zs[static_cast<std::size_t>(j)] = field.at(d + 1 + j);
                c[static_cast<std::size_t>(j)] = kt.p0[static_cast<std::size_t>(j + 1)];
            }
            fftconv::prefix_solve_naive(zs, c, kt.p0, D);
            for (std::int64_t j = 0; j < L; ++j)
                z += D[static_cast<std::size_t>(j)] *
                     kt.p0[static_cast<std::size_t>(f - d - 1 - j)];
        }
        return field.at(d) * z * field.at(f);
    };
    const double norm = 1.0 / std::sqrt(static_cast<double>(g.L));
    if (blk.first == blk.second) {
        double s = 0;
        for (std::int64_t d = g.lo(blk.first); d <= g.hi(blk.first); ++d)
            for (std::int64_t f = d; f <= g.hi(blk.first); ++f) s += X(d, f);
        return norm * s;
    }
    double s = 0;
    for (std::int64_t d = g.lo(blk.first); d <= g.hi(blk.first); ++d)
        for (std::int64_t f = d; f <= g.hi(blk.first); ++f)
            for (std::int64_t d2 = g.lo(blk.second); d2 <= g.hi(blk.second); ++d2)
                for (std::int64_t f2 = d2; f2 <= g.hi(blk.second); ++f2)
                    s += X(d, f) * kt.p0[static_cast<std::size_t>(d2 - f)] * X(d2, f2);
    return norm * s;
}

std::vector<TimeBlock> admissible_blocks(const MesoGrid& g) {
    std::vector<TimeBlock> out;
    for (int i = g.K_eps; i <= g.M - g.K_eps; ++i)
        for (int j = i; j <= std::min(g.M - g.K_eps, i + g.K_eps - 1); ++j)
            out.emplace_back(i, j);
    return out;
}

double z_no_triple(const disorder::ChaosField& field, const MesoGrid& g,
                   const partition::PolymerKernels& pk, const walks::KernelTable& kt) {
    const std::int64_t N = pk.N;
    const int M = g.M, K = g.K_eps, R = g.r_max;
    const std::int64_t t_lo = g.lo(K), t_hi = std::min<std::int64_t>(g.hi(M - K), N - 1);
    if (t_lo > t_hi) return pk.c;
    const std::int64_t W = t_hi - t_lo + 1;
    // channels: (r, flag) with r = 1..R, flag in {0 long, 1 short}
    const int nch = 2 * R;
    auto ch = [R](int r, int flag) { return (r - 1) * 2 + flag; };
    std::vector<std::vector<double>> D(static_cast<std::size_t>(nch),
                                       std::vector<double>(static_cast<std::size_t>(W), 0.0));
    // per-interval views into the time window
    for (std::int64_t n = t_lo; n <= t_hi; ++n) {
        const int in = g.interval_of(n);
        const std::size_t idx = static_cast<std::size_t>(n - t_lo);
        const double zn = field.at(n);
        // start a chain here
        double acc_start = pk.a[static_cast<std::size_t>(n)];
        std::vector<double> acc(static_cast<std::size_t>(nch), 0.0);
        acc[static_cast<std::size_t>(ch(1, 0))] = acc_start;
        for (std::int64_t m = t_lo; m < n; ++m) {
            const int im = g.interval_of(m);
            const int gap = in - im;
            const std::size_t jdx = static_cast<std::size_t>(m - t_lo);
            const double p = kt.p0[static_cast<std::size_t>(n - m)];
            if (gap == 0) {
                for (int r = 1; r <= R; ++r)
                    for (int f = 0; f < 2; ++f)
                        acc[static_cast<std::size_t>(ch(r, f))] +=
                            D[static_cast<std::size_t>(ch(r, f))][jdx] * p;
            } else {
                const int nf = gap < K ? 1 : 0;
                for (int r = 1; r < R; ++r) {
                    // from long-flag channels always; from short-flag only if gap >= K
                    acc[static_cast<std::size_t>(ch(r + 1, nf))] +=
                        D[static_cast<std::size_t>(ch(r, 0))][jdx] * p;
                    if (gap >= K)
                        acc[static_cast<std::size_t>(ch(r + 1, nf))] +=
                            D[static_cast<std::size_t>(ch(r, 1))][jdx] * p;
                }
            }
        }
        for (int c = 0; c < nch; ++c)
            D[static_cast<std::size_t>(c)][idx] = zn * acc[static_cast<std::size_t>(c)];
    }
    double acc = 0;
    for (std::int64_t n = t_lo; n <= t_hi; ++n) {
        const std::size_t idx = static_cast<std::size_t>(n - t_lo);
        double s = 0;
        for (int c = 0; c < nch; ++c) s += D[static_cast<std::size_t>(c)][idx];
        acc += s * pk.b[static_cast<std::size_t>(n)];
    }
    return pk.c + acc / std::sqrt(static_cast<double>(N));
}

double z_no_triple_enumerated(const disorder::ChaosField& field, const MesoGrid& g,
                              const partition::PolymerKernels& pk,
                              const walks::KernelTable& kt) {
    auto tuples = enumerate_no_triple(g.M, g.K_eps, g.r_max);
    const std::int64_t N = pk.N;
    double acc = 0;
    for (const auto& tup : tuples) {
        // transfer the chain weights through the intervals of the tuple
        std::int64_t prev_lo = 0;
        bool first = true;
        std::vector<double> Bprev;
        for (std::size_t q = 0; q < tup.size(); ++q) {
            const int iv = tup[q];
            const std::int64_t lo = g.lo(iv), L = g.L;
            std::vector<double> c(static_cast<std::size_t>(L), 0.0);
            if (first) {
                for (std::int64_t j = 0; j < L; ++j) {
                    std::int64_t n = lo + j;
                    c[static_cast<std::size_t>(j)] =
                        n < N ? pk.a[static_cast<std::size_t>(n)] : 0.0;
                }
            } else {
                for (std::int64_t j = 0; j < L; ++j) {
                    std::int64_t n = lo + j;
                    double s = 0;
                    for (std::int64_t j2 = 0; j2 < static_cast<std::int64_t>(Bprev.size()); ++j2) {
                        std::int64_t m = prev_lo + j2;
                        if (m < n)
                            s += Bprev[static_cast<std::size_t>(j2)] *
                                 kt.p0[static_cast<std::size_t>(n - m)];
                    }
                    c[static_cast<std::size_t>(j)] = s;
                }
            }
            std::vector<double> zs(static_cast<std::size_t>(L)), B(static_cast<std::size_t>(L));
            for (std::int64_t j = 0; j < L; ++j)
                zs[static_cast<std::size_t>(j)] = lo + j <= field.lo + static_cast<std::int64_t>(field.zeta.size()) - 1
                                                      ? field.at(lo + j)
                                                      : 0.0;
            fftconv::prefix_solve_naive(zs, c, kt.p0, B);
            Bprev = std::move(B);
            prev_lo = lo;
            first = false;
        }
        double term = 0;
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(Bprev.size()); ++j) {
            std::int64_t n = prev_lo + j;
            if (n < N) term += Bprev[static_cast<std::size_t>(j)] * pk.b[static_cast<std::size_t>(n)];
        }
        acc += term;
    }
    return pk.c + acc / std::sqrt(static_cast<double>(N));
}

namespace {

CgWeights cg_weights_impl(const MesoGrid& g, const cont::TestFn& phi, const cont::TestFn& psi,
                          bool lattice) {
    CgWeights w;
    w.A.assign(static_cast<std::size_t>(g.M) + 1, 0.0);
    w.B.assign(static_cast<std::size_t>(g.M) + 1, 0.0);
    const double rLe = std::sqrt(static_cast<double>(g.L)); // sqrt(eps N)
    const double reps = std::sqrt(g.eps);

    // weights per mesoscopic spatial cell index a
    auto cell_weights = [&](const cont::TestFn& fn) {
        std::vector<std::pair<std::int64_t, double>> out;
        std::int64_t alo, ahi;
        if (lattice) {
            partition::LatticeFn fN = partition::lattice_test_fn(fn, g.N);
            alo = static_cast<std::int64_t>(
                      std::floor(static_cast<double>(fN.lo) / rLe)) - 1;
            ahi = static_cast<std::int64_t>(
                      std::ceil(static_cast<double>(fN.lo + static_cast<std::int64_t>(fN.v.size())) / rLe)) + 1;
            for (std::int64_t a = alo; a <= ahi; ++a) {
                double s = 0;
                // u in (a sqrt(eps N), (a+1) sqrt(eps N)]
                std::int64_t ulo = static_cast<std::int64_t>(std::floor(a * rLe)) + 1;
                std::int64_t uhi = static_cast<std::int64_t>(std::floor((a + 1) * rLe));
                for (std::int64_t u = ulo; u <= uhi; ++u) s += fN.at(u);
                out.emplace_back(a, s / rLe);
            }
        } else {
            alo = static_cast<std::int64_t>(std::floor(fn.lo / reps)) - 1;
            ahi = static_cast<std::int64_t>(std::ceil(fn.hi / reps)) + 1;
            const auto& gl = quad::gauss_legendre(8);
            for (std::int64_t a = alo; a <= ahi; ++a) {
                double s = 0;
                for (int i = 0; i < 8; ++i) {
                    double x = static_cast<double>(a) + 0.5 + 0.5 * gl.x[i];
                    s += 0.5 * gl.w[i] * fn(reps * x);
                }
                out.emplace_back(a, s);
            }
        }
        return out;
    };

    auto wa = cell_weights(phi);
    auto wb = cell_weights(psi);
    for (int i = 1; i <= g.M; ++i) {
        double A = 0;
        for (const auto& [a, v] : wa)
            A += v * cont::heat_kernel(static_cast<double>(i), static_cast<double>(a));
        w.A[static_cast<std::size_t>(i)] = A;
        double B = 0;
        const double tw = static_cast<double>(g.M - i);
        for (const auto& [b, v] : wb)
            B += v * cont::heat_kernel(tw, static_cast<double>(b));
        w.B[static_cast<std::size_t>(i)] = B;
    }
    w.det_term = cont::pair_phi_psi(phi, psi, 1.0, 1e-9);
    return w;
}

} // namespace

CgWeights cg_weights_lattice(const MesoGrid& g, const cont::TestFn& phi,
                             const cont::TestFn& psi) {
    return cg_weights_impl(g, phi, psi, true);
}

CgWeights cg_weights_continuum(const MesoGrid& g, const cont::TestFn& phi,
                               const cont::TestFn& psi) {
    return cg_weights_impl(g, phi, psi, false);
}

double cg_model(const MesoGrid& g, const std::vector<double>& thetas, const CgWeights& w) {
    auto blocks = admissible_blocks(g);
    if (thetas.size() != blocks.size())
        throw std::invalid_argument("cg_model: theta count mismatch");
    const int R = g.r_max;
    const std::size_t nb = blocks.size();
    // W_r(blk): DP over blocks sorted by start (already sorted)
    std::vector<std::vector<double>> Wr(static_cast<std::size_t>(R) + 1,
                                        std::vector<double>(nb, 0.0));
    for (std::size_t bi = 0; bi < nb; ++bi) {
        const auto& blk = blocks[bi];
        Wr[1][bi] = w.A[static_cast<std::size_t>(blk.first)] * thetas[bi];
        for (int r = 2; r <= R; ++r) {
            double acc = 0;
            for (std::size_t bj = 0; bj < nb; ++bj) {
                const auto& prev = blocks[bj];
                const int dist = blk.first - prev.second;
                if (dist < g.K_eps) continue;
                acc += Wr[static_cast<std::size_t>(r - 1)][bj] *
                       cont::heat_kernel(static_cast<double>(dist), 0.0);
            }
            Wr[static_cast<std::size_t>(r)][bi] = acc * thetas[bi];
        }
    }
    double acc = 0;
    for (std::size_t bi = 0; bi < nb; ++bi) {
        double s = 0;
        for (int r = 1; r <= R; ++r) s += Wr[static_cast<std::size_t>(r)][bi];
        acc += s * w.B[static_cast<std::size_t>(blocks[bi].second)];
    }
    return w.det_term + std::sqrt(g.eps) * acc;
}

double l_cg(const disorder::ChaosField& field, const MesoGrid& g,
            const walks::KernelTable& kt, const CgWeights& w, bool use_fft) {
    auto blocks = admissible_blocks(g);
    std::vector<double> thetas(blocks.size());
    // reuse per-interval chain sums across blocks
    std::vector<std::vector<double>> fwd(static_cast<std::size_t>(g.M) + 1),
        bwd(static_cast<std::size_t>(g.M) + 1);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& blk = blocks[bi];
        if (fwd[static_cast<std::size_t>(blk.first)].empty())
            fwd[static_cast<std::size_t>(blk.first)] =
                interval_forward(field, g, blk.first, kt, use_fft);
        if (blk.first == blk.second) {
            double s = 0;
            for (double v : fwd[static_cast<std::size_t>(blk.first)]) s += v;
            thetas[bi] = s / std::sqrt(static_cast<double>(g.L));
        } else {
            if (bwd[static_cast<std::size_t>(blk.second)].empty())
                bwd[static_cast<std::size_t>(blk.second)] =
                    interval_backward(field, g, blk.second, kt, use_fft);
            const std::int64_t base = g.lo(blk.second) - g.lo(blk.first);
            thetas[bi] = cross_pair(fwd[static_cast<std::size_t>(blk.first)],
                                    bwd[static_cast<std::size_t>(blk.second)], base, kt) /
                         std::sqrt(static_cast<double>(g.L));
        }
    }
    return cg_model(g, thetas, w);
}

ThetaMomentReport theta_moment_experiment(const disorder::DisorderLaw& law, double beta,
                                          const MesoGrid& grid,
                                          const std::vector<TimeBlock>& blocks,
                                          std::int64_t samples, std::uint64_t seed,
                                          int workers, const walks::KernelTable& kt) {
    // one covariance pair: first two disjoint blocks in the list (if any)
    int cov_a = -1, cov_b = -1;
    for (std::size_t i = 0; i < blocks.size() && cov_a < 0; ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            if (blocks[j].first > blocks[i].second || blocks[i].first > blocks[j].second) {
                cov_a = static_cast<int>(i);
                cov_b = static_cast<int>(j);
                break;
            }
    auto rows = mc::ensemble_rows(samples, workers, [&](std::int64_t s) {
        auto field = disorder::zeta_field(law, beta, 1, grid.M * grid.L, seed,
                                          static_cast<std::uint64_t>(s));
        std::vector<double> vals(blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b)
            vals[b] = theta(field, grid, blocks[b], kt);
        return vals;
    });
    ThetaMomentReport rep;
    const double n = static_cast<double>(samples);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        double m2 = 0, m4 = 0, m4sq = 0, m8 = 0;
        for (const auto& r : rows) {
            const double v = r[b], v2 = v * v;
            m2 += v2;
            m4 += v2 * v2;
            m4sq += v2 * v2;
            m8 += v2 * v2 * v2 * v2;
        }
        m2 /= n;
        m4 /= n;
        m4sq /= n;
        m8 /= n;
        ThetaMomentRow row;
        row.blk = blocks[b];
        row.m2 = m2;
        row.m2_stderr = std::sqrt(std::max(0.0, m4sq - m2 * m2) / n);
        row.m4 = m4;
        row.m4_stderr = std::sqrt(std::max(0.0, m8 - m4 * m4) / n);
        rep.rows.push_back(row);
    }
    if (cov_a >= 0) {
        double c = 0, c2 = 0;
        for (const auto& r : rows) {
            const double prod = r[static_cast<std::size_t>(cov_a)] * r[static_cast<std::size_t>(cov_b)];
            c += prod;
            c2 += prod * prod;
        }
        c /= n;
        c2 /= n;
        rep.disjoint_cov = c; // Theta has mean 0
        rep.disjoint_cov_stderr = std::sqrt(std::max(0.0, c2 - c * c) / n);
    }
    return rep;
}

std::vector<L2Row> l2_distance_experiment(const disorder::DisorderLaw& law, std::int64_t N,
                                          const std::vector<double>& eps_list, int K_eps,
                                          const cont::TestFn& phi, const cont::TestFn& psi,
                                          double vartheta, std::int64_t samples,
                                          std::uint64_t seed, int workers,
                                          const walks::StepLaw& walk) {
    auto kt = walks::build_return_table(walk, N);
    auto window = disorder::solve_critical_beta(law, N, vartheta, kt.R_at(N));
    auto pk = partition::build_polymer_kernels(walk, N, phi, psi);
    std::vector<L2Row> out;
    for (double eps : eps_list) {
        MesoGrid grid = make_meso_grid(N, eps, K_eps);
        auto sq = mc::ensemble(samples, workers, [&](std::int64_t s) {
            auto field = disorder::zeta_field(law, window.beta, 0, N, seed,
                                              static_cast<std::uint64_t>(s));
            const double zn = partition::polymer_integral(field, pk, kt);
            const double znt = z_no_triple(field, grid, pk, kt);
            const double d = zn - znt;
            return d * d;
        });
        auto est = mc::summarize(sq, seed);
        out.push_back({eps, est.mean, est.stderr_});
    }
    return out;
}

CgConvergence cg_convergence_experiment(const disorder::DisorderLaw& law, double eps,
                                        int K_eps, const std::vector<std::int64_t>& N_list,
                                        const cont::TestFn& phi, const cont::TestFn& psi,
                                        double vartheta, std::int64_t samples,
                                        std::uint64_t seed, int workers,
                                        const walks::StepLaw& walk) {
    CgConvergence out;
    out.N_list = N_list;
    for (std::int64_t N : N_list) {
        MesoGrid grid = make_meso_grid(N, eps, K_eps);
        auto kt = walks::build_return_table(walk, N);
        auto window = disorder::solve_critical_beta(law, N, vartheta, kt.R_at(N));
        CgWeights w = cg_weights_continuum(grid, phi, psi);
        auto vals = mc::ensemble(samples, workers, [&](std::int64_t s) {
            auto field = disorder::zeta_field(law, window.beta, 1, grid.M * grid.L, seed,
                                              static_cast<std::uint64_t>(s));
            return l_cg(field, grid, kt, w);
        });
        auto est = mc::summarize(vals, seed);
        out.samples.push_back(std::move(vals));
        out.means.push_back(est.mean);
        out.stderrs.push_back(est.stderr_);
        out.det_term = w.det_term;
    }
    const std::size_t K = out.samples.size();
    out.ks.assign(K, std::vector<double>(K, 0.0));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j) {
            double d = mc::ks_two_sample(out.samples[i], out.samples[j]);
            out.ks[i][j] = out.ks[j][i] = d;
        }
    return out;
}

} // namespace pinlab::cg
