#include "pinlab/coarse_grain.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace pinlab;

TEST_CASE("no-triple enumeration: predicate recheck and brute-force count") {
    const int M = 16, K = 2, kmax = 3;
    auto tuples = cg::enumerate_no_triple(M, K, kmax);
    for (const auto& t : tuples) CHECK(cg::no_triple_ok(t, M, K));
    // brute force: all increasing tuples over [K, M-K], filtered
    std::int64_t count = 0;
    const int lo = K, hi = M - K;
    std::vector<int> idx;
    std::function<void(int)> rec = [&](int from) {
        if (!idx.empty() && static_cast<int>(idx.size()) <= kmax &&
            cg::no_triple_ok(idx, M, K))
            ++count;
        if (static_cast<int>(idx.size()) >= kmax) return;
        for (int i = from; i <= hi; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(lo);
    CHECK(static_cast<std::int64_t>(tuples.size()) == count);
}

TEST_CASE("paired block form expands exactly onto the unpaired set") {
    const int M = 16, K = 2;
    // non-binding caps so both enumerations cover the full set
    auto tuples = cg::enumerate_no_triple(M, K, M);
    auto paired = cg::enumerate_no_triple_paired(M, K, M);
    std::set<std::vector<int>> from_pairs;
    for (const auto& blocks : paired) {
        std::vector<int> flat;
        for (const auto& b : blocks) {
            flat.push_back(b.first);
            if (b.second != b.first) flat.push_back(b.second);
        }
        from_pairs.insert(flat);
    }
    std::set<std::vector<int>> direct(tuples.begin(), tuples.end());
    CHECK(direct == from_pairs);
    // and pairing each unpaired tuple lands inside the paired enumeration
    for (const auto& t : tuples) {
        auto blocks = cg::pair_up(t, K);
        for (std::size_t j = 1; j < blocks.size(); ++j)
            CHECK(cg::block_dist(blocks[j - 1], blocks[j]) >= K);
        for (const auto& b : blocks) CHECK(cg::block_width(b) <= K);
    }
}

TEST_CASE("theta: zero field, prefix recursion vs definitional double sum") {
    auto walk = walks::default_step_law();
    const std::int64_t N = 256;
    auto grid = cg::make_meso_grid(N, 1.0 / 8, 2, 3);
    auto kt = walks::build_return_table(walk, N);
    disorder::ChaosField zf;
    zf.lo = 1;
    zf.zeta.assign(static_cast<std::size_t>(N), 0.0);
    CHECK(cg::theta(zf, grid, {2, 2}, kt) == 0.0);
    for (auto lawname : {"gaussian", "rademacher"}) {
        auto law = disorder::disorder_by_name(lawname);
        auto w = disorder::solve_critical_beta(law, N, 0.0,
                                               walks::build_return_table(walk, N).R_at(N));
        for (std::uint64_t s : {0ull, 1ull}) {
            auto field = disorder::zeta_field(law, w.beta, 1, N, 100 + s, 0);
            for (cg::TimeBlock blk : {cg::TimeBlock{2, 2}, cg::TimeBlock{3, 4}}) {
                const double fast = cg::theta(field, grid, blk, kt);
                const double slow = cg::theta_definitional(field, grid, blk, kt);
                CHECK(std::abs(fast - slow) < 1e-12);
            }
        }
    }
}

TEST_CASE("theta ensemble mean is zero") {
    auto walk = walks::default_step_law();
    const std::int64_t N = 512;
    auto grid = cg::make_meso_grid(N, 1.0 / 8, 2, 3);
    auto kt = walks::build_return_table(walk, N);
    auto law = disorder::DisorderLaw::gaussian();
    auto w = disorder::solve_critical_beta(law, N, 0.0, kt.R_at(N));
    auto rep = cg::theta_moment_experiment(law, w.beta, grid, {{2, 2}, {4, 5}}, 10000, 555, 1,
                                           kt);
    // mean == 0 is exact; check via the covariance of the block with itself:
    // here simply recompute means
    double mean = 0, var = 0;
    auto vals = mc::ensemble(10000, 1, [&](std::int64_t i) {
        auto f = disorder::zeta_field(law, w.beta, 1, grid.M * grid.L, 555,
                                      static_cast<std::uint64_t>(i));
        return cg::theta(f, grid, {2, 2}, kt);
    });
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size() - 1);
    CHECK(std::abs(mean) <= 3 * std::sqrt(var / static_cast<double>(vals.size())));
    CHECK(std::abs(rep.disjoint_cov) <= 3 * rep.disjoint_cov_stderr);
}

TEST_CASE("z_no_triple: channel DP equals tuple-enumerated transfer") {
    auto walk = walks::default_step_law();
    const std::int64_t N = 160;
    auto grid = cg::make_meso_grid(N, 1.0 / 16, 2, 3);
    auto kt = walks::build_return_table(walk, N);
    auto phi = cont::gaussian_bump(0.5);
    auto psi = cont::gaussian_bump(0.5);
    auto pk = partition::build_polymer_kernels(walk, N, phi, psi);
    auto law = disorder::DisorderLaw::gaussian();
    auto w = disorder::solve_critical_beta(law, N, 0.0, kt.R_at(N));
    for (std::uint64_t s : {0ull, 1ull, 2ull}) {
        auto field = disorder::zeta_field(law, w.beta, 0, N, 900 + s, 0);
        const double dp = cg::z_no_triple(field, grid, pk, kt);
        const double brute = cg::z_no_triple_enumerated(field, grid, pk, kt);
        CHECK(std::abs(dp - brute) < 1e-12);
    }
}

TEST_CASE("z_cg and l_cg: identical summands, lattice weights converge") {
    // with identical end weights the two models are the same sum; the
    // lattice weights phi_{N,eps} approach phi_eps at rate 1/sqrt(eps N)
    // (one boundary lattice cell of mass)
    auto walk = walks::default_step_law();
    const double eps = 1.0 / 16;
    cont::TestFn ind{[](double x) { return std::abs(x) < 1.0 ? 1.0 : 0.0; }, -1.0, 1.0, 1.0,
                     "indicator"};
    auto diff_at = [&](std::int64_t N) {
        auto grid = cg::make_meso_grid(N, eps, 2, 3);
        auto wl = cg::cg_weights_lattice(grid, ind, ind);
        auto wc = cg::cg_weights_continuum(grid, ind, ind);
        double d = 0;
        for (int i = 1; i <= grid.M; ++i) {
            d = std::max(d, std::abs(wl.A[i] - wc.A[i]));
            d = std::max(d, std::abs(wl.B[i] - wc.B[i]));
        }
        return d;
    };
    const double d0 = diff_at(4096), d1 = diff_at(16384);
    CHECK(d0 < 1.0 / std::sqrt(4096 * eps));
    CHECK(d1 < 0.7 * d0);
    // identical summands: same thetas and weights give the same value
    auto grid = cg::make_meso_grid(4096, eps, 2, 3);
    auto wl = cg::cg_weights_lattice(grid, ind, ind);
    auto wc = cg::cg_weights_continuum(grid, ind, ind);
    auto blocks = cg::admissible_blocks(grid);
    std::vector<double> thetas(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        thetas[b] = std::sin(static_cast<double>(b) + 1.0);
    auto waligned = wc;
    waligned.A = wl.A;
    waligned.B = wl.B;
    CHECK(cg::cg_model(grid, thetas, wl) ==
          doctest::Approx(cg::cg_model(grid, thetas, waligned)).epsilon(1e-14));
}

TEST_CASE("cg model is linear in each theta slot") {
    auto walk = walks::default_step_law();
    const std::int64_t N = 1024;
    auto grid = cg::make_meso_grid(N, 1.0 / 8, 2, 3);
    auto phi = cont::gaussian_bump(0.5);
    auto wgt = cg::cg_weights_continuum(grid, phi, phi);
    auto blocks = cg::admissible_blocks(grid);
    std::vector<double> thetas(blocks.size(), 0.3);
    const double base = cg::cg_model(grid, thetas, wgt);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto t1 = thetas, t2 = thetas;
        t1[b] += 0.25;
        t2[b] += 0.50;
        const double d1 = cg::cg_model(grid, t1, wgt) - base;
        const double d2 = cg::cg_model(grid, t2, wgt) - base;
        CHECK(std::abs(d2 - 2 * d1) < 1e-11 * std::max(1.0, std::abs(base)));
    }
}

TEST_CASE("l_cg mean matches the deterministic term") {
    auto walk = walks::default_step_law();
    const std::int64_t N = 1024;
    auto grid = cg::make_meso_grid(N, 1.0 / 8, 2, 3);
    auto kt = walks::build_return_table(walk, N);
    auto phi = cont::gaussian_bump(0.5);
    auto w = cg::cg_weights_continuum(grid, phi, phi);
    auto law = disorder::DisorderLaw::gaussian();
    auto win = disorder::solve_critical_beta(law, N, 0.0, kt.R_at(N));
    auto vals = mc::ensemble(4000, 1, [&](std::int64_t i) {
        auto f = disorder::zeta_field(law, win.beta, 1, grid.M * grid.L, 77,
                                      static_cast<std::uint64_t>(i));
        return cg::l_cg(f, grid, kt, w);
    });
    auto est = mc::summarize(vals, 77);
    CHECK(std::abs(est.mean - w.det_term) <= 3 * est.stderr_);
}
