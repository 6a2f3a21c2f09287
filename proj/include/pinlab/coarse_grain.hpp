#pragma once

#include "pinlab/dickman.hpp"
#include "pinlab/disorder.hpp"
#include "pinlab/partition.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace pinlab::cg {

// Mesoscopic time grid: intervals T(i) = ((i-1) L, i L], i = 1..M with
// L = eps N and M = floor(1/eps). Admissible interval indices for the
// no-triple sums are [K_eps, M - K_eps].
struct MesoGrid {
    std::int64_t N = 0;
    double eps = 0;
    int M = 0;
    std::int64_t L = 0;
    int K_eps = 0;
    int r_max = 0;

    int interval_of(std::int64_t n) const { return static_cast<int>((n - 1) / L) + 1; }
    std::int64_t lo(int i) const { return static_cast<std::int64_t>(i - 1) * L + 1; }
    std::int64_t hi(int i) const { return static_cast<std::int64_t>(i) * L; }
};

// K_eps < 1/(2 eps) enforced; defaults:
//   K_eps = min(ceil((log 1/eps)^6), floor(1/(4 eps)))   (paper's threshold
//   exceeds 1/eps at desk scale, see experiment manifests)
//   r_max = max(1, floor((log 1/eps)^2))
MesoGrid make_meso_grid(std::int64_t N, double eps, int K_eps = -1, int r_max = -1);

// Time block (i, i'); width = i' - i + 1; pairs satisfy i' - i < K_eps.
using TimeBlock = std::pair<int, int>;

int block_width(const TimeBlock& b);
int block_dist(const TimeBlock& a, const TimeBlock& b); // j - i'

// All index tuples (i_1 < ... < i_k) with K_eps <= i_1, i_k <= M - K_eps,
// k <= k_max, and no two consecutive short gaps (< K_eps). Desk-scale sizes
// only; the evaluators below never enumerate.
std::vector<std::vector<int>> enumerate_no_triple(int M, int K_eps, int k_max);

// The same set in paired (block) form: widths < K_eps + 1, inter-block
// distances >= K_eps, block count <= r_max.
std::vector<std::vector<TimeBlock>> enumerate_no_triple_paired(int M, int K_eps, int r_max);

// Greedy left-to-right pairing of an unpaired tuple (unique by no-triple).
std::vector<TimeBlock> pair_up(const std::vector<int>& tuple, int K_eps);
bool no_triple_ok(const std::vector<int>& tuple, int M, int K_eps);

// Coarse-grained disorder Theta_{N,eps}(block) by prefix recursions.
double theta(const disorder::ChaosField& field, const MesoGrid& grid, const TimeBlock& blk,
             const walks::KernelTable& kt, bool use_fft = true);

// Definitional oracle: double sum over X_{d,f} terms (O(L^4), tiny L only).
double theta_definitional(const disorder::ChaosField& field, const MesoGrid& grid,
                          const TimeBlock& blk, const walks::KernelTable& kt);

std::vector<TimeBlock> admissible_blocks(const MesoGrid& grid);

// Z^(no triple)(phi,psi): chaos restricted to admissible intervals, with the
// no-triple constraint and at most r_max distinct intervals.
double z_no_triple(const disorder::ChaosField& field, const MesoGrid& grid,
                   const partition::PolymerKernels& pk, const walks::KernelTable& kt);

// Brute-force evaluation over enumerated tuples (small sizes only).
double z_no_triple_enumerated(const disorder::ChaosField& field, const MesoGrid& grid,
                              const partition::PolymerKernels& pk,
                              const walks::KernelTable& kt);

// Coarse-grained partition sums. `thetas[b]` are the block disorders in the
// order of admissible_blocks(grid).
struct CgWeights { // spatial end weights per interval index
    std::vector<double> A; // A[i] = sum_a phi_w(a) g_i(a), i = 1..M
    std::vector<double> B; // B[i] = sum_b g_{M-i}(b) psi_w(b)
    double det_term = 0;   // g_1(phi, psi)
};

CgWeights cg_weights_lattice(const MesoGrid& grid, const cont::TestFn& phi,
                             const cont::TestFn& psi); // phi_{N,eps} version (Z^cg)
CgWeights cg_weights_continuum(const MesoGrid& grid, const cont::TestFn& phi,
                               const cont::TestFn& psi); // phi_eps version (L^cg)

double cg_model(const MesoGrid& grid, const std::vector<double>& thetas,
                const CgWeights& w);

// L^(cg) for one field: thetas computed from the field, continuum weights.
double l_cg(const disorder::ChaosField& field, const MesoGrid& grid,
            const walks::KernelTable& kt, const CgWeights& w, bool use_fft = true);

// ---- experiments ----

struct ThetaMomentRow {
    TimeBlock blk;
    double m2 = 0, m2_stderr = 0;
    double m4 = 0, m4_stderr = 0;
};

struct ThetaMomentReport {
    std::vector<ThetaMomentRow> rows;
    double disjoint_cov = 0;       // cov(Theta(b1), Theta(b2)) for disjoint blocks
    double disjoint_cov_stderr = 0;
};

ThetaMomentReport theta_moment_experiment(const disorder::DisorderLaw& law, double beta,
                                          const MesoGrid& grid,
                                          const std::vector<TimeBlock>& blocks,
                                          std::int64_t samples, std::uint64_t seed,
                                          int workers, const walks::KernelTable& kt);

struct L2Row {
    double eps = 0;
    double l2 = 0;        // empirical E[(Z_N - Z^nt)^2]
    double l2_stderr = 0;
};

std::vector<L2Row> l2_distance_experiment(const disorder::DisorderLaw& law, std::int64_t N,
                                          const std::vector<double>& eps_list, int K_eps,
                                          const cont::TestFn& phi, const cont::TestFn& psi,
                                          double vartheta, std::int64_t samples,
                                          std::uint64_t seed, int workers,
                                          const walks::StepLaw& walk);

struct CgConvergence {
    std::vector<std::int64_t> N_list;
    std::vector<std::vector<double>> samples; // per N
    std::vector<std::vector<double>> ks;      // pairwise KS matrix
    std::vector<double> means;
    std::vector<double> stderrs;
    double det_term = 0;
};

CgConvergence cg_convergence_experiment(const disorder::DisorderLaw& law, double eps,
                                        int K_eps, const std::vector<std::int64_t>& N_list,
                                        const cont::TestFn& phi, const cont::TestFn& psi,
                                        double vartheta, std::int64_t samples,
                                        std::uint64_t seed, int workers,
                                        const walks::StepLaw& walk);

} // namespace pinlab::cg
