#pragma once

#include "pinlab/steplaw.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pinlab::walks {

// Precomputed return-probability kernels of one step law:
//   p0[n] = P(S_n = 0)            (p0[0] = 1 by convention)
//   K[n]  = P(tau_1 = n)          (first return law; K[0] = 0)
//   u[n]  = p0[n]^2
//   R[n]  = sum_{j<=n} u[j]       (expected overlap count)
// K is present only when built with first-return kernels enabled (its
// recursion costs O(n_max^2)); p0/u/R always cover 0..n_max.
struct KernelTable {
    std::int64_t n_max = 0;
    std::vector<double> p0, K, u, R;
    std::uint64_t law_hash = 0;
    double quad_error = 0; // achieved p0 refinement error

    bool has_K() const { return !K.empty(); }
    double R_at(std::int64_t n) const { return R[static_cast<std::size_t>(n)]; }
};

// p_n(0) by characteristic-function quadrature (panels doubled until two
// refinements agree below 1e-13), K by the first-return recursion.
KernelTable build_kernel_table(const StepLaw& law, std::int64_t n_max);

// p0/u/R only; O(n_max * nodes). Used where K is not needed.
KernelTable build_return_table(const StepLaw& law, std::int64_t n_max);

struct KAsymptoticsReport {
    std::vector<double> ratio;  // sqrt(2 pi) n^{3/2} K(n), n = 1..n_max
    double min_ratio_tail = 0;  // over n >= tail_from
    double max_ratio_tail = 0;
    std::int64_t tail_from = 1000;
    bool in_band = false;       // tail within [0.9, 1.1]
    double k_mass = 0;          // sum K(n)
};

KAsymptoticsReport k_asymptotics_check(const KernelTable& table,
                                       std::int64_t tail_from = 1000);

void save_kernel_table(const std::string& path, const KernelTable& t);
KernelTable load_kernel_table(const std::string& path);
void kernel_table_csv(const std::string& path, const KernelTable& t);

} // namespace pinlab::walks
