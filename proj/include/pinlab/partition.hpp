#pragma once

#include "pinlab/continuum.hpp"
#include "pinlab/dickman.hpp"
#include "pinlab/disorder.hpp"
#include "pinlab/kernel_table.hpp"
#include "pinlab/mc.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pinlab::partition {

// Test function averaged over unit lattice cells at diffusive scale:
// phi_N(x) = int_x^{x+1} phi(t / sqrt(N)) dt.
struct LatticeFn {
    std::vector<double> v;
    std::int64_t lo = 0;
    double at(std::int64_t x) const {
        std::int64_t i = x - lo;
        if (i < 0 || i >= static_cast<std::int64_t>(v.size())) return 0.0;
        return v[static_cast<std::size_t>(i)];
    }
};

LatticeFn lattice_test_fn(const cont::TestFn& fn, std::int64_t N);

// Deterministic averaged kernels of the polymer chaos expansion:
//   a[n] = q^N_{0,n}(phi, 0),  b[n] = q^N_{n,N}(0, psi),  c = q^N_{0,N}(phi, psi).
struct PolymerKernels {
    std::int64_t N = 0;
    std::vector<double> a; // index n = 0..N-1 (a[0] unused)
    std::vector<double> b; // index n = 0..N-1 (b[0] unused)
    double c = 0;
};

PolymerKernels build_polymer_kernels(const walks::StepLaw& law, std::int64_t N,
                                     const cont::TestFn& phi, const cont::TestFn& psi);

// Point-to-point pinning partition function Z_{M,K} (disorder attached at
// every zero visit including the start M), by the last-renewal recursion.
// zeta spans times M..K; h is the external field.
double pin_partition(std::span<const double> zeta, double h, std::int64_t M, std::int64_t K,
                     const walks::KernelTable& kt);

// Full row {Z_{m,n}}_{n=m..n_hi} for one starting point m.
std::vector<double> pin_partition_row(std::span<const double> zeta, double h, std::int64_t m,
                                      std::int64_t n_hi, const walks::KernelTable& kt,
                                      bool use_fft = true);

// Point-to-line partition Z_{N} = E[exp(sum (beta w - lambda) 1_{S_n=0})]
// via the exact chaos prefix recursion (zeta indexed 1..N).
double chaos_eval(const disorder::ChaosField& field, std::int64_t N,
                  const walks::KernelTable& kt, bool use_fft = true);

// Same quantity reassembled from pin_partition rows through the
// first/last-renewal decomposition (independent algorithm).
double point_to_line_via_pin(const disorder::ChaosField& field, std::int64_t N,
                             const walks::KernelTable& kt, bool use_fft = true);

// Exhaustive oracle: sum over all renewal subsets (2^N terms).
double brute_force_point_to_line(const disorder::ChaosField& field, std::int64_t N,
                                 const walks::KernelTable& kt);
double brute_force_pin_partition(std::span<const double> zeta, double h, std::int64_t M,
                                 std::int64_t K, const walks::KernelTable& kt);

// Polymer measure integral Z~_{0,N}(phi, psi) for one disorder field.
double polymer_integral(const disorder::ChaosField& field, const PolymerKernels& pk,
                        const walks::KernelTable& kt, bool use_fft = true);

// Pinning measure integral sum_{m<=n} I_m(f) sqrt(N) Z_{m,n} I_n(h).
double pinning_integral(const disorder::ChaosField& field, std::int64_t N,
                        const cont::TestFn& f, const cont::TestFn& h, double field_h,
                        const walks::KernelTable& kt);

// Reconstructs the polymer integral from the first/last hitting-time
// decomposition and returns |reconstructed - direct|.
double decomposition_identity_gap(const disorder::ChaosField& field, std::int64_t N,
                                  const cont::TestFn& phi, const cont::TestFn& psi,
                                  const walks::StepLaw& law, const walks::KernelTable& kt);

// E[(Z~_{0,N}(phi,psi))^2] = c^2 + (1/N) sum a_m^2 Ubar(n-m) b_n^2.
double exact_second_moment(const PolymerKernels& pk, const dickman::UbarTable& ubar);

// Continuum variance kernel V_1^theta(phi,psi), reduced to a 1D integral
// against G_theta with exact per-cell G masses.
double v1_theta(const cont::TestFn& phi, const cont::TestFn& psi,
                const dickman::GTheta& g);

mc::MCEstimate free_energy_estimate(const disorder::DisorderLaw& law, double beta, double h,
                                    std::int64_t N, std::int64_t samples,
                                    std::uint64_t seed, int workers,
                                    const walks::KernelTable& kt,
                                    std::vector<double>* values_out = nullptr);

// (1/N) log E[Z_N^h] for the pure model (Jensen upper bound).
double pure_free_energy_bound(double h, std::int64_t N, const walks::KernelTable& kt);

} // namespace pinlab::partition
