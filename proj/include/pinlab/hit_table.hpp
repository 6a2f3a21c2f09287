#pragma once

#include "pinlab/steplaw.hpp"

#include <cstdint>
#include <vector>

namespace pinlab::walks {

// q[x][n] = P^x(first visit to 0 happens at time n). Row x = 0 holds the
// first-return law K(n). Built by one forward DP with 0 absorbing.
struct HitTable {
    int x_min = 0, x_max = 0;
    std::int64_t n_max = 0;
    std::vector<std::vector<double>> q; // q[x - x_min][n]

    double at(int x, std::int64_t n) const {
        if (x < x_min || x > x_max || n < 1 || n > n_max) return 0.0;
        return q[static_cast<std::size_t>(x - x_min)][static_cast<std::size_t>(n)];
    }
};

// Window is |y| <= |x|_max + max_step * n, diffusively truncated where the
// remaining mass is below 1e-280 (bounded steps, Hoeffding). Throws when the
// required window exceeds mem_budget_doubles.
HitTable build_hit_table(const StepLaw& law, int x_min, int x_max, std::int64_t n_max,
                         std::int64_t mem_budget_doubles = 2'000'000'000);

} // namespace pinlab::walks
