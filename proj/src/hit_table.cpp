#include "pinlab/hit_table.hpp"

#include <cmath>
#include <stdexcept>

namespace pinlab::walks {

HitTable build_hit_table(const StepLaw& law, int x_min, int x_max, std::int64_t n_max,
                         std::int64_t mem_budget_doubles) {
    if (x_min > x_max || n_max < 1) throw std::invalid_argument("hit table: bad range");
    const int smax = law.max_step();
    const int xabs = std::max(std::abs(x_min), std::abs(x_max));
    // Diffusive truncation: P(max_k |S_k| >= 12 smax sqrt(n)) < 1e-30; the
    // dropped mass is invisible at double precision.
    const std::int64_t diff =
        static_cast<std::int64_t>(12.0 * smax * std::sqrt(static_cast<double>(n_max))) + smax + 2;
    const std::int64_t half = xabs + std::min<std::int64_t>(smax * n_max, diff);
    const std::int64_t width = 2 * half + 1;
    const std::int64_t rows = static_cast<std::int64_t>(x_max - x_min + 1);
    if (width * 2 + rows * (n_max + 1) > mem_budget_doubles)
        throw std::runtime_error("hit table: window exceeds memory budget");

    HitTable t;
    t.x_min = x_min;
    t.x_max = x_max;
    t.n_max = n_max;
    t.q.assign(static_cast<std::size_t>(rows),
               std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0));

    std::vector<double> cur(static_cast<std::size_t>(width), 0.0);
    std::vector<double> nxt(static_cast<std::size_t>(width), 0.0);
    auto idx = [half](std::int64_t x) { return static_cast<std::size_t>(x + half); };

    // n = 1: one step straight to 0.
    for (const auto& a : law.atoms)
        if (a.p > 0 && std::llabs(-a.offset) <= half) cur[idx(-a.offset)] = a.p;
    for (int x = x_min; x <= x_max; ++x)
        t.q[static_cast<std::size_t>(x - x_min)][1] = cur[idx(x)];

    for (std::int64_t n = 2; n <= n_max; ++n) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (const auto& a : law.atoms) {
            if (a.p <= 0) continue;
            const double p = a.p;
            const int off = a.offset;
            // h_n(x) += p * h_{n-1}(x + off), skipping x + off == 0
            // (0 is absorbing: being there earlier is not a first hit at n).
            const std::int64_t lo = -half, hi = half;
            for (std::int64_t x = lo; x <= hi; ++x) {
                const std::int64_t y = x + off;
                if (y == 0 || y < lo || y > hi) continue;
                nxt[idx(x)] += p * cur[idx(y)];
            }
        }
        cur.swap(nxt);
        for (int x = x_min; x <= x_max; ++x)
            t.q[static_cast<std::size_t>(x - x_min)][static_cast<std::size_t>(n)] = cur[idx(x)];
    }
    return t;
}

} // namespace pinlab::walks
