#include "pinlab/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pinlab::mc {

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed,
                     double wall_time_s) {
    MCEstimate e;
    e.n_samples = static_cast<std::int64_t>(values.size());
    e.seed = seed;
    e.wall_time_s = wall_time_s;
    if (values.empty()) return e;
    double m = 0;
    for (double v : values) m += v;
    m /= static_cast<double>(values.size());
    double s2 = 0;
    for (double v : values) s2 += (v - m) * (v - m);
    if (values.size() > 1) s2 /= static_cast<double>(values.size() - 1);
    e.mean = m;
    e.variance = s2;
    e.stderr_ = std::sqrt(s2 / static_cast<double>(values.size()));
    return e;
}

void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t)>& body) {
    if (workers < 1) workers = 1;
    if (workers == 1 || n <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto run = [&] {
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
}

std::vector<double> ensemble(std::int64_t n, int workers,
                             const std::function<double(std::int64_t)>& fn) {
    std::vector<double> out(static_cast<std::size_t>(n));
    parallel_for(n, workers, [&](std::int64_t i) { out[static_cast<std::size_t>(i)] = fn(i); });
    return out;
}

std::vector<std::vector<double>> ensemble_rows(
    std::int64_t n, int workers,
    const std::function<std::vector<double>(std::int64_t)>& fn) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n));
    parallel_for(n, workers, [&](std::int64_t i) { out[static_cast<std::size_t>(i)] = fn(i); });
    return out;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_to_cdf(std::vector<double> samples,
                 const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double F = cdf(samples[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
        d = std::max(d, std::abs(static_cast<double>(i) / n - F));
    }
    return d;
}

} // namespace pinlab::mc
