#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pinlab::mc {

struct MCEstimate {
    double mean = 0;
    double variance = 0; // unbiased sample variance
    double stderr_ = 0;  // sqrt(variance / n)
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0;
};

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed,
                     double wall_time_s = 0);

// Runs fn(sample_index) for indices [0, n), distributing over `workers`
// threads. Results land in a preallocated slot per index and are aggregated
// in index order, so the output is identical for any worker count.
std::vector<double> ensemble(std::int64_t n, int workers,
                             const std::function<double(std::int64_t)>& fn);

// Same, for samples producing several columns.
std::vector<std::vector<double>> ensemble_rows(
    std::int64_t n, int workers,
    const std::function<std::vector<double>(std::int64_t)>& fn);

void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t)>& body);

// Two-sided Kolmogorov-Smirnov distance between empirical samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// KS distance of samples against a CDF.
double ks_to_cdf(std::vector<double> samples,
                 const std::function<double(double)>& cdf);

} // namespace pinlab::mc
