#pragma once

#include <cstdint>

namespace pinlab::rng {

// SplitMix64 finalizer. Used as the mixing function of the counter-based
// generator below.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Inverse of the standard normal CDF, |error| < 2e-16 after one Halley step.
double inv_normal_cdf(double p);

// Counter-based stream: every output is a pure function of (key, counter),
// so ensembles are reproducible independently of scheduling or worker count.
//
// Stream construction (documented contract of the harness):
//   key = mix64(master_seed) XOR (stream_id * 0x9e3779b97f4a7c15)
//   output[i] = mix64(key + i * 0x9e3779b97f4a7c15)
class CounterStream {
public:
    CounterStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : key_(mix64(master_seed) ^ (stream_id * 0x9e3779b97f4a7c15ULL)) {}

    std::uint64_t at(std::uint64_t counter) const {
        return mix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
    }

    std::uint64_t next_u64() { return at(ctr_++); }

    // Uniform on (0,1), never exactly 0 or 1.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_normal() { return inv_normal_cdf(next_unit()); }

    std::uint64_t counter() const { return ctr_; }
    void set_counter(std::uint64_t c) { ctr_ = c; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace pinlab::rng
