#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pinlab::io {

// Binary cache layout (all little-endian):
//   bytes 0..7   magic "PINLABv0"
//   u32          format version (currently 1)
//   u64          content hash (e.g. step-law hash)
//   u64          n_max
//   u32          number of named arrays
//   per array:   u32 name length, name bytes, u64 count, count f64 values
struct CacheFile {
    std::uint64_t content_hash = 0;
    std::uint64_t n_max = 0;
    std::vector<std::pair<std::string, std::vector<double>>> arrays;
};

void write_cache(const std::string& path, const CacheFile& c);
CacheFile read_cache(const std::string& path);

// CSV with a header row; each column same length.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::uint64_t fnv1a(const std::string& s);

} // namespace pinlab::io
