#include "pinlab/cache.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace pinlab::io {

namespace {
constexpr char kMagic[8] = {'P', 'I', 'N', 'L', 'A', 'B', 'v', '0'};

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
} // namespace

void write_cache(const std::string& path, const CacheFile& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cache: cannot open " + path);
    os.write(kMagic, 8);
    put<std::uint32_t>(os, 1);
    put<std::uint64_t>(os, c.content_hash);
    put<std::uint64_t>(os, c.n_max);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(c.arrays.size()));
    for (const auto& [name, vals] : c.arrays) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        put<std::uint64_t>(os, vals.size());
        os.write(reinterpret_cast<const char*>(vals.data()),
                 static_cast<std::streamsize>(vals.size() * sizeof(double)));
    }
}

CacheFile read_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cache: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("cache: bad magic in " + path);
    auto version = get<std::uint32_t>(is);
    if (version != 1) throw std::runtime_error("cache: unsupported version");
    CacheFile c;
    c.content_hash = get<std::uint64_t>(is);
    c.n_max = get<std::uint64_t>(is);
    auto n_arrays = get<std::uint32_t>(is);
    for (std::uint32_t i = 0; i < n_arrays; ++i) {
        auto len = get<std::uint32_t>(is);
        std::string name(len, '\0');
        is.read(name.data(), len);
        auto count = get<std::uint64_t>(is);
        std::vector<double> vals(count);
        is.read(reinterpret_cast<char*>(vals.data()),
                static_cast<std::streamsize>(count * sizeof(double)));
        c.arrays.emplace_back(std::move(name), std::move(vals));
    }
    if (!is) throw std::runtime_error("cache: truncated file " + path);
    return c;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("csv: header/column mismatch");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    for (std::size_t c = 0; c < header.size(); ++c)
        std::fprintf(f, "%s%c", header[c].c_str(), c + 1 < header.size() ? ',' : '\n');
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < columns.size(); ++c)
            std::fprintf(f, "%.17g%c", columns[c][r], c + 1 < columns.size() ? ',' : '\n');
    std::fclose(f);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace pinlab::io
