#include "pinlab/fftconv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace pinlab::fftconv {

namespace {

std::mutex plan_mutex;

struct R2CPlans {
    std::size_t n = 0;
    double* buf = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd{}, bwd{};

    explicit R2CPlans(std::size_t n_) : n(n_) {
        buf = fftw_alloc_real(n);
        spec = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, buf, FFTW_ESTIMATE);
    }
    ~R2CPlans() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
        fftw_free(spec);
    }
};

R2CPlans& plans_for(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<R2CPlans>> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<R2CPlans>(n)).first;
    return *it->second;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b) {
    const std::size_t m = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(m);
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& pl = plans_for(n);
    std::vector<fftw_complex> fa(n / 2 + 1);

    std::memset(pl.buf, 0, n * sizeof(double));
    std::memcpy(pl.buf, a.data(), a.size() * sizeof(double));
    fftw_execute(pl.fwd);
    std::memcpy(fa.data(), pl.spec, (n / 2 + 1) * sizeof(fftw_complex));

    std::memset(pl.buf, 0, n * sizeof(double));
    std::memcpy(pl.buf, b.data(), b.size() * sizeof(double));
    fftw_execute(pl.fwd);

    for (std::size_t i = 0; i < n / 2 + 1; ++i) {
        const double re = fa[i][0] * pl.spec[i][0] - fa[i][1] * pl.spec[i][1];
        const double im = fa[i][0] * pl.spec[i][1] + fa[i][1] * pl.spec[i][0];
        pl.spec[i][0] = re;
        pl.spec[i][1] = im;
    }
    fftw_execute(pl.bwd);
    std::vector<double> out(m);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < m; ++i) out[i] = pl.buf[i] * inv;
    return out;
}

} // namespace

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() * b.size() <= 64 * 64) return convolve_direct(a, b);
    return convolve_fft(a, b);
}

void prefix_solve_naive(std::span<const double> zeta, std::span<const double> c,
                        std::span<const double> k, std::span<double> out) {
    const std::size_t L = zeta.size();
    if (c.size() != L || out.size() != L || k.size() < L)
        throw std::invalid_argument("prefix_solve: size mismatch");
    for (std::size_t n = 0; n < L; ++n) {
        double acc = c[n];
        for (std::size_t m = 0; m < n; ++m) acc += out[m] * k[n - m];
        out[n] = zeta[n] * acc;
    }
}

namespace {

// CDQ recursion on [lo, hi): acc holds c plus contributions from solved B's.
void cdq(std::span<const double> zeta, std::span<const double> k,
         std::vector<double>& acc, std::span<double> B, std::size_t lo, std::size_t hi) {
    const std::size_t len = hi - lo;
    if (len <= 256) {
        for (std::size_t n = lo; n < hi; ++n) {
            double s = acc[n];
            for (std::size_t m = lo; m < n; ++m) s += B[m] * k[n - m];
            B[n] = zeta[n] * s;
        }
        return;
    }
    const std::size_t mid = lo + len / 2;
    cdq(zeta, k, acc, B, lo, mid);
    // Push contributions of B[lo,mid) onto acc[mid,hi).
    std::span<const double> left(B.data() + lo, mid - lo);
    std::span<const double> kern(k.data() + 1, hi - lo - 1);
    auto conv = fftconv::convolve(left, kern); // conv[j] ~ gap index j+1 from lo
    for (std::size_t n = mid; n < hi; ++n) {
        // sum_{m in [lo,mid)} B[m] k[n-m] = conv[n-lo-1]
        acc[n] += conv[n - lo - 1];
    }
    cdq(zeta, k, acc, B, mid, hi);
}

} // namespace

void prefix_solve(std::span<const double> zeta, std::span<const double> c,
                  std::span<const double> k, std::span<double> out, bool use_fft) {
    if (!use_fft || zeta.size() <= 512) {
        prefix_solve_naive(zeta, c, k, out);
        return;
    }
    std::vector<double> acc(c.begin(), c.end());
    cdq(zeta, k, acc, out, 0, zeta.size());
}

} // namespace pinlab::fftconv
