#pragma once

/// Self-contained FFT for arbitrary lengths: iterative radix-2 for powers of
/// two, Bluestein's chirp-z reindexing otherwise. Quadratic phases are
/// reduced mod 2N before evaluation to keep precision at large N.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace sce {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (cplx& x : a) x /= static_cast<double>(n);
    }
}

/// e^{+-i pi k^2 / n} with k^2 reduced mod 2n.
inline cplx quad_phase(std::uint64_t k, std::uint64_t n, double sign) {
    const std::uint64_t k2 = (k % (2 * n)) * (k % (2 * n)) % (2 * n);
    const double ang = sign * M_PI * static_cast<double>(k2) / static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

inline std::vector<cplx> fft_bluestein(const std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    std::vector<cplx> a(m, cplx{}), b(m, cplx{});
    for (std::size_t k = 0; k < n; ++k)
        a[k] = x[k] * quad_phase(k, n, sign);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx w = quad_phase(k, n, -sign);
        b[k] = w;
        if (k != 0) b[m - k] = w;
    }
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_pow2(a, true);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = a[k] * quad_phase(k, n, sign);
    if (inverse) {
        for (cplx& v : out) v /= static_cast<double>(n);
    }
    return out;
}

}  // namespace detail

/// Raw DFT, X[k] = sum_n x[n] e^{-2 pi i nk/N}. No scaling.
inline std::vector<cplx> fft_raw(std::vector<cplx> x) {
    if (detail::is_pow2(x.size())) {
        detail::fft_pow2(x, false);
        return x;
    }
    return detail::fft_bluestein(x, false);
}

/// Raw inverse, x[n] = (1/N) sum_k X[k] e^{+2 pi i nk/N}.
inline std::vector<cplx> ifft_raw(std::vector<cplx> x) {
    if (detail::is_pow2(x.size())) {
        detail::fft_pow2(x, true);
        return x;
    }
    return detail::fft_bluestein(x, true);
}

/// Circular cross-correlation c[t] = sum_u conj(a[u]) * b[u + t], via FFT.
inline std::vector<cplx> cross_correlate(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> fa = fft_raw(a);
    std::vector<cplx> fb = fft_raw(b);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = std::conj(fa[i]) * fb[i];
    std::vector<cplx> c = ifft_raw(fa);
    return c;
}

}  // namespace sce
