#pragma once

/// Digital signals in L^2(Z_N): time-frequency shifts, chirp bases, the
/// unitary DFT and ambiguity-function evaluation (pointwise, fast on a line,
/// and a brute-force oracle for tests).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "sce/errors.hpp"
#include "sce/fft.hpp"
#include "sce/zn.hpp"

namespace sce {

/// Unit phasor e^{2 pi i num/den} with num an integer (reduced mod den).
inline cplx phasor(std::int64_t num, std::uint64_t den) {
    std::int64_t r = num % static_cast<std::int64_t>(den);
    if (r < 0) r += static_cast<std::int64_t>(den);
    const double ang = 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(den);
    return {std::cos(ang), std::sin(ang)};
}

struct Signal {
    std::vector<cplx> samples;

    Signal() = default;
    explicit Signal(std::size_t n) : samples(n, cplx{}) {}
    explicit Signal(std::vector<cplx> v) : samples(std::move(v)) {}

    std::uint64_t modulus() const { return samples.size(); }
    cplx& operator[](std::size_t i) { return samples[i]; }
    const cplx& operator[](std::size_t i) const { return samples[i]; }

    double norm() const {
        double s = 0.0;
        for (const cplx& x : samples) s += std::norm(x);
        return std::sqrt(s);
    }
};

inline cplx inner_product(const Signal& a, const Signal& b) {
    require_same_modulus(a.modulus(), b.modulus());
    cplx acc{};
    for (std::size_t i = 0; i < a.samples.size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

inline Signal delta_signal(std::uint64_t n, std::uint64_t tau) {
    Signal s(n);
    s[tau % n] = 1.0;
    return s;
}

/// e_omega[tau] = (1/sqrt N) e^{2 pi i omega tau / N}.
inline Signal exponential_signal(std::uint64_t n, std::uint64_t omega) {
    Signal s(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t t = 0; t < n; ++t)
        s[t] = scale * phasor(static_cast<std::int64_t>(omega % n * t % n), n);
    return s;
}

/// Unit-norm pseudorandom signal with i.i.d. uniform phases.
inline Signal pseudorandom_signal(std::uint64_t n, std::mt19937_64& rng) {
    Signal s(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t t = 0; t < n; ++t) {
        const double ang = 2.0 * M_PI * uniform01(rng);
        s[t] = scale * cplx(std::cos(ang), std::sin(ang));
    }
    return s;
}

/// Chirp basis element of the line: eigenvector of every H_{tau,omega} with
/// (tau,omega) on the line. Finite slope a uses the quadratic-phase formula
/// with 2^{-1} = (N+1)/2 and needs N odd; slope 0 gives e_index and the
/// infinite slope gives delta_index for any N.
inline Signal basis_signal(const Line& line, ZMod index) {
    require_same_modulus(line.modulus, index.modulus);
    const std::uint64_t n = line.modulus;
    if (line.is_infinite()) return delta_signal(n, index.value);
    const std::uint64_t a = line.slope->value;
    if (a == 0) return exponential_signal(n, index.value);
    if (n % 2 == 0) throw even_modulus("chirps with nonzero finite slope need odd N");
    const std::uint64_t inv2 = (n + 1) / 2;
    Signal s(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::uint64_t t = 0; t < n; ++t) {
        const std::uint64_t quad = inv2 * a % n * (t * t % n) % n;
        const std::uint64_t lin = index.value * t % n;
        s[t] = scale * phasor(static_cast<std::int64_t>((quad + lin) % n), n);
    }
    return s;
}

/// Discrete time-frequency shift H_{tau,omega}.
struct ShiftOp {
    ZMod tau;
    ZMod omega;

    ShiftOp(ZMod t, ZMod w) : tau(t), omega(w) { require_same_modulus(t.modulus, w.modulus); }
    explicit ShiftOp(const Point2& p) : tau(p.tau), omega(p.omega) {}
};

/// (H_{tau0,omega0} S)[tau] = e^{2 pi i omega0 tau / N} S[tau - tau0].
inline Signal apply_shift(const ShiftOp& op, const Signal& s) {
    require_same_modulus(op.tau.modulus, s.modulus());
    const std::uint64_t n = s.modulus();
    Signal out(n);
    for (std::uint64_t t = 0; t < n; ++t) {
        const std::uint64_t src = (t + n - op.tau.value) % n;
        out[t] = phasor(static_cast<std::int64_t>(op.omega.value * t % n), n) * s[src];
    }
    return out;
}

/// Unitary DFT: FS[omega] = <S, e_omega> = (1/sqrt N) sum S[tau] e^{-2 pi i omega tau/N}.
inline Signal dft(const Signal& s) {
    std::vector<cplx> v = fft_raw(s.samples);
    const double scale = 1.0 / std::sqrt(static_cast<double>(s.modulus()));
    for (cplx& x : v) x *= scale;
    return Signal(std::move(v));
}

inline Signal idft(const Signal& s) {
    std::vector<cplx> v = ifft_raw(s.samples);
    const double scale = std::sqrt(static_cast<double>(s.modulus()));
    for (cplx& x : v) x *= scale;
    return Signal(std::move(v));
}

/// A(S,R)[tau,omega] = <H_{tau,omega} S, R>.
inline cplx ambiguity_point(const Signal& s, const Signal& r, const Point2& at) {
    require_same_modulus(s.modulus(), r.modulus());
    require_same_modulus(s.modulus(), at.modulus());
    const std::uint64_t n = s.modulus();
    cplx acc{};
    for (std::uint64_t t = 0; t < n; ++t) {
        const std::uint64_t src = (t + n - at.tau.value) % n;
        acc += phasor(static_cast<std::int64_t>(at.omega.value * t % n), n) * s[src] *
               std::conj(r[t]);
    }
    return acc;
}

/// Ambiguity values along offset + line, indexed by the line parameter.
struct AmbiguityLineProfile {
    Line base_line;
    Point2 offset;
    std::vector<cplx> values;
};

namespace detail {

/// An N-periodic quadratic phase Q[t] with Q[tau] Q[v] conj(Q[v-tau]) =
/// e^{2 pi i a tau v / N} exactly. For odd N this is e^{2 pi i 2^{-1} a t^2/N};
/// for even N, e^{i pi a t^2 / N} with the exponent reduced mod 2N is
/// already N-periodic and satisfies the same identity.
inline cplx quad_line_phasor(std::uint64_t a, std::uint64_t t, std::uint64_t n, double sign) {
    if (n % 2 == 1) {
        const std::uint64_t h = (n + 1) / 2;
        const std::uint64_t q = h * (a % n) % n * (t % n * (t % n) % n) % n;
        return phasor(sign < 0 ? -static_cast<std::int64_t>(q)
                               : static_cast<std::int64_t>(q),
                      n);
    }
    const std::uint64_t two_n = 2 * n;
    const std::uint64_t q = a % two_n * (t % two_n * (t % two_n) % two_n) % two_n;
    const double ang = sign * M_PI * static_cast<double>(q) / static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace detail

/// All N ambiguity values on offset + line in O(N log N) via the
/// modulated-convolution identity (quadratic phases pulled out of the
/// correlation sum; one FFT-sized correlation per call).
inline AmbiguityLineProfile ambiguity_on_line(const Signal& s, const Signal& r,
                                              const Line& line, const Point2& offset) {
    require_same_modulus(s.modulus(), r.modulus());
    require_same_modulus(s.modulus(), line.modulus);
    const std::uint64_t n = s.modulus();
    AmbiguityLineProfile profile{line, offset, std::vector<cplx>(n)};

    if (line.is_infinite()) {
        // Points (tau0, t + omega0): one inverse FFT over the modulation index.
        const std::uint64_t tau0 = offset.tau.value;
        std::vector<cplx> x(n);
        for (std::uint64_t t = 0; t < n; ++t)
            x[t] = s[(t + n - tau0) % n] * std::conj(r[t]);
        std::vector<cplx> arr = ifft_raw(std::move(x));
        for (std::uint64_t t = 0; t < n; ++t) {
            const std::uint64_t w = (t + offset.omega.value) % n;
            profile.values[t] = static_cast<double>(n) * arr[w];
        }
        return profile;
    }

    // Finite slope a: points (tau0 + t, a (tau0+t) + wshift) with
    // wshift = omega0 - a tau0; A(tau, a tau + w) = pref(tau) (G1 x-corr G2)[tau].
    const std::uint64_t a = line.slope->value;
    const std::uint64_t wshift =
        (offset.omega.value + n - a * offset.tau.value % n) % n;
    std::vector<cplx> g1(n), g2(n);
    for (std::uint64_t u = 0; u < n; ++u) {
        g1[u] = std::conj(s[u] * phasor(static_cast<std::int64_t>(wshift * u % n), n) *
                          detail::quad_line_phasor(a, u, n, -1.0));
        g2[u] = std::conj(r[u]) * detail::quad_line_phasor(a, u, n, +1.0);
    }
    std::vector<cplx> corr = cross_correlate(g1, g2);
    for (std::uint64_t t = 0; t < n; ++t) {
        const std::uint64_t tau = (t + offset.tau.value) % n;
        const cplx pref = detail::quad_line_phasor(a, tau, n, +1.0) *
                          phasor(static_cast<std::int64_t>(wshift * tau % n), n);
        profile.values[t] = pref * corr[tau];
    }
    return profile;
}

/// Brute-force ambiguity over the whole plane; entry (tau, omega).
inline std::vector<std::vector<cplx>> ambiguity_full_oracle(const Signal& s, const Signal& r,
                                                            std::uint64_t cap = 128) {
    const std::uint64_t n = s.modulus();
    if (n > cap) throw oracle_too_large("modulus exceeds the brute-force oracle cap");
    std::vector<std::vector<cplx>> out(n, std::vector<cplx>(n));
    for (std::uint64_t tau = 0; tau < n; ++tau)
        for (std::uint64_t w = 0; w < n; ++w)
            out[tau][w] = ambiguity_point(s, r, Point2(static_cast<std::int64_t>(tau),
                                                       static_cast<std::int64_t>(w), n));
    return out;
}

/// Indices of the k largest magnitudes, ordered by magnitude then lowest index.
inline std::vector<std::size_t> top_peaks(const std::vector<cplx>& values, std::size_t k) {
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(values[a]), mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    idx.resize(std::min(k, idx.size()));
    return idx;
}

}  // namespace sce
