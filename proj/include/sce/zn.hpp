#pragma once

/// Arithmetic on Z_N and the geometry of lines through the origin in the
/// Z_N^2 time-frequency plane: spans, genericity, transversality and the
/// incidence intersections used by the estimation pipelines.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "sce/errors.hpp"
#include "sce/rng.hpp"

namespace sce {

/// Residue in [0, N) together with its modulus.
struct ZMod {
    std::uint64_t value = 0;
    std::uint64_t modulus = 1;

    ZMod() = default;
    ZMod(std::int64_t v, std::uint64_t n) : modulus(n) {
        std::int64_t m = static_cast<std::int64_t>(n);
        std::int64_t r = v % m;
        if (r < 0) r += m;
        value = static_cast<std::uint64_t>(r);
    }

    friend bool operator==(const ZMod&, const ZMod&) = default;
    friend auto operator<=>(const ZMod&, const ZMod&) = default;
};

inline void require_same_modulus(std::uint64_t a, std::uint64_t b) {
    if (a != b) throw modulus_mismatch("operands have different moduli");
}

inline ZMod operator+(ZMod a, ZMod b) {
    require_same_modulus(a.modulus, b.modulus);
    return ZMod(static_cast<std::int64_t>((a.value + b.value) % a.modulus), a.modulus);
}

inline ZMod operator-(ZMod a, ZMod b) {
    require_same_modulus(a.modulus, b.modulus);
    return ZMod(static_cast<std::int64_t>(a.value) - static_cast<std::int64_t>(b.value), a.modulus);
}

inline ZMod operator*(ZMod a, ZMod b) {
    require_same_modulus(a.modulus, b.modulus);
    return ZMod(static_cast<std::int64_t>((a.value * b.value) % a.modulus), a.modulus);
}

inline ZMod operator-(ZMod a) { return ZMod(-static_cast<std::int64_t>(a.value), a.modulus); }

/// Multiplicative inverse mod N via extended Euclid.
inline ZMod mod_inverse(ZMod a) {
    std::int64_t n = static_cast<std::int64_t>(a.modulus);
    std::int64_t r0 = n, r1 = static_cast<std::int64_t>(a.value);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw not_invertible("element not invertible modulo N");
    return ZMod(s0, a.modulus);
}

/// A point (tau, omega) in Z_N^2.
struct Point2 {
    ZMod tau;
    ZMod omega;

    Point2() = default;
    Point2(std::int64_t t, std::int64_t w, std::uint64_t n) : tau(t, n), omega(w, n) {}
    Point2(ZMod t, ZMod w) : tau(t), omega(w) { require_same_modulus(t.modulus, w.modulus); }

    std::uint64_t modulus() const { return tau.modulus; }

    friend bool operator==(const Point2&, const Point2&) = default;
    friend auto operator<=>(const Point2&, const Point2&) = default;
};

inline Point2 operator+(const Point2& a, const Point2& b) { return {a.tau + b.tau, a.omega + b.omega}; }
inline Point2 operator-(const Point2& a, const Point2& b) { return {a.tau - b.tau, a.omega - b.omega}; }

/// A generic line through the origin: the span of (1, a) for a finite slope
/// a, or the omega-axis {(0, omega)} for the infinite slope.
struct Line {
    std::optional<ZMod> slope;  // nullopt == infinite slope (the omega-axis)
    std::uint64_t modulus = 1;

    static Line finite(std::int64_t a, std::uint64_t n) { return Line{ZMod(a, n), n}; }
    static Line infinite(std::uint64_t n) { return Line{std::nullopt, n}; }

    bool is_infinite() const { return !slope.has_value(); }

    /// Generator of the span: (1, a) or (0, 1).
    Point2 generator() const {
        if (is_infinite()) return Point2(0, 1, modulus);
        return Point2(1, static_cast<std::int64_t>(slope->value), modulus);
    }

    /// The t-th point of the line parameterization.
    Point2 point_at(std::uint64_t t) const {
        if (is_infinite()) return Point2(0, static_cast<std::int64_t>(t), modulus);
        return Point2(static_cast<std::int64_t>(t),
                      static_cast<std::int64_t>(t * slope->value % modulus), modulus);
    }

    friend bool operator==(const Line&, const Line&) = default;
};

/// Z_N-span of a generator point; size N/gcd(a, b, N).
inline std::set<Point2> line_span(const Point2& generator) {
    std::set<Point2> span;
    const std::uint64_t n = generator.modulus();
    for (std::uint64_t t = 0; t < n; ++t) {
        span.insert(Point2(static_cast<std::int64_t>(t * generator.tau.value % n),
                           static_cast<std::int64_t>(t * generator.omega.value % n), n));
    }
    return span;
}

/// Two generic lines are transversal iff their spans meet only at the origin.
/// For generators (1,a1), (1,a2) this is gcd(a1-a2, N) == 1; any finite line
/// is transversal to the omega-axis.
inline bool are_transversal(const Line& l1, const Line& l2) {
    if (l1.modulus != l2.modulus) throw modulus_mismatch("lines over different moduli");
    if (l1.is_infinite() || l2.is_infinite()) return l1.is_infinite() != l2.is_infinite();
    const std::uint64_t n = l1.modulus;
    const std::int64_t diff = static_cast<std::int64_t>(l1.slope->value) -
                              static_cast<std::int64_t>(l2.slope->value);
    return std::gcd(static_cast<std::uint64_t>(std::abs(diff)) % n, n) == 1;
}

/// Draw `count` pairwise-transversal generic lines with distinct slopes,
/// uniformly from the N+1 slopes {0,...,N-1, infinity}.
inline std::vector<Line> random_transversal_lines(std::size_t count, std::uint64_t n,
                                                  std::mt19937_64& rng,
                                                  bool finite_only = false) {
    const std::uint64_t slopes = finite_only ? n : n + 1;
    if (count > slopes) throw insufficient_slopes("more lines requested than available slopes");
    std::vector<Line> lines;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 64 * (count + 1) * (n + 1);
    while (lines.size() < count) {
        if (++attempts > max_attempts)
            throw insufficient_slopes("could not find enough pairwise-transversal slopes");
        const std::uint64_t s = uniform_index(rng, slopes);
        Line candidate = (s == n) ? Line::infinite(n)
                                  : Line::finite(static_cast<std::int64_t>(s), n);
        bool ok = true;
        for (const Line& l : lines) {
            if (l == candidate || !are_transversal(l, candidate)) { ok = false; break; }
        }
        if (ok) lines.push_back(candidate);
    }
    return lines;
}

/// Intersection of two candidate point sets (duplicates collapsed).
inline std::set<Point2> triple_incidence(const std::vector<Point2>& cand_a,
                                         const std::vector<Point2>& cand_b) {
    std::set<Point2> a(cand_a.begin(), cand_a.end());
    std::set<Point2> b(cand_b.begin(), cand_b.end());
    std::set<Point2> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

/// Decompose p = x + y with x on `first` and y on `second` (transversal,
/// finite or infinite slopes). Returns {x, y}.
inline std::pair<Point2, Point2> decompose_along(const Point2& p, const Line& first,
                                                 const Line& second) {
    const std::uint64_t n = p.modulus();
    if (!are_transversal(first, second)) throw non_transversal_probe("decomposition needs transversal lines");
    if (first.is_infinite()) {
        // x = (0, w), y = (t, a2 t): t = p.tau, w = p.omega - a2 t.
        ZMod t = p.tau;
        ZMod w = p.omega - *second.slope * t;
        return {Point2(ZMod(0, n), w), Point2(t, *second.slope * t)};
    }
    if (second.is_infinite()) {
        ZMod t = p.tau;
        ZMod w = p.omega - *first.slope * t;
        return {Point2(t, *first.slope * t), Point2(ZMod(0, n), w)};
    }
    // t1 + t2 = p.tau, a1 t1 + a2 t2 = p.omega  =>  t1 = (p.omega - a2 p.tau)/(a1 - a2).
    ZMod a1 = *first.slope, a2 = *second.slope;
    ZMod t1 = (p.omega - a2 * p.tau) * mod_inverse(a1 - a2);
    ZMod t2 = p.tau - t1;
    return {Point2(t1, a1 * t1), Point2(t2, a2 * t2)};
}

/// Projection of p onto `onto` along `along` (the `onto` component of the
/// decomposition of p in the direct sum onto (+) along).
inline Point2 project_along(const Point2& p, const Line& onto, const Line& along) {
    return decompose_along(p, onto, along).first;
}

}  // namespace sce
