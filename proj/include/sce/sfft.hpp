#pragma once

/// The modular sparse-FFT engine: discrete Gaussian filter banks,
/// pseudorandom spectral permutation, 1-sparse recovery with thresholding,
/// and the assembled k-sparse frequency estimator with sample accounting.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "sce/errors.hpp"
#include "sce/fft.hpp"
#include "sce/rng.hpp"
#include "sce/signal.hpp"
#include "sce/zn.hpp"

namespace sce {

/// Discrete Gaussian filter F[tau] = exp(-pi tau^2 / (k^2 ln N)) on its
/// essential-support window [-half_width, half_width].
struct FilterSpec {
    std::size_t sparsity = 1;
    std::uint64_t modulus = 1;
    double delta = 0.0;
    std::int64_t half_width = 0;
    std::vector<double> taps;  // taps[|t|]

    double tap(std::int64_t t) const {
        const std::int64_t a = t < 0 ? -t : t;
        return a <= half_width ? taps[static_cast<std::size_t>(a)] : 0.0;
    }

    double dc_gain() const {
        double g = taps[0];
        for (std::size_t i = 1; i < taps.size(); ++i) g += 2.0 * taps[i];
        return g;
    }

    /// Frequency response at offset delta_freq from the band center, for
    /// DC-normalized taps. Real because the taps are symmetric.
    double band_gain(double delta_freq) const {
        double g = taps[0];
        const double w = 2.0 * M_PI * delta_freq / static_cast<double>(modulus);
        for (std::size_t i = 1; i < taps.size(); ++i)
            g += 2.0 * taps[i] * std::cos(w * static_cast<double>(i));
        return g / dc_gain();
    }

    /// Half-width of the central band over which the normalized gain is
    /// guaranteed >= delta (from the Gaussian transform pair, with the
    /// discrete tail folded into delta's slack).
    double guaranteed_passband() const {
        const double n = static_cast<double>(modulus);
        const double k = static_cast<double>(sparsity);
        return (n / k) * std::sqrt(std::log(1.0 / delta) / (M_PI * std::log(n)));
    }
};

inline FilterSpec gaussian_filter(std::size_t k, std::uint64_t n, double delta = M_SQRT1_2) {
    FilterSpec f;
    f.sparsity = k;
    f.modulus = n;
    f.delta = delta;
    const double c = static_cast<double>(k) * static_cast<double>(k) *
                     std::log(static_cast<double>(n));
    f.half_width = static_cast<std::int64_t>(
        std::ceil(static_cast<double>(k) * std::log(static_cast<double>(n))));
    f.taps.resize(static_cast<std::size_t>(f.half_width) + 1);
    for (std::int64_t t = 0; t <= f.half_width; ++t)
        f.taps[static_cast<std::size_t>(t)] =
            std::exp(-M_PI * static_cast<double>(t * t) / c);
    return f;
}

/// All m band outputs S_j[at] = (s * (F e_{(N/m)j}))[at], j = 0..m-1, via
/// folding the windowed product into m residues and one length-m FFT.
/// `normalized` divides the taps by the DC gain.
inline std::vector<cplx> filter_bank_apply(const Signal& s, const FilterSpec& filt,
                                           std::uint64_t m, ZMod at,
                                           bool normalized = true) {
    require_same_modulus(s.modulus(), filt.modulus);
    require_same_modulus(s.modulus(), at.modulus);
    const std::uint64_t n = s.modulus();
    if (m == 0 || n % m != 0) throw band_count_mismatch("band count must divide N");
    const double scale = normalized ? 1.0 / filt.dc_gain() : 1.0;

    // S_j[at] = sum_t F[t] e^{2 pi i j t / m} s[at - t]; fold t mod m.
    std::vector<cplx> folded(m, cplx{});
    for (std::int64_t t = -filt.half_width; t <= filt.half_width; ++t) {
        const std::uint64_t src =
            (at.value + n - static_cast<std::uint64_t>(((t % static_cast<std::int64_t>(n)) +
                                                        static_cast<std::int64_t>(n)) %
                                                       static_cast<std::int64_t>(n))) %
            n;
        const std::uint64_t bucket =
            static_cast<std::uint64_t>(((t % static_cast<std::int64_t>(m)) +
                                        static_cast<std::int64_t>(m)) %
                                       static_cast<std::int64_t>(m));
        folded[bucket] += scale * filt.tap(t) * s[src];
    }
    std::vector<cplx> out = ifft_raw(std::move(folded));
    for (cplx& v : out) v *= static_cast<double>(m);
    return out;
}

/// Pseudorandom spectral permutation (sigma, a): acts on signals by
/// S'[tau] = e^{2 pi i a sigma tau / N} S[sigma tau], so that
/// FS'[omega] = FS[sigma^{-1} omega - a].
struct SpectralPermutation {
    ZMod sigma;
    ZMod shift;  // a

    SpectralPermutation(ZMod s, ZMod a) : sigma(s), shift(a) {
        require_same_modulus(s.modulus, a.modulus);
        mod_inverse(s);  // throws not_invertible for bad sigma
    }

    /// Spike at source frequency u appears at sigma (u + a).
    ZMod image_of(ZMod u) const { return sigma * (u + shift); }
    ZMod preimage_of(ZMod w) const { return mod_inverse(sigma) * w - shift; }
};

inline Signal permute_signal(const Signal& s, const SpectralPermutation& p) {
    require_same_modulus(s.modulus(), p.sigma.modulus);
    const std::uint64_t n = s.modulus();
    Signal out(n);
    const std::uint64_t phase_step = p.shift.value * p.sigma.value % n;
    for (std::uint64_t t = 0; t < n; ++t)
        out[t] = phasor(static_cast<std::int64_t>(phase_step * t % n), n) *
                 s[p.sigma.value * t % n];
    return out;
}

inline SpectralPermutation random_permutation(std::uint64_t n, std::mt19937_64& rng) {
    std::uint64_t sigma = 1;
    do {
        sigma = 1 + uniform_index(rng, n - 1);
    } while (std::gcd(sigma, n) != 1);
    const std::uint64_t a = uniform_index(rng, n);
    return SpectralPermutation(ZMod(static_cast<std::int64_t>(sigma), n),
                               ZMod(static_cast<std::int64_t>(a), n));
}

/// Shared, memoizing sample counter: distinct positions touched on the
/// underlying received signal plus an arithmetic-event tally.
struct SampleCounter {
    std::set<std::uint64_t> positions;
    std::uint64_t ops = 0;

    std::uint64_t sample_count() const { return positions.size(); }
};

/// Counted random access into a (possibly derived) length-N signal. The
/// position map lets derived signals (products, permutations) charge their
/// reads to the correct positions of the base signal.
struct SampleAccess {
    std::uint64_t modulus = 1;
    std::function<cplx(std::uint64_t)> fetch;
    std::function<std::uint64_t(std::uint64_t)> base_position;  // identity if empty
    std::shared_ptr<SampleCounter> counter;

    cplx operator()(std::uint64_t tau) const {
        tau %= modulus;
        if (counter) {
            counter->positions.insert(base_position ? base_position(tau) : tau);
            ++counter->ops;
        }
        return fetch(tau);
    }
};

inline SampleAccess make_sample_access(const Signal& s,
                                       std::shared_ptr<SampleCounter> counter = nullptr) {
    if (!counter) counter = std::make_shared<SampleCounter>();
    SampleAccess a;
    a.modulus = s.modulus();
    a.counter = std::move(counter);
    std::vector<cplx> v = s.samples;
    a.fetch = [v = std::move(v)](std::uint64_t tau) { return v[tau]; };
    return a;
}

struct SfftConfig {
    double mu = 0.0;          // acceptance threshold on |alpha|
    double kappa = 0.5;       // confidence factor: mu = kappa eps sqrt(A/k)
    double delta_conf = 0.05; // per-stage failure budget
    std::size_t t_bit = 4;    // anchor repetitions per digit / separation
    std::size_t n_perm = 3;   // spectral permutations
    std::size_t k = 1;        // sparsity (0 = unknown-k, return all above mu)
    std::size_t n_bands = 0;  // 0 = auto: k ceil(log2 N)
    double tap_floor = 1e-2;  // drop taps below tap_floor * F[0]
    double band_slack = 0.5;  // keep recoveries within (1+slack) half-band

    static double derived_mu(double kappa, double epsilon, double energy, std::size_t k) {
        return kappa * epsilon * std::sqrt(energy / static_cast<double>(k));
    }
};

namespace detail {

/// N = p^L for a prime p small enough for digitwise recovery.
struct RadixInfo {
    std::uint64_t p = 0;
    unsigned exponent = 0;
};

inline std::optional<RadixInfo> prime_power_radix(std::uint64_t n, std::uint64_t max_radix = 64) {
    if (n < 2) return std::nullopt;
    std::uint64_t p = 0;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) { p = d; break; }
    }
    if (p == 0) p = n;  // n prime
    if (p > max_radix) return std::nullopt;
    RadixInfo info{p, 0};
    std::uint64_t m = n;
    while (m % p == 0) { m /= p; ++info.exponent; }
    if (m != 1) return std::nullopt;
    return info;
}

/// Pre-drawn anchor positions: anchors[stage][rep]. Sharing one schedule
/// across filter bands (and across the product signals of one probe) makes
/// their reads land on the same base positions.
struct OneSparseSchedule {
    std::vector<std::vector<std::uint64_t>> anchors;
};

inline OneSparseSchedule make_one_sparse_schedule(std::uint64_t n, std::size_t stages,
                                                  std::size_t t_bit, std::mt19937_64& rng) {
    OneSparseSchedule sched;
    sched.anchors.resize(stages);
    for (auto& row : sched.anchors) {
        row.resize(t_bit);
        for (auto& r : row) r = uniform_index(rng, n);
    }
    return sched;
}

struct OneSparseResult {
    std::uint64_t omega = 0;
    cplx alpha{};
};

/// Digitwise recovery for N = p^L: stage m decides the base-p digit of
/// omega by scoring the p demodulated aggregates over t_bit anchors; the
/// coefficient is re-estimated from all saved samples at the final omega.
template <typename Eval>
OneSparseResult one_sparse_digit(Eval&& eval, std::uint64_t n, const RadixInfo& radix,
                                 const OneSparseSchedule& sched) {
    const std::uint64_t p = radix.p;
    std::uint64_t known = 0, place = 1;
    std::vector<std::pair<std::uint64_t, cplx>> saved;
    for (unsigned stage = 0; stage < radix.exponent; ++stage) {
        const std::uint64_t sep = n / (place * p);
        std::vector<double> score(p, 0.0);
        for (std::uint64_t r : sched.anchors[stage]) {
            std::vector<cplx> y(p);
            for (std::uint64_t t = 0; t < p; ++t) {
                const std::uint64_t pos = (r + t * sep) % n;
                const cplx v = eval(pos);
                saved.emplace_back(pos, v);
                // remove the phase the already-known digits contribute
                // across the separation offset
                y[t] = v * std::conj(phasor(
                               static_cast<std::int64_t>(known % n * (t * sep % n) % n), n));
            }
            for (std::uint64_t c = 0; c < p; ++c) {
                cplx z{};
                for (std::uint64_t t = 0; t < p; ++t)
                    z += y[t] * std::conj(phasor(static_cast<std::int64_t>(c * t % p), p));
                score[c] += std::norm(z);
            }
        }
        std::uint64_t best = 0;
        for (std::uint64_t c = 1; c < p; ++c)
            if (score[c] > score[best]) best = c;
        known += best * place;
        place *= p;
    }
    OneSparseResult out;
    out.omega = known % n;
    cplx acc{};
    for (const auto& [pos, v] : saved)
        acc += v * std::conj(phasor(static_cast<std::int64_t>(out.omega * pos % n), n));
    out.alpha = acc / static_cast<double>(saved.size());
    return out;
}

/// Frequency recovery by phase unwrapping over doubling separations; works
/// for any N (used when N is prime or has a large prime radix).
template <typename Eval>
OneSparseResult one_sparse_unwrap(Eval&& eval, std::uint64_t n,
                                  const OneSparseSchedule& sched) {
    std::vector<std::pair<std::uint64_t, cplx>> saved;
    double b_hat = 0.0;
    std::uint64_t d = 1;
    for (std::size_t stage = 0; stage < sched.anchors.size() && d < 2 * n; ++stage) {
        cplx acc{};
        for (std::uint64_t r : sched.anchors[stage]) {
            const cplx v0 = eval(r % n);
            const cplx v1 = eval((r + d) % n);
            saved.emplace_back(r % n, v0);
            saved.emplace_back((r + d) % n, v1);
            acc += v1 * std::conj(v0);
        }
        double phi = std::arg(acc) / (2.0 * M_PI);  // in (-1/2, 1/2]
        if (stage == 0) {
            b_hat = phi < 0.0 ? phi + 1.0 : phi;
        } else {
            const double wraps = std::round(static_cast<double>(d) * b_hat - phi);
            b_hat = (wraps + phi) / static_cast<double>(d);
        }
        d <<= 1;
    }
    OneSparseResult out;
    const std::int64_t w = static_cast<std::int64_t>(
        std::llround(b_hat * static_cast<double>(n)));
    out.omega = static_cast<std::uint64_t>(((w % static_cast<std::int64_t>(n)) +
                                            static_cast<std::int64_t>(n)) %
                                           static_cast<std::int64_t>(n));
    cplx acc{};
    for (const auto& [pos, v] : saved)
        acc += v * std::conj(phasor(static_cast<std::int64_t>(out.omega * pos % n), n));
    out.alpha = acc / static_cast<double>(saved.size());
    return out;
}

inline std::size_t unwrap_stage_count(std::uint64_t n) {
    std::size_t s = 1;
    std::uint64_t d = 1;
    while (d < n) { d <<= 1; ++s; }
    return s;
}

template <typename Eval>
OneSparseResult one_sparse_recover(Eval&& eval, std::uint64_t n,
                                   const OneSparseSchedule& sched) {
    const auto radix = prime_power_radix(n);
    if (radix && radix->exponent > 1)
        return one_sparse_digit(eval, n, *radix, sched);
    return one_sparse_unwrap(eval, n, sched);
}

inline std::size_t one_sparse_stages(std::uint64_t n) {
    const auto radix = prime_power_radix(n);
    if (radix && radix->exponent > 1) return radix->exponent;
    return unwrap_stage_count(n);
}

}  // namespace detail

/// 1-sparse recovery for S[tau] ~ alpha e^{2 pi i omega tau / N} + noise:
/// digitwise when N is a small prime power, phase unwrapping otherwise.
/// Returns the pair only when |alpha_hat| clears the threshold mu.
inline std::optional<std::pair<ZMod, cplx>> bit_by_bit(const SampleAccess& access,
                                                       const SfftConfig& cfg,
                                                       std::mt19937_64& rng) {
    const std::uint64_t n = access.modulus;
    const auto sched = detail::make_one_sparse_schedule(
        n, detail::one_sparse_stages(n), std::max<std::size_t>(1, cfg.t_bit), rng);
    const auto res = detail::one_sparse_recover(
        [&](std::uint64_t tau) { return access(tau); }, n, sched);
    if (std::abs(res.alpha) <= cfg.mu) return std::nullopt;
    return std::make_pair(ZMod(static_cast<std::int64_t>(res.omega), n), res.alpha);
}

/// Randomized coefficient estimate at a known frequency:
/// alpha_hat = (1/m) sum_i S[tau_i] e^{-2 pi i omega tau_i / N}.
inline cplx threshold_estimate(const SampleAccess& access, ZMod omega, std::size_t m,
                               std::mt19937_64& rng) {
    const std::uint64_t n = access.modulus;
    cplx acc{};
    if (m >= n) {
        // full census: every position once
        for (std::uint64_t tau = 0; tau < n; ++tau)
            acc += access(tau) *
                   std::conj(phasor(static_cast<std::int64_t>(omega.value * tau % n), n));
        return acc / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t tau = uniform_index(rng, n);
        acc += access(tau) *
               std::conj(phasor(static_cast<std::int64_t>(omega.value * tau % n), n));
    }
    return acc / static_cast<double>(m);
}

namespace detail {

/// Signed circular distance from a to b in Z_N, in (-N/2, N/2].
inline double circ_delta(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
    double d = static_cast<double>(a) - static_cast<double>(b);
    const double half = static_cast<double>(n) / 2.0;
    while (d > half) d -= static_cast<double>(n);
    while (d <= -half) d += static_cast<double>(n);
    return d;
}

}  // namespace detail

/// k-sparse frequency recovery: n_perm spectral permutations, a Gaussian
/// filter bank of n_bands band samplers per permutation, 1-sparse recovery
/// per band, then a majority vote across permutations. Returns (omega,
/// alpha_hat) pairs sorted by magnitude; counters accumulate on the access.
inline std::vector<std::pair<ZMod, cplx>> sfft(const SampleAccess& access,
                                               const SfftConfig& cfg,
                                               std::mt19937_64& rng) {
    const std::uint64_t n = access.modulus;
    const std::size_t kk = std::max<std::size_t>(1, cfg.k);
    const std::size_t n_bands =
        cfg.n_bands ? cfg.n_bands
                    : kk * static_cast<std::size_t>(
                               std::ceil(std::log2(static_cast<double>(n))));
    const FilterSpec filt = gaussian_filter(kk, n);

    // truncated symmetric tap list (offset, normalized weight)
    std::vector<std::pair<std::int64_t, double>> taps;
    {
        const double gain = filt.dc_gain();
        for (std::int64_t t = -filt.half_width; t <= filt.half_width; ++t) {
            const double w = filt.tap(t);
            if (w >= cfg.tap_floor * filt.taps[0]) taps.emplace_back(t, w / gain);
        }
    }

    const double half_band = static_cast<double>(n) / (2.0 * static_cast<double>(n_bands));
    const std::size_t stages = detail::one_sparse_stages(n);
    const std::size_t t_bit = std::max<std::size_t>(1, cfg.t_bit);

    std::map<std::uint64_t, std::vector<cplx>> votes;
    for (std::size_t perm_i = 0; perm_i < cfg.n_perm; ++perm_i) {
        const SpectralPermutation perm = random_permutation(n, rng);
        const std::uint64_t sigma = perm.sigma.value;
        const std::uint64_t phase_step = perm.shift.value * sigma % n;

        // permuted access, memoized so overlapping tap windows re-read cheaply
        std::unordered_map<std::uint64_t, cplx> cache;
        auto permuted = [&](std::uint64_t tau) -> cplx {
            auto it = cache.find(tau);
            if (it != cache.end()) return it->second;
            cplx v = phasor(static_cast<std::int64_t>(phase_step * tau % n), n) *
                     access(sigma * tau % n);
            cache.emplace(tau, v);
            return v;
        };

        const auto sched = detail::make_one_sparse_schedule(n, stages, t_bit, rng);

        std::map<std::uint64_t, std::pair<cplx, double>> per_perm;  // u -> (alpha, |delta|)
        for (std::size_t j = 0; j < n_bands; ++j) {
            const std::uint64_t center = static_cast<std::uint64_t>(std::llround(
                static_cast<double>(j) * static_cast<double>(n) /
                static_cast<double>(n_bands))) % n;
            auto band_eval = [&](std::uint64_t tau) -> cplx {
                cplx acc{};
                for (const auto& [t, w] : taps) {
                    const std::uint64_t src = static_cast<std::uint64_t>(
                        ((static_cast<std::int64_t>(tau) - t) %
                             static_cast<std::int64_t>(n) +
                         static_cast<std::int64_t>(n)) %
                        static_cast<std::int64_t>(n));
                    const std::int64_t tm =
                        ((t % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) %
                        static_cast<std::int64_t>(n);
                    acc += w *
                           phasor(static_cast<std::int64_t>(
                                      center * static_cast<std::uint64_t>(tm) % n), n) *
                           permuted(src);
                }
                if (access.counter) access.counter->ops += taps.size();
                return acc;
            };
            const auto res = detail::one_sparse_recover(band_eval, n, sched);
            const double delta = detail::circ_delta(res.omega, center, n);
            if (std::abs(delta) > (1.0 + cfg.band_slack) * half_band) continue;
            const double gain = filt.band_gain(delta);
            if (gain < 0.2) continue;
            const cplx alpha = res.alpha / gain;
            if (std::abs(alpha) <= cfg.mu) continue;
            const std::uint64_t u = perm.preimage_of(ZMod(
                static_cast<std::int64_t>(res.omega), n)).value;
            auto it = per_perm.find(u);
            if (it == per_perm.end() || std::abs(delta) < it->second.second)
                per_perm[u] = {alpha, std::abs(delta)};
        }
        for (const auto& [u, av] : per_perm) votes[u].push_back(av.first);
    }

    const std::size_t vote_min =
        std::max<std::size_t>(1, (cfg.n_perm + 2) / 3);
    std::vector<std::pair<ZMod, cplx>> out;
    for (auto& [u, alphas] : votes) {
        if (alphas.size() < vote_min) continue;
        std::stable_sort(alphas.begin(), alphas.end(),
                         [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });
        const cplx alpha = alphas[alphas.size() / 2];
        if (std::abs(alpha) <= cfg.mu) continue;
        out.emplace_back(ZMod(static_cast<std::int64_t>(u), n), alpha);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a.second), mb = std::abs(b.second);
        if (ma != mb) return ma > mb;
        return a.first.value < b.first.value;
    });
    if (cfg.k > 0 && out.size() > cfg.k) out.resize(cfg.k);
    return out;
}

}  // namespace sce
