#pragma once

/// The digital channel simulator: epsilon-constrained target draws, the
/// k-sparse superposition of time-frequency shifts, and calibrated
/// circular-Gaussian noise.

#include <cstdint>
#include <vector>

#include "sce/rng.hpp"
#include "sce/signal.hpp"
#include "sce/zn.hpp"

namespace sce {

/// The channel's k shifts and attenuation coefficients. Invariants:
/// sum |alpha_j|^2 = A, min |alpha_j| >= eps sqrt(A/k), shifts distinct.
struct TargetSet {
    std::vector<Point2> shifts;
    std::vector<cplx> coeffs;
    double energy = 1.0;   // A
    double epsilon = 0.5;  // eps

    std::size_t sparsity() const { return shifts.size(); }
};

struct NoiseSpec {
    double sigma_sq = 0.0;  // total noise power; per-sample variance sigma_sq / N

    double snr(double energy) const { return energy / sigma_sq; }
};

/// Draw coefficients uniformly from the eps-constrained sphere (rejection
/// from the uniform sphere of radius sqrt(A)) and shifts uniformly without
/// replacement on Z_N^2.
inline TargetSet sample_targets(std::size_t k, double energy, double epsilon, std::uint64_t n,
                                std::mt19937_64& rng) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw invalid_epsilon("epsilon must lie in (0,1)");
    TargetSet targets;
    targets.energy = energy;
    targets.epsilon = epsilon;
    if (k == 0) return targets;

    const double floor = epsilon * std::sqrt(energy / static_cast<double>(k));
    while (true) {
        std::vector<cplx> x(k);
        double norm_sq = 0.0;
        for (cplx& c : x) {
            c = complex_gaussian(rng);
            norm_sq += std::norm(c);
        }
        const double scale = std::sqrt(energy / norm_sq);
        bool ok = true;
        for (cplx& c : x) {
            c *= scale;
            if (std::abs(c) < floor) { ok = false; }
        }
        if (ok) { targets.coeffs = std::move(x); break; }
    }

    std::set<Point2> chosen;
    while (chosen.size() < k) {
        const std::uint64_t t = uniform_index(rng, n);
        const std::uint64_t w = uniform_index(rng, n);
        chosen.insert(Point2(static_cast<std::int64_t>(t), static_cast<std::int64_t>(w), n));
    }
    targets.shifts.assign(chosen.begin(), chosen.end());
    return targets;
}

/// R = sum_j alpha_j H_{tau_j, omega_j} S (noiseless).
inline Signal apply_channel(const TargetSet& targets, const Signal& s) {
    const std::uint64_t n = s.modulus();
    Signal out(n);
    for (std::size_t j = 0; j < targets.sparsity(); ++j) {
        require_same_modulus(targets.shifts[j].modulus(), n);
        const Signal shifted = apply_shift(ShiftOp(targets.shifts[j]), s);
        for (std::uint64_t t = 0; t < n; ++t) out[t] += targets.coeffs[j] * shifted[t];
    }
    return out;
}

/// Add i.i.d. circularly-symmetric complex Gaussian noise with per-sample
/// variance sigma_sq / N.
inline Signal add_noise(const Signal& s, const NoiseSpec& spec, std::mt19937_64& rng) {
    Signal out = s;
    if (spec.sigma_sq <= 0.0) return out;
    const double per_sample = std::sqrt(spec.sigma_sq / static_cast<double>(s.modulus()));
    for (cplx& x : out.samples) x += per_sample * complex_gaussian(rng);
    return out;
}

}  // namespace sce
