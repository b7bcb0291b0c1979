#include "doctest.h"

#include "sce/channel.hpp"

using namespace sce;

TEST_CASE("sample_targets invariants") {
    std::mt19937_64 rng = derive_rng(21, 0);

    for (int i = 0; i < 100; ++i) {
        const TargetSet t = sample_targets(1, 2.0, 0.3, 31, rng);
        CHECK(std::abs(std::abs(t.coeffs[0]) - std::sqrt(2.0)) < 1e-9);
    }

    double min_mag = 1e9;
    for (int i = 0; i < 10000; ++i) {
        const TargetSet t = sample_targets(4, 1.0, 0.5, 31, rng);
        double energy = 0.0;
        for (const cplx& a : t.coeffs) {
            energy += std::norm(a);
            min_mag = std::min(min_mag, std::abs(a));
        }
        CHECK(std::abs(energy - 1.0) < 1e-9);
        CHECK(std::set<Point2>(t.shifts.begin(), t.shifts.end()).size() == 4);
    }
    CHECK(min_mag >= 0.25);

    CHECK_THROWS_AS(sample_targets(2, 1.0, 1.5, 31, rng), invalid_epsilon);
    CHECK_THROWS_AS(sample_targets(2, 1.0, 0.0, 31, rng), invalid_epsilon);
}

TEST_CASE("coefficient magnitudes are exchangeable across coordinates") {
    std::mt19937_64 rng = derive_rng(22, 0);
    const int draws = 4000;
    std::vector<std::vector<double>> mags(4);
    for (int i = 0; i < draws; ++i) {
        const TargetSet t = sample_targets(4, 1.0, 0.3, 101, rng);
        for (int j = 0; j < 4; ++j) mags[j].push_back(std::norm(t.coeffs[j]));
    }
    for (auto& v : mags) std::sort(v.begin(), v.end());
    // two-sample KS statistic between each coordinate pair
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            double d = 0.0;
            std::size_t ia = 0, ib = 0;
            while (ia < mags[a].size() && ib < mags[b].size()) {
                if (mags[a][ia] < mags[b][ib]) ++ia;
                else ++ib;
                d = std::max(d, std::abs(static_cast<double>(ia) - static_cast<double>(ib)) /
                                    draws);
            }
            // 3-sigma-ish threshold for equal distributions at this sample size
            CHECK(d < 2.0 * std::sqrt(2.0 / draws));
        }
}

TEST_CASE("apply_channel examples and linearity") {
    const std::uint64_t n = 32;
    std::mt19937_64 rng = derive_rng(23, 0);
    const Signal s = pseudorandom_signal(n, rng);

    TargetSet ident;
    ident.shifts = {Point2(0, 0, n)};
    ident.coeffs = {cplx(1.0, 0.0)};
    const Signal same = apply_channel(ident, s);
    for (std::uint64_t t = 0; t < n; ++t) CHECK(std::abs(same[t] - s[t]) < 1e-12);

    TargetSet one;
    one.shifts = {Point2(5, 9, n)};
    one.coeffs = {cplx(1.0, 0.0)};
    const Signal shifted = apply_channel(one, s);
    const Signal direct = apply_shift(ShiftOp(ZMod(5, n), ZMod(9, n)), s);
    for (std::uint64_t t = 0; t < n; ++t) CHECK(std::abs(shifted[t] - direct[t]) < 1e-12);

    const TargetSet t1 = sample_targets(2, 1.0, 0.4, n, rng);
    const TargetSet t2 = sample_targets(3, 2.0, 0.4, n, rng);
    TargetSet both;
    both.shifts = t1.shifts;
    both.coeffs = t1.coeffs;
    both.shifts.insert(both.shifts.end(), t2.shifts.begin(), t2.shifts.end());
    both.coeffs.insert(both.coeffs.end(), t2.coeffs.begin(), t2.coeffs.end());
    const Signal sum = apply_channel(both, s);
    const Signal parts_a = apply_channel(t1, s);
    const Signal parts_b = apply_channel(t2, s);
    for (std::uint64_t t = 0; t < n; ++t)
        CHECK(std::abs(sum[t] - parts_a[t] - parts_b[t]) < 1e-10);
}

TEST_CASE("noise calibration") {
    const std::uint64_t n = 1024;
    std::mt19937_64 rng = derive_rng(24, 0);
    const Signal zero(n);

    const Signal untouched = add_noise(zero, NoiseSpec{0.0}, rng);
    for (const cplx& v : untouched.samples) CHECK(std::abs(v) == 0.0);

    const NoiseSpec spec{1.0};
    CHECK(spec.snr(10.0) == doctest::Approx(10.0));

    double total = 0.0;
    double per_sample = 0.0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        const Signal noisy = add_noise(zero, spec, rng);
        double e = 0.0;
        for (const cplx& v : noisy.samples) e += std::norm(v);
        total += e;
        per_sample += std::norm(noisy[0]);
    }
    CHECK(std::abs(total / trials - 1.0) < 0.1);
    const double mean0 = per_sample / trials;
    const double se = (1.0 / static_cast<double>(n)) / std::sqrt(static_cast<double>(trials));
    CHECK(std::abs(mean0 - 1.0 / static_cast<double>(n)) < 5.0 * se);
}
