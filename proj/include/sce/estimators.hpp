#pragma once

/// The channel estimators: pseudorandom matched filter, incidence method
/// (with the cross-method consistency filter), the ambiguity-to-SFFT
/// reduction, and the sublinear sparse estimator built on it.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sce/channel.hpp"
#include "sce/errors.hpp"
#include "sce/sfft.hpp"
#include "sce/signal.hpp"
#include "sce/zn.hpp"

namespace sce {

struct EstimationReport {
    std::string method;
    std::vector<std::pair<Point2, cplx>> detected;  // shift, coefficient estimate
    std::uint64_t samples = 0;  // distinct positions of R touched
    std::uint64_t ops = 0;
    double wall_time_s = 0.0;
};

/// Transmitted probe: either a pseudorandom signal or a normalized sum of
/// chirps on pairwise-transversal lines.
struct ProbeSignal {
    struct ChirpComponent {
        Line line;
        ZMod index;
    };

    std::vector<ChirpComponent> components;  // empty == pseudorandom
    Signal realized;

    bool is_pseudorandom() const { return components.empty(); }
};

inline ProbeSignal make_pseudorandom_probe(std::uint64_t n, std::mt19937_64& rng) {
    ProbeSignal p;
    p.realized = pseudorandom_signal(n, rng);
    return p;
}

inline ProbeSignal make_chirp_probe(const std::vector<Line>& lines,
                                    const std::vector<ZMod>& indices) {
    if (lines.size() != indices.size() || lines.empty())
        throw param_mismatch("need one chirp index per line");
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            if (!are_transversal(lines[i], lines[j]))
                throw non_transversal_probe("probe lines must be pairwise transversal");
    ProbeSignal p;
    const std::uint64_t n = lines.front().modulus;
    p.realized = Signal(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(lines.size()));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Signal c = basis_signal(lines[i], indices[i]);
        for (std::uint64_t t = 0; t < n; ++t) p.realized[t] += scale * c[t];
        p.components.push_back({lines[i], indices[i]});
    }
    return p;
}

/// Matched filter over the full plane: |A(S,R)| on every column line via
/// the fast line evaluation, k largest plane points returned.
inline EstimationReport pseudorandom_estimate(const Signal& r, const ProbeSignal& probe,
                                              std::size_t k) {
    if (!probe.is_pseudorandom())
        throw wrong_probe_kind("pseudorandom_estimate needs a pseudorandom probe");
    const std::uint64_t n = r.modulus();
    EstimationReport report;
    report.method = "pseudorandom";
    report.samples = n;
    if (k == 0) return report;

    std::vector<std::pair<Point2, cplx>> all;
    all.reserve(n * n);
    const Line column = Line::infinite(n);
    for (std::uint64_t tau = 0; tau < n; ++tau) {
        const auto profile = ambiguity_on_line(probe.realized, r, column,
                                               Point2(static_cast<std::int64_t>(tau), 0, n));
        for (std::uint64_t w = 0; w < n; ++w)
            all.emplace_back(Point2(static_cast<std::int64_t>(tau),
                                    static_cast<std::int64_t>(w), n),
                             profile.values[w]);
    }
    report.ops = n * n * static_cast<std::uint64_t>(
                             std::ceil(std::log2(static_cast<double>(n))));
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        const double ma = std::abs(a.second), mb = std::abs(b.second);
        if (ma != mb) return ma > mb;
        return a.first < b.first;
    });
    all.resize(std::min<std::size_t>(k, all.size()));
    report.detected = std::move(all);
    return report;
}

namespace detail {

/// Top-k peak points of A(chirp, r) restricted to `on` (through the origin).
inline std::vector<std::pair<Point2, cplx>> chirp_peaks_on_line(const Signal& chirp,
                                                                const Signal& r,
                                                                const Line& on,
                                                                std::size_t k) {
    const auto profile = ambiguity_on_line(chirp, r, on, Point2(0, 0, chirp.modulus()));
    const auto idx = top_peaks(profile.values, k);
    std::vector<std::pair<Point2, cplx>> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.emplace_back(on.point_at(i), profile.values[i]);
    return out;
}

/// All pairwise sums x + y: if x runs over the `first`-projections of the
/// true shifts and y over the complementary projections, the sums contain
/// every true shift.
inline std::vector<Point2> pair_sums(const std::vector<std::pair<Point2, cplx>>& a,
                                     const std::vector<std::pair<Point2, cplx>>& b) {
    std::vector<Point2> out;
    out.reserve(a.size() * b.size());
    for (const auto& [x, va] : a)
        for (const auto& [y, vb] : b) out.push_back(x + y);
    return out;
}

}  // namespace detail

/// Incidence method: project the shifts onto line pairs through the chirp
/// ambiguities, form the two double-incidence candidate sets and intersect.
/// With use_cross, candidates must also show consistent ambiguity values
/// across two distinct chirps (the cross-method check).
inline EstimationReport incidence_estimate(const Signal& r, const ProbeSignal& probe,
                                           std::size_t k, bool use_cross = false,
                                           double cross_tol = 0.0) {
    if (probe.components.size() != 3)
        throw non_transversal_probe("incidence method needs a 3-chirp probe");
    const std::uint64_t n = r.modulus();
    EstimationReport report;
    report.method = use_cross ? "cross" : "incidence";
    report.samples = n;
    if (k == 0) return report;
    if (cross_tol <= 0.0) cross_tol = 3.0 / std::sqrt(static_cast<double>(n));

    const Line& lk = probe.components[0].line;
    const Line& ll = probe.components[1].line;
    const Line& lm = probe.components[2].line;
    const Signal sk = basis_signal(lk, probe.components[0].index);
    const Signal sl = basis_signal(ll, probe.components[1].index);
    const Signal sm = basis_signal(lm, probe.components[2].index);

    // I_LM from the L (+) M decomposition, I_MK from M (+) K.
    const auto l_on_m = detail::chirp_peaks_on_line(sl, r, lm, k);
    const auto m_on_l = detail::chirp_peaks_on_line(sm, r, ll, k);
    const auto m_on_k = detail::chirp_peaks_on_line(sm, r, lk, k);
    const auto k_on_m = detail::chirp_peaks_on_line(sk, r, lm, k);
    const auto inter = triple_incidence(detail::pair_sums(l_on_m, m_on_l),
                                        detail::pair_sums(m_on_k, k_on_m));
    report.ops = 4 * n *
                     static_cast<std::uint64_t>(
                         std::ceil(std::log2(static_cast<double>(n)))) +
                 static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k);

    for (const Point2& c : inter) {
        if (use_cross) {
            const cplx va = ambiguity_point(sl, r, c);
            const cplx vb = ambiguity_point(sm, r, c);
            if (std::abs(va - vb) > cross_tol) continue;
        }
        report.detected.emplace_back(c, ambiguity_point(probe.realized, r, c));
    }
    std::stable_sort(report.detected.begin(), report.detected.end(),
                     [](const auto& a, const auto& b) {
                         const double ma = std::abs(a.second), mb = std::abs(b.second);
                         if (ma != mb) return ma > mb;
                         return a.first < b.first;
                     });
    if (report.detected.size() > k) report.detected.resize(k);
    return report;
}

/// Peaks of A(S_chirp, R) on target_line via the sparse FFT: the product
/// conj(S_chirp) R has a spike at u = omega0 - a1 tau0 for each true shift
/// (tau0, omega0); each recovered u maps back to the projection of the
/// shift onto target_line along the chirp line. `scale` restores the
/// product's spike amplitude to |alpha| (sqrt(3) N for the 3-chirp probe).
inline std::vector<std::pair<Point2, cplx>> ambiguity_peaks_via_sfft(
    const SampleAccess& r_access, const Line& chirp_line, ZMod chirp_index,
    const Line& target_line, const SfftConfig& cfg, std::mt19937_64& rng,
    double scale = 0.0) {
    if (chirp_line == target_line) throw same_line("target line must differ from the chirp line");
    if (chirp_line.is_infinite())
        throw wrong_probe_kind("the reduction needs a finite-slope chirp");
    if (!are_transversal(chirp_line, target_line))
        throw non_transversal_probe("chirp and target lines must be transversal");
    const std::uint64_t n = r_access.modulus;
    if (scale <= 0.0) scale = static_cast<double>(n);

    const Signal chirp = basis_signal(chirp_line, chirp_index);
    SampleAccess product;
    product.modulus = n;
    product.counter = r_access.counter;
    product.base_position = r_access.base_position;
    product.fetch = [chirp_samples = chirp.samples, inner = r_access.fetch,
                     scale](std::uint64_t tau) {
        return scale * std::conj(chirp_samples[tau]) * inner(tau);
    };

    const auto freqs = sfft(product, cfg, rng);

    const ZMod a1 = *chirp_line.slope;
    std::vector<std::pair<Point2, cplx>> out;
    out.reserve(freqs.size());
    for (const auto& [u, alpha] : freqs) {
        if (target_line.is_infinite()) {
            out.emplace_back(Point2(ZMod(0, n), u), alpha);
        } else {
            const ZMod tau_x = u * mod_inverse(*target_line.slope - a1);
            out.emplace_back(Point2(tau_x, *target_line.slope * tau_x), alpha);
        }
    }
    return out;
}

/// Frequency index the reduction assigns to a point of target_line.
inline ZMod reduction_index_of(const Point2& on_target, const Line& chirp_line,
                               const Line& target_line) {
    if (target_line.is_infinite()) return on_target.omega;
    return (*target_line.slope - *chirp_line.slope) * on_target.tau;
}

/// Sublinear sparse channel estimation: shared sampling of R feeds four
/// reduction branches (two per direct-sum decomposition); the two candidate
/// sum sets are intersected for triple incidence. step6_errata selects
/// which pair of lines backs the second candidate set: false keeps the
/// published step ordering (K with M), true uses L with M.
inline EstimationReport sce_estimate(const SampleAccess& r_access, const ProbeSignal& probe,
                                     std::size_t k, const SfftConfig& cfg,
                                     std::mt19937_64& rng, bool step6_errata = false) {
    if (probe.components.size() != 3)
        throw non_transversal_probe("sce needs a 3-chirp probe");
    const std::uint64_t n = r_access.modulus;
    EstimationReport report;
    report.method = "sce";
    if (k == 0) return report;

    const auto& ck = probe.components[0];
    const auto& cl = probe.components[1];
    const auto& cm = probe.components[2];
    const double scale = std::sqrt(3.0) * static_cast<double>(n);

    // one shared sampling schedule: identically seeded branches touch the
    // same positions of R through their respective products
    const std::uint64_t branch_seed = rng();
    auto branch = [&](const ProbeSignal::ChirpComponent& chirp, const Line& target) {
        std::mt19937_64 branch_rng(branch_seed);
        return ambiguity_peaks_via_sfft(r_access, chirp.line, chirp.index, target, cfg,
                                        branch_rng, scale);
    };

    const auto k_on_l = branch(ck, cl.line);  // projections onto L along K
    const auto l_on_k = branch(cl, ck.line);  // projections onto K along L
    const auto first = detail::pair_sums(k_on_l, l_on_k);

    std::vector<Point2> second;
    std::map<Point2, std::vector<cplx>> alpha_of;
    auto note = [&](const std::vector<std::pair<Point2, cplx>>& a,
                    const std::vector<std::pair<Point2, cplx>>& b) {
        for (const auto& [x, va] : a)
            for (const auto& [y, vb] : b) {
                alpha_of[x + y].push_back(va);
                alpha_of[x + y].push_back(vb);
            }
    };
    note(k_on_l, l_on_k);
    if (step6_errata) {
        const auto m_on_l = branch(cm, cl.line);
        const auto l_on_m = branch(cl, cm.line);
        second = detail::pair_sums(m_on_l, l_on_m);
        note(m_on_l, l_on_m);
    } else {
        const auto k_on_m = branch(ck, cm.line);
        const auto m_on_k = branch(cm, ck.line);
        second = detail::pair_sums(k_on_m, m_on_k);
        note(k_on_m, m_on_k);
    }

    for (const Point2& c : triple_incidence(first, second)) {
        cplx acc{};
        const auto& vs = alpha_of[c];
        for (const cplx& v : vs) acc += v;
        report.detected.emplace_back(c, acc / static_cast<double>(vs.size()));
    }
    std::stable_sort(report.detected.begin(), report.detected.end(),
                     [](const auto& a, const auto& b) {
                         const double ma = std::abs(a.second), mb = std::abs(b.second);
                         if (ma != mb) return ma > mb;
                         return a.first < b.first;
                     });
    if (report.detected.size() > k) report.detected.resize(k);
    if (r_access.counter) {
        report.samples = r_access.counter->sample_count();
        report.ops = r_access.counter->ops;
    }
    return report;
}

}  // namespace sce
