#pragma once

/// Monte-Carlo harness: seeded PD/PFA campaigns over a grid of moduli,
/// complexity sweeps, and deterministic CSV / JSON emission.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sce/channel.hpp"
#include "sce/errors.hpp"
#include "sce/estimators.hpp"
#include "sce/rng.hpp"

namespace sce {

struct TrialConfig {
    std::string method = "sce";  // pseudorandom | incidence | cross | sce
    std::vector<std::uint64_t> n_values;
    std::size_t k = 5;
    double snr_db = 10.0;
    double epsilon = 0.5;
    double kappa = 0.5;
    double energy = 1.0;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    SfftConfig sfft;            // knobs for the sce branches
    bool step6_errata = false;
    std::size_t workers = 0;    // 0 -> SCE_WORKERS env var, then hardware
    bool record_time = true;    // false zeroes mean_time_s for byte-stable output
};

struct CampaignRow {
    std::string method;
    std::uint64_t n = 0;
    std::size_t k = 0;
    double snr_db = 0.0;
    std::size_t trials = 0;
    double pd = 0.0;
    double pfa = 0.0;
    double mean_samples = 0.0;
    double mean_ops = 0.0;
    double mean_time_s = 0.0;
    std::uint64_t seed = 0;
};

struct CampaignResult {
    std::vector<CampaignRow> rows;
};

inline std::size_t worker_count(const TrialConfig& cfg) {
    if (cfg.workers) return cfg.workers;
    if (const char* env = std::getenv("SCE_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace detail {

inline bool needs_odd_modulus(const std::string& method) {
    return method == "incidence" || method == "cross" || method == "sce";
}

struct TrialTally {
    std::uint64_t hits = 0;        // true targets detected
    std::uint64_t false_alarms = 0;
    std::uint64_t detections = 0;
    std::uint64_t samples = 0;
    std::uint64_t ops = 0;
    double time_s = 0.0;
};

/// One seeded trial: draw targets, transmit the method's probe, estimate,
/// score against the truth by exact (tau, omega) equality.
inline TrialTally run_one_trial(const TrialConfig& cfg, std::uint64_t n,
                                std::uint64_t stream) {
    std::mt19937_64 rng = derive_rng(cfg.seed, stream);
    const double snr = std::pow(10.0, cfg.snr_db / 10.0);
    const NoiseSpec noise{cfg.energy / snr};
    const TargetSet targets = sample_targets(cfg.k, cfg.energy, cfg.epsilon, n, rng);

    ProbeSignal probe;
    if (cfg.method == "pseudorandom") {
        probe = make_pseudorandom_probe(n, rng);
    } else {
        const std::vector<Line> lines = random_transversal_lines(3, n, rng, true);
        std::vector<ZMod> indices;
        for (std::size_t i = 0; i < 3; ++i)
            indices.emplace_back(static_cast<std::int64_t>(uniform_index(rng, n)), n);
        probe = make_chirp_probe(lines, indices);
    }
    const Signal r = add_noise(apply_channel(targets, probe.realized), noise, rng);

    const auto t0 = std::chrono::steady_clock::now();
    EstimationReport report;
    if (cfg.method == "pseudorandom") {
        report = pseudorandom_estimate(r, probe, cfg.k);
    } else if (cfg.method == "incidence" || cfg.method == "cross") {
        report = incidence_estimate(r, probe, cfg.k, cfg.method == "cross");
    } else if (cfg.method == "sce") {
        SfftConfig sf = cfg.sfft;
        sf.k = cfg.k;
        sf.mu = SfftConfig::derived_mu(cfg.kappa, cfg.epsilon, cfg.energy, cfg.k);
        const SampleAccess access = make_sample_access(r);
        report = sce_estimate(access, probe, cfg.k, sf, rng, cfg.step6_errata);
    } else {
        throw invalid_modulus("unknown method: " + cfg.method);
    }
    const auto t1 = std::chrono::steady_clock::now();

    TrialTally tally;
    tally.time_s = std::chrono::duration<double>(t1 - t0).count();
    tally.samples = report.samples;
    tally.ops = report.ops;
    tally.detections = report.detected.size();
    std::set<Point2> truth(targets.shifts.begin(), targets.shifts.end());
    for (const auto& [p, alpha] : report.detected) {
        if (truth.count(p)) ++tally.hits;
        else ++tally.false_alarms;
    }
    return tally;
}

}  // namespace detail

/// Seeded PD/PFA campaign over cfg.n_values; trials run on a worker pool
/// with per-trial rng streams, tallies summed order-independently.
inline CampaignResult run_trials(const TrialConfig& cfg) {
    CampaignResult result;
    for (std::uint64_t n : cfg.n_values) {
        if (detail::needs_odd_modulus(cfg.method) && n % 2 == 0)
            throw invalid_modulus("chirp-based methods need an odd modulus");

        std::vector<detail::TrialTally> tallies(cfg.trials);
        const std::size_t workers = std::min(worker_count(cfg), cfg.trials);
        std::atomic<std::size_t> next{0};
        auto work = [&]() {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= cfg.trials) return;
                tallies[t] = detail::run_one_trial(cfg, n, n * 1000003ULL + t);
            }
        };
        if (workers <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
            for (std::thread& th : pool) th.join();
        }

        std::uint64_t hits = 0, fa = 0, det = 0, samples = 0, ops = 0;
        double time_s = 0.0;
        for (const auto& t : tallies) {
            hits += t.hits;
            fa += t.false_alarms;
            det += t.detections;
            samples += t.samples;
            ops += t.ops;
            time_s += t.time_s;
        }
        CampaignRow row;
        row.method = cfg.method;
        row.n = n;
        row.k = cfg.k;
        row.snr_db = cfg.snr_db;
        row.trials = cfg.trials;
        row.pd = static_cast<double>(hits) /
                 static_cast<double>(cfg.k * cfg.trials);
        row.pfa = det ? static_cast<double>(fa) / static_cast<double>(det) : 0.0;
        row.mean_samples = static_cast<double>(samples) / static_cast<double>(cfg.trials);
        row.mean_ops = static_cast<double>(ops) / static_cast<double>(cfg.trials);
        row.mean_time_s = cfg.record_time ? time_s / static_cast<double>(cfg.trials) : 0.0;
        row.seed = cfg.seed;
        result.rows.push_back(row);
    }
    return result;
}

/// Side-by-side sample/time sweep for the sublinear estimator against the
/// full-sampling incidence method at the same moduli.
inline CampaignResult complexity_sweep(const TrialConfig& cfg) {
    CampaignResult result;
    for (const char* method : {"incidence", "sce"}) {
        TrialConfig sub = cfg;
        sub.method = method;
        const CampaignResult part = run_trials(sub);
        result.rows.insert(result.rows.end(), part.rows.begin(), part.rows.end());
    }
    return result;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string to_csv(const CampaignResult& result) {
    std::ostringstream out;
    out << "method,N,k,snr_db,trials,pd,pfa,mean_samples,mean_ops,mean_time_s,seed\n";
    for (const CampaignRow& r : result.rows) {
        out << r.method << ',' << r.n << ',' << r.k << ',' << format_double(r.snr_db)
            << ',' << r.trials << ',' << format_double(r.pd) << ','
            << format_double(r.pfa) << ',' << format_double(r.mean_samples) << ','
            << format_double(r.mean_ops) << ',' << format_double(r.mean_time_s) << ','
            << r.seed << '\n';
    }
    return out.str();
}

inline std::string to_json(const CampaignResult& result) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const CampaignRow& r = result.rows[i];
        out << "  {\"method\":\"" << r.method << "\",\"N\":" << r.n << ",\"k\":" << r.k
            << ",\"snr_db\":" << format_double(r.snr_db) << ",\"trials\":" << r.trials
            << ",\"pd\":" << format_double(r.pd) << ",\"pfa\":" << format_double(r.pfa)
            << ",\"mean_samples\":" << format_double(r.mean_samples)
            << ",\"mean_ops\":" << format_double(r.mean_ops)
            << ",\"mean_time_s\":" << format_double(r.mean_time_s)
            << ",\"seed\":" << r.seed << "}" << (i + 1 < result.rows.size() ? "," : "")
            << "\n";
    }
    out << "]\n";
    return out.str();
}

}  // namespace sce
