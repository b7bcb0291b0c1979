// Command-line harness: single-instance estimation, PD/PFA campaigns,
// complexity sweeps and analog-bridge verification. Worker count can be
// overridden with the SCE_WORKERS environment variable.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sce/bench.hpp"
#include "sce/bridge.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    f << text;
}

struct CommonOpts {
    std::string method = "sce";
    std::vector<std::uint64_t> n_values{101};
    std::size_t k = 5;
    double snr_db = 10.0;
    double eps = 0.5;
    double kappa = 0.5;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string out;
    bool json = false;
    bool no_timing = false;
    bool check = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_method = true) {
    if (with_method)
        cmd->add_option("--method", o.method,
                        "pseudorandom | incidence | cross | sce");
    cmd->add_option("--n", o.n_values, "moduli to sweep");
    cmd->add_option("--k", o.k, "channel sparsity");
    cmd->add_option("--snr-db", o.snr_db, "signal-to-noise ratio in dB");
    cmd->add_option("--eps", o.eps, "coefficient floor parameter in (0,1)");
    cmd->add_option("--kappa", o.kappa, "confidence factor for the threshold");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials per modulus");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_flag("--json", o.json, "emit JSON instead of CSV");
    cmd->add_flag("--no-timing", o.no_timing, "zero the wall-time column");
    cmd->add_flag("--check", o.check, "assert acceptance floors; exit 2 on failure");
}

sce::TrialConfig to_config(const CommonOpts& o) {
    sce::TrialConfig cfg;
    cfg.method = o.method;
    cfg.n_values = o.n_values;
    cfg.k = o.k;
    cfg.snr_db = o.snr_db;
    cfg.epsilon = o.eps;
    cfg.kappa = o.kappa;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.record_time = !o.no_timing;
    return cfg;
}

int check_failed(const std::string& why) {
    std::cerr << "check failed: " << why << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse delay-Doppler channel estimation bench"};
    app.require_subcommand(1);

    CommonOpts pd_opts;
    CLI::App* bench_pd = app.add_subcommand("bench-pd", "PD/PFA campaign over moduli");
    add_common(bench_pd, pd_opts);

    CommonOpts cx_opts;
    CLI::App* bench_cx =
        app.add_subcommand("bench-complexity", "sample/time sweep, sce vs incidence");
    add_common(bench_cx, cx_opts, false);

    CommonOpts est_opts;
    est_opts.trials = 1;
    CLI::App* estimate = app.add_subcommand("estimate", "run one instance, print detections");
    add_common(estimate, est_opts);

    struct {
        std::uint64_t n = 64;
        std::uint64_t trunc = 64;
        std::size_t shifts = 20;
        std::uint64_t seed = 1;
        std::string out;
        bool check = false;
    } br_opts;
    CLI::App* bridge = app.add_subcommand("verify-bridge", "shift-intertwining residuals");
    bridge->add_option("--n", br_opts.n, "signal length N = T W");
    bridge->add_option("--trunc", br_opts.trunc, "sinc lobes kept per side");
    bridge->add_option("--shifts", br_opts.shifts, "number of random on-grid shifts");
    bridge->add_option("--seed", br_opts.seed, "master seed");
    bridge->add_option("--out", br_opts.out, "output path (default stdout)");
    bridge->add_flag("--check", br_opts.check, "assert residual <= 1e-3; exit 2 on failure");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench_pd->parsed()) {
            const auto result = sce::run_trials(to_config(pd_opts));
            emit(pd_opts.json ? sce::to_json(result) : sce::to_csv(result), pd_opts.out);
            if (pd_opts.check) {
                for (std::size_t i = 1; i < result.rows.size(); ++i) {
                    if (result.rows[i].pd + 1e-12 < result.rows[i - 1].pd)
                        return check_failed("PD not non-decreasing");
                    if (result.rows[i].pfa > result.rows[i - 1].pfa + 1e-12)
                        return check_failed("PFA not non-increasing");
                }
                if (!result.rows.empty()) {
                    if (result.rows.back().pd < 0.9) return check_failed("final PD < 0.9");
                    if (result.rows.back().pfa > 0.1) return check_failed("final PFA > 0.1");
                }
            }
        } else if (bench_cx->parsed()) {
            cx_opts.method = "sce";
            const auto result = sce::complexity_sweep(to_config(cx_opts));
            emit(cx_opts.json ? sce::to_json(result) : sce::to_csv(result), cx_opts.out);
            if (cx_opts.check) {
                std::vector<double> sce_samples;
                for (const auto& row : result.rows) {
                    if (row.method == "incidence" &&
                        row.mean_samples != static_cast<double>(row.n))
                        return check_failed("incidence samples != N");
                    if (row.method == "sce") sce_samples.push_back(row.mean_samples);
                }
                if (sce_samples.size() >= 2 &&
                    sce_samples.back() > 4.5 * sce_samples.front())
                    return check_failed("sce sample growth ratio > 4.5");
            }
        } else if (estimate->parsed()) {
            sce::TrialConfig cfg = to_config(est_opts);
            cfg.trials = 1;
            const std::uint64_t n = cfg.n_values.front();
            std::mt19937_64 rng = sce::derive_rng(cfg.seed, n);
            const double snr = std::pow(10.0, cfg.snr_db / 10.0);
            const auto targets = sce::sample_targets(cfg.k, 1.0, cfg.epsilon, n, rng);

            sce::ProbeSignal probe;
            if (cfg.method == "pseudorandom") {
                probe = sce::make_pseudorandom_probe(n, rng);
            } else {
                const auto lines = sce::random_transversal_lines(3, n, rng, true);
                std::vector<sce::ZMod> idx;
                for (int i = 0; i < 3; ++i)
                    idx.emplace_back(
                        static_cast<std::int64_t>(sce::uniform_index(rng, n)), n);
                probe = sce::make_chirp_probe(lines, idx);
            }
            const sce::Signal r = sce::add_noise(
                sce::apply_channel(targets, probe.realized), sce::NoiseSpec{1.0 / snr}, rng);

            sce::EstimationReport report;
            if (cfg.method == "pseudorandom") {
                report = sce::pseudorandom_estimate(r, probe, cfg.k);
            } else if (cfg.method == "incidence" || cfg.method == "cross") {
                report = sce::incidence_estimate(r, probe, cfg.k, cfg.method == "cross");
            } else {
                sce::SfftConfig sf = cfg.sfft;
                sf.k = cfg.k;
                sf.mu = sce::SfftConfig::derived_mu(cfg.kappa, cfg.epsilon, 1.0, cfg.k);
                report = sce::sce_estimate(sce::make_sample_access(r), probe, cfg.k, sf,
                                           rng);
            }
            std::ostringstream out;
            out << "tau,omega,alpha_re,alpha_im,true\n";
            std::set<sce::Point2> truth(targets.shifts.begin(), targets.shifts.end());
            for (const auto& [p, a] : report.detected)
                out << p.tau.value << ',' << p.omega.value << ','
                    << sce::format_double(a.real()) << ',' << sce::format_double(a.imag())
                    << ',' << (truth.count(p) ? 1 : 0) << '\n';
            out << "# samples=" << report.samples << " ops=" << report.ops << '\n';
            emit(out.str(), est_opts.out);
            if (est_opts.check) {
                std::size_t hits = 0;
                for (const auto& [p, a] : report.detected) hits += truth.count(p);
                if (hits < targets.sparsity()) return check_failed("not all targets found");
            }
        } else if (bridge->parsed()) {
            const std::uint64_t n = br_opts.n;
            const sce::AnalogParams params = sce::AnalogParams::make(n, 2.0, 8.0, br_opts.trunc);
            std::mt19937_64 rng = sce::derive_rng(br_opts.seed, 0);
            const sce::Signal s = sce::pseudorandom_signal(n, rng);
            std::ostringstream out;
            out << "t0,f0,tau0,omega0,residual\n";
            double worst = 0.0;
            for (std::size_t i = 0; i < br_opts.shifts; ++i) {
                const std::uint64_t tau0 = sce::uniform_index(rng, n);
                const std::uint64_t omega0 = sce::uniform_index(rng, n);
                const double t0 = static_cast<double>(tau0) / params.bandwidth;
                const double f0 = static_cast<double>(omega0) / params.duration;
                const double resid = sce::verify_shift_intertwining(s, t0, f0, params);
                worst = std::max(worst, resid);
                out << sce::format_double(t0) << ',' << sce::format_double(f0) << ','
                    << tau0 << ',' << omega0 << ',' << sce::format_double(resid) << '\n';
            }
            emit(out.str(), br_opts.out);
            if (br_opts.check && worst > 1e-3)
                return check_failed("bridge residual > 1e-3");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
