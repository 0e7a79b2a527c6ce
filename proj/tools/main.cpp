#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psisac/channel.hpp"
#include "psisac/estimator.hpp"
#include "psisac/harness.hpp"
#include "psisac/numerics.hpp"

namespace {

using namespace psisac;

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::uint64_t trials = 0; ///< 0 = keep config value
    std::string out;
    unsigned threads = 0;
    bool seed_set = false;
    bool trials_set = false;
};

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file,
                             const char* what) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file)
        throw std::runtime_error(std::string(what) +
                                 ": cannot open output file: " + path);
    file.imbue(std::locale::classic());
    return file;
}

int cmd_simulate(const std::string& config_path, const GlobalOpts& g) {
    ExperimentSpec spec = load_experiment_spec(config_path);
    if (g.seed_set) spec.base.seed = g.seed;
    if (g.trials_set) spec.num_trials = g.trials;
    if (!g.out.empty()) spec.output_path = g.out;
    spec.threads = g.threads;

    const std::vector<ResultRow> rows = run_experiment(spec);
    std::cout << "wrote " << spec.output_path << " (" << rows.size()
              << " grid points, " << spec.num_trials << " trials each, seed "
              << spec.base.seed << ")\n";
    return 0;
}

int cmd_complexity(const std::vector<std::uint64_t>& u_list, std::uint64_t n,
                   const GlobalOpts& g) {
    std::ofstream file;
    std::ostream& out = open_or_stdout(g.out, file, "complexity");
    write_complexity_csv(out, u_list, n);
    return 0;
}

int cmd_range(const std::vector<std::uint64_t>& u_list, const RangeConfig& rc,
              const GlobalOpts& g) {
    std::ofstream file;
    std::ostream& out = open_or_stdout(g.out, file, "range");
    write_range_csv(out, u_list, rc);
    return 0;
}

int cmd_psd(const std::string& scheme_name, const std::string& mode_name,
            const std::string& pr_text, std::uint64_t n_fft,
            std::uint64_t symbols, std::uint64_t tx,
            const std::string& mask_path, const GlobalOpts& g) {
    const double pr = parse_ratio(pr_text, "--pr");
    ExperimentSpec derive;
    derive.base.n_fft = n_fft;
    derive.base.power_mode = power_mode_from_string(mode_name);
    const Scheme scheme = scheme_from_string(scheme_name);
    const SystemConfig cfg = grid_point_config(
        derive, scheme, pr, std::numeric_limits<double>::infinity());
    if (tx == 0 || tx > cfg.num_tx)
        throw config_error("psd: --tx out of range for derived config");
    if (symbols == 0) throw config_error("psd: --symbols must be >= 1");

    std::vector<cvec> bodies;
    bodies.reserve(symbols);
    for (std::uint64_t s = 0; s < symbols; ++s) {
        RngStream rng(g.seed, s);
        const PilotGrid pilots = generate_pilots(cfg, rng);
        bodies.push_back(remove_cp(modulate_tx(cfg, pilots, tx), cfg.n_cp));
    }
    const std::vector<double> spectrum = psd(bodies, cfg.n_fft);

    const bool have_mask = !mask_path.empty();
    MaskSpec mask;
    if (have_mask) mask = load_mask(mask_path);

    std::ofstream file;
    std::ostream& out = open_or_stdout(g.out, file, "psd");
    out << std::setprecision(15);
    out << "bin,normalized_frequency,psd_db";
    if (have_mask) out << ",mask_db";
    out << '\n';
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double f = static_cast<double>(k) /
                         static_cast<double>(spectrum.size());
        out << k << ',' << f << ',' << spectrum[k];
        if (have_mask) out << ',' << mask_limit_at(mask, f);
        out << '\n';
    }

    if (have_mask) {
        const std::vector<MaskViolation> violations = mask_check(spectrum, mask);
        if (violations.empty()) {
            std::cerr << "mask check: compliant\n";
        } else {
            double worst = 0.0;
            for (const auto& v : violations)
                if (v.excess_db > worst) worst = v.excess_db;
            std::cerr << "mask check: " << violations.size()
                      << " bins exceed the mask (worst excess " << worst
                      << " dB)\n";
        }
    }
    return 0;
}

int cmd_cir_dump(std::uint64_t n_fft, std::uint64_t u, std::uint64_t n_cp,
                 std::uint64_t taps, const std::string& scheme_name,
                 const GlobalOpts& g) {
    SystemConfig cfg;
    cfg.n_fft = n_fft;
    cfg.n_cp = n_cp;
    cfg.num_tx = u;
    cfg.num_taps = taps;
    cfg.scheme = scheme_from_string(scheme_name);
    cfg.pilot_ratio = cfg.scheme == Scheme::PS_ISAC
                          ? 1.0
                          : 1.0 / static_cast<double>(u);
    cfg.noise_variance = 0.0;
    cfg.validate();

    const std::string path = g.out.empty() ? "cir.csv" : g.out;
    RngStream rng(g.seed);
    dump_cir_snapshot(cfg, rng, path);
    std::cout << "wrote " << path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uplink OFDMA pilot-allocation simulator: overlapped "
                 "phase-shifted block pilots vs interleaved combs"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--trials", g.trials, "Monte Carlo trials per grid point");
    app.add_option("--out", g.out, "output file (default: stdout or config)");
    app.add_option("--threads", g.threads,
                   "worker threads (0 = hardware concurrency)");

    auto* simulate = app.add_subcommand(
        "simulate", "run the Monte Carlo MSE sweep from a config file");
    std::string config_path;
    simulate->add_option("--config", config_path, "experiment config file")
        ->required();

    auto* complexity_cmd = app.add_subcommand(
        "complexity", "per-symbol real-operation counts for both schemes");
    std::vector<std::uint64_t> u_list{4, 8, 16};
    std::uint64_t comp_n = 256;
    complexity_cmd->add_option("--u", u_list, "transmitter counts")
        ->delimiter(',');
    complexity_cmd->add_option("--n", comp_n, "FFT size");

    auto* range_cmd = app.add_subcommand(
        "range", "maximum unambiguous range for both schemes");
    std::vector<std::uint64_t> range_u{4, 8, 16};
    RangeConfig rc;
    range_cmd->add_option("--u", range_u, "transmitter counts")
        ->delimiter(',');
    range_cmd->add_option("--n", rc.n_fft, "FFT size");
    range_cmd->add_option("--df", rc.subcarrier_spacing_hz,
                          "subcarrier spacing in Hz");
    range_cmd->add_option("--c", rc.light_speed_mps, "speed of light in m/s");

    auto* psd_cmd = app.add_subcommand(
        "psd", "averaged transmit spectrum, optionally checked against a mask");
    std::string psd_scheme = "ci-isac";
    std::string psd_mode = "constrained";
    std::string psd_pr = "1/16";
    std::uint64_t psd_n = 256;
    std::uint64_t psd_symbols = 1000;
    std::uint64_t psd_tx = 1;
    std::string mask_path;
    psd_cmd->add_option("--scheme", psd_scheme, "ps-isac or ci-isac");
    psd_cmd->add_option("--power-mode", psd_mode,
                        "constrained or unconstrained");
    psd_cmd->add_option("--pr", psd_pr,
                        "pilot ratio of the operating point (e.g. 1/16)");
    psd_cmd->add_option("--n", psd_n, "FFT size");
    psd_cmd->add_option("--symbols", psd_symbols, "symbols to average");
    psd_cmd->add_option("--tx", psd_tx, "transmitter to observe (1-based)");
    psd_cmd->add_option("--mask", mask_path, "mask file to check against");

    auto* cir_cmd = app.add_subcommand(
        "cir-dump", "noiseless receiver-side CIR magnitudes for plotting");
    std::uint64_t cir_n = 32;
    std::uint64_t cir_u = 4;
    std::uint64_t cir_cp = 8;
    std::uint64_t cir_taps = 4;
    std::string cir_scheme = "ps-isac";
    cir_cmd->add_option("--n", cir_n, "FFT size");
    cir_cmd->add_option("--u", cir_u, "transmitter count");
    cir_cmd->add_option("--n-cp", cir_cp, "cyclic prefix length");
    cir_cmd->add_option("--taps", cir_taps, "channel tap count");
    cir_cmd->add_option("--scheme", cir_scheme, "ps-isac or ci-isac");

    CLI11_PARSE(app, argc, argv);
    g.seed_set = app.count("--seed") > 0;
    g.trials_set = app.count("--trials") > 0;

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, g);
        if (complexity_cmd->parsed()) return cmd_complexity(u_list, comp_n, g);
        if (range_cmd->parsed()) return cmd_range(range_u, rc, g);
        if (psd_cmd->parsed())
            return cmd_psd(psd_scheme, psd_mode, psd_pr, psd_n, psd_symbols,
                           psd_tx, mask_path, g);
        if (cir_cmd->parsed())
            return cmd_cir_dump(cir_n, cir_u, cir_cp, cir_taps, cir_scheme, g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
