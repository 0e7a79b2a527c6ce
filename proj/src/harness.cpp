#include "psisac/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "psisac/channel.hpp"
#include "psisac/estimator.hpp"
#include "psisac/numerics.hpp"

namespace psisac {

namespace {

constexpr std::uint64_t kRolePilots = 0;
constexpr std::uint64_t kRoleNoise = 1;
constexpr std::uint64_t kRoleChannelBase = 2;

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c); };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), is_space));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), is_space).base(), s.end());
    return s;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw config_error(what + ": cannot parse non-negative integer '" +
                           text + "'");
    }
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss << std::setprecision(15) << v;
    return ss.str();
}

/// Compensated fixed-order summation; exactness of the order makes the
/// aggregate independent of how trials were scheduled across threads.
double neumaier_sum(const std::vector<double>& xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (const double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

void for_each_trial(std::uint64_t num_trials, unsigned threads,
                    const std::function<void(std::uint64_t)>& body) {
    if (threads <= 1 || num_trials < 2) {
        for (std::uint64_t t = 0; t < num_trials; ++t) body(t);
        return;
    }
    const unsigned n_workers = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, num_trials));
    std::vector<std::exception_ptr> errors(n_workers);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        const std::uint64_t lo = num_trials * w / n_workers;
        const std::uint64_t hi = num_trials * (w + 1) / n_workers;
        pool.emplace_back([&, lo, hi, w] {
            try {
                for (std::uint64_t t = lo; t < hi; ++t) body(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

double parse_ratio(const std::string& text, const std::string& what) {
    const std::string token = trim(text);
    if (const auto slash = token.find('/'); slash != std::string::npos) {
        const double num = parse_ratio(token.substr(0, slash), what);
        const double den = parse_ratio(token.substr(slash + 1), what);
        if (den == 0.0) throw config_error(what + ": division by zero");
        return num / den;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw config_error(what + ": cannot parse number '" + text + "'");
    }
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);

    ExperimentSpec spec;
    bool saw_scheme = false;
    bool saw_pr = false;
    bool saw_snr = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": empty key or value");

        if (key == "n_fft") {
            spec.base.n_fft = parse_u64(value, key);
        } else if (key == "n_cp") {
            spec.base.n_cp = parse_u64(value, key);
        } else if (key == "num_tx") {
            spec.base.num_tx = parse_u64(value, key);
        } else if (key == "pilot_ratio") {
            spec.pilot_ratios.clear();
            for (const auto& item : split_list(value))
                spec.pilot_ratios.push_back(parse_ratio(item, key));
            saw_pr = true;
        } else if (key == "scheme") {
            spec.schemes.clear();
            for (const auto& item : split_list(value))
                spec.schemes.push_back(scheme_from_string(item));
            saw_scheme = true;
        } else if (key == "power_mode") {
            spec.base.power_mode = power_mode_from_string(value);
        } else if (key == "snr_db") {
            spec.snr_grid_db.clear();
            for (const auto& item : split_list(value))
                spec.snr_grid_db.push_back(parse_ratio(item, key));
            saw_snr = true;
        } else if (key == "trials") {
            spec.num_trials = parse_u64(value, key);
        } else if (key == "seed") {
            spec.base.seed = parse_u64(value, key);
        } else {
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
        }
    }

    if (!saw_scheme)
        spec.schemes = {Scheme::PS_ISAC, Scheme::CI_ISAC};
    if (!saw_pr) spec.pilot_ratios = {0.25, 0.125, 0.0625};
    if (!saw_snr)
        spec.snr_grid_db = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    return spec;
}

SystemConfig grid_point_config(const ExperimentSpec& spec, Scheme scheme,
                               double pilot_ratio, double snr_db) {
    const auto describe = [&]() {
        return "grid point (scheme=" + to_string(scheme) +
               ", pr=" + fmt(pilot_ratio) + ", snr_db=" + fmt(snr_db) + ")";
    };
    if (!(pilot_ratio > 0.0) || pilot_ratio > 1.0)
        throw config_error(describe() + ": pilot ratio outside (0, 1]");

    const double u_real = 1.0 / pilot_ratio;
    const double cp_real = static_cast<double>(spec.base.n_fft) * pilot_ratio;
    const auto u = static_cast<std::uint64_t>(std::llround(u_real));
    const auto cp = static_cast<std::uint64_t>(std::llround(cp_real));
    if (u == 0 || std::abs(u_real - static_cast<double>(u)) > 1e-9)
        throw config_error(describe() + ": 1/PR is not an integer");
    if (cp == 0 || std::abs(cp_real - static_cast<double>(cp)) > 1e-9)
        throw config_error(describe() + ": n_fft * PR is not an integer");

    SystemConfig cfg = spec.base;
    cfg.scheme = scheme;
    cfg.num_tx = u;
    cfg.n_cp = cp;
    cfg.pilot_ratio = scheme == Scheme::PS_ISAC ? 1.0 : pilot_ratio;
    cfg.num_taps = cp > 1 ? cp - 1 : 1;
    if (std::isinf(snr_db) && snr_db > 0.0)
        cfg.noise_variance = 0.0;
    else
        cfg.noise_variance = std::pow(10.0, -snr_db / 10.0);
    try {
        cfg.validate();
    } catch (const config_error& e) {
        throw config_error(describe() + ": " + e.what());
    }
    return cfg;
}

double run_trial(const SystemConfig& cfg, std::uint64_t seed,
                 std::uint64_t grid_index, std::uint64_t trial_id) {
    if (grid_index > 0xFFFF)
        throw config_error("run_trial: grid index exceeds 2^16 - 1");
    if (trial_id > 0xFFFFFFFFull)
        throw config_error("run_trial: trial id exceeds 2^32 - 1");
    if (kRoleChannelBase + cfg.num_tx - 1 > 0xFFFF)
        throw config_error("run_trial: too many transmitters for stream ids");
    const std::uint64_t base_id = (grid_index << 48) | (trial_id << 16);

    RngStream pilot_rng(seed, base_id | kRolePilots);
    const PilotGrid pilots = generate_pilots(cfg, pilot_rng);

    std::vector<cvec> received(cfg.num_tx);
    std::vector<cvec> true_cfrs(cfg.num_tx);
    for (std::size_t u = 1; u <= cfg.num_tx; ++u) {
        RngStream ch_rng(seed, base_id | (kRoleChannelBase + u - 1));
        const ChannelRealization ch = draw_channel(ch_rng, cfg.num_taps,
                                                   cfg.n_fft);
        true_cfrs[u - 1] = ch.cfr;
        received[u - 1] = apply_channel(modulate_tx(cfg, pilots, u), ch,
                                        cfg.n_cp);
    }

    RngStream noise_rng(seed, base_id | kRoleNoise);
    const cvec y = superpose_and_add_noise(received, noise_rng,
                                           cfg.noise_variance);
    const EstimationResult est = run_receiver(y, pilots, cfg);
    return mse(true_cfrs, est);
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    if (spec.schemes.empty() || spec.pilot_ratios.empty() ||
        spec.snr_grid_db.empty())
        throw config_error("run_experiment: empty scheme/PR/SNR grid");
    if (spec.num_trials == 0)
        throw config_error("run_experiment: num_trials must be >= 1");
    if (spec.num_trials > 0xFFFFFFFFull)
        throw config_error("run_experiment: num_trials must be < 2^32");
    const std::size_t n_points = spec.schemes.size() *
                                 spec.pilot_ratios.size() *
                                 spec.snr_grid_db.size();
    if (n_points > 0x10000)
        throw config_error("run_experiment: more than 2^16 grid points");

    struct GridPoint {
        Scheme scheme;
        double pr;
        double snr_db;
        SystemConfig cfg;
    };
    std::vector<GridPoint> grid;
    grid.reserve(n_points);
    for (const Scheme scheme : spec.schemes)
        for (const double pr : spec.pilot_ratios)
            for (const double snr : spec.snr_grid_db)
                grid.push_back({scheme, pr, snr,
                                grid_point_config(spec, scheme, pr, snr)});

    std::ofstream out(spec.output_path);
    if (!out)
        throw config_error("run_experiment: cannot open output file: " +
                           spec.output_path);
    out.imbue(std::locale::classic());

    unsigned threads = spec.threads;
    if (threads == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : hw;
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(
        std::min<std::uint64_t>(threads, spec.num_trials), 128));

    out << "# snr convention: per pilot subcarrier with unit-power pilots; "
           "noise_variance = 10^(-snr_db/10)\n";
    out << "# trials = " << spec.num_trials << ", seed = " << spec.base.seed
        << "\n";
    out << "scheme,U,PR,snr_db,trials,mse_mean,mse_stderr\n";

    std::vector<ResultRow> rows;
    rows.reserve(n_points);
    std::vector<double> slots(spec.num_trials);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const GridPoint& gp = grid[gi];
        const std::uint64_t seed = spec.base.seed;
        for_each_trial(spec.num_trials, threads, [&](std::uint64_t t) {
            slots[t] = run_trial(gp.cfg, seed, gi, t);
        });

        const double n_d = static_cast<double>(spec.num_trials);
        const double mean = neumaier_sum(slots) / n_d;
        double stderr_ = 0.0;
        if (spec.num_trials > 1) {
            std::vector<double> sq(spec.num_trials);
            for (std::uint64_t t = 0; t < spec.num_trials; ++t) {
                const double d = slots[t] - mean;
                sq[t] = d * d;
            }
            const double var = neumaier_sum(sq) / (n_d - 1.0);
            stderr_ = std::sqrt(var / n_d);
        }

        const ResultRow row{gp.scheme, gp.cfg.num_tx, gp.pr,
                            gp.snr_db,  spec.num_trials, mean, stderr_};
        rows.push_back(row);
        out << to_string(row.scheme) << ',' << row.num_tx << ','
            << fmt(row.pilot_ratio) << ',' << fmt(row.snr_db) << ','
            << row.trials << ',' << fmt(row.mse_mean) << ','
            << fmt(row.mse_stderr) << '\n';
        if (!out)
            throw std::runtime_error("run_experiment: write failed: " +
                                     spec.output_path);
    }
    return rows;
}

void dump_cir_snapshot(const SystemConfig& cfg, RngStream& rng,
                       const std::string& path) {
    SystemConfig quiet = cfg;
    quiet.noise_variance = 0.0;
    quiet.validate();

    RngStream pilot_rng = rng.substream(kRolePilots);
    const PilotGrid pilots = generate_pilots(quiet, pilot_rng);

    std::vector<cvec> received(quiet.num_tx);
    for (std::size_t u = 1; u <= quiet.num_tx; ++u) {
        RngStream ch_rng = rng.substream(kRoleChannelBase + u - 1);
        const ChannelRealization ch =
            draw_channel(ch_rng, quiet.num_taps, quiet.n_fft);
        received[u - 1] =
            apply_channel(modulate_tx(quiet, pilots, u), ch, quiet.n_cp);
    }
    RngStream noise_rng = rng.substream(kRoleNoise);
    const cvec y = superpose_and_add_noise(received, noise_rng, 0.0);
    const cvec y_f = dft(remove_cp(y, quiet.n_cp));

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("dump_cir_snapshot: cannot open output file: " +
                                 path);
    out.imbue(std::locale::classic());

    if (quiet.scheme == Scheme::PS_ISAC) {
        std::vector<std::size_t> all(quiet.n_fft);
        for (std::size_t k = 0; k < quiet.n_fft; ++k) all[k] = k;
        const cvec joint = ls_estimate(y_f, pilots.per_tx[0], all);
        const EstimationResult est = separate_ps_isac(joint, quiet);
        out << "n,joint_cir_magnitude\n";
        for (std::size_t n = 0; n < est.joint_cir.size(); ++n)
            out << n << ',' << fmt(std::abs(est.joint_cir[n])) << '\n';
    } else {
        // Diagnostic view only: zero-fill each comb estimate to the full
        // grid and take one size-N inverse transform, which repeats each
        // CIR periodically in time.
        std::vector<cvec> traces(quiet.num_tx);
        for (std::size_t u = 1; u <= quiet.num_tx; ++u) {
            const auto& occ = pilots.allocation[u - 1];
            const cvec comb = ls_estimate(y_f, pilots.per_tx[u - 1], occ);
            cvec filled(quiet.n_fft, cpx{0.0, 0.0});
            for (std::size_t m = 0; m < occ.size(); ++m)
                filled[occ[m]] = comb[m];
            traces[u - 1] = idft(filled);
        }
        out << "n";
        for (std::size_t u = 1; u <= quiet.num_tx; ++u)
            out << ",cir_magnitude_tx" << u;
        out << '\n';
        for (std::size_t n = 0; n < quiet.n_fft; ++n) {
            out << n;
            for (const auto& trace : traces)
                out << ',' << fmt(std::abs(trace[n]));
            out << '\n';
        }
    }
    if (!out)
        throw std::runtime_error("dump_cir_snapshot: write failed: " + path);
}

void write_complexity_csv(std::ostream& out,
                          const std::vector<std::uint64_t>& u_list,
                          std::uint64_t n) {
    out << "scheme,U,N,tx_additions,tx_multiplications,rx_additions,"
           "rx_multiplications\n";
    for (const Scheme scheme : {Scheme::CI_ISAC, Scheme::PS_ISAC})
        for (const std::uint64_t u : u_list) {
            const ComplexityReport r = complexity(scheme, u, n);
            out << to_string(r.scheme) << ',' << r.num_tx << ',' << r.n_fft
                << ',' << r.tx_additions << ',' << r.tx_multiplications << ','
                << r.rx_additions << ',' << r.rx_multiplications << '\n';
        }
}

void write_range_csv(std::ostream& out,
                     const std::vector<std::uint64_t>& u_list,
                     const RangeConfig& rc) {
    out << "scheme,U,n_pilot,r_max_m\n";
    for (const std::uint64_t u : u_list) {
        if (u == 0 || rc.n_fft % u != 0)
            throw std::invalid_argument(
                "write_range_csv: U must divide n_fft for ci-isac rows");
        RangeConfig ci = rc;
        ci.n_pilot = rc.n_fft / u;
        out << "ci-isac," << u << ',' << ci.n_pilot << ','
            << fmt(max_unambiguous_range(ci)) << '\n';
    }
    RangeConfig ps = rc;
    ps.n_pilot = rc.n_fft;
    for (const std::uint64_t u : u_list)
        out << "ps-isac," << u << ',' << ps.n_pilot << ','
            << fmt(max_unambiguous_range(ps)) << '\n';
}

void emit_tables(const std::vector<std::uint64_t>& u_list, std::uint64_t n,
                 const RangeConfig& rc, const std::string& path) {
    if (u_list.empty())
        throw std::invalid_argument("emit_tables: U list must be non-empty");
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("emit_tables: cannot open output file: " +
                                 path);
    out.imbue(std::locale::classic());
    out << "# computational complexity (real operations per OFDM symbol)\n";
    write_complexity_csv(out, u_list, n);
    out << "\n# maximum unambiguous range\n";
    write_range_csv(out, u_list, rc);
    if (!out) throw std::runtime_error("emit_tables: write failed: " + path);
}

} // namespace psisac
