#ifndef PSISAC_HARNESS_HPP
#define PSISAC_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "psisac/analysis.hpp"
#include "psisac/types.hpp"
#include "psisac/waveform.hpp"

namespace psisac {

/// Monte Carlo sweep over (scheme x pilot ratio x SNR). Each grid point
/// derives its own SystemConfig: N_CP = N*PR, U = 1/PR, N_CP-1 channel taps,
/// noise_variance = 10^(-snr_db/10) (SNR per pilot subcarrier with
/// unit-power pilots; snr_db = inf gives a noiseless point).
struct ExperimentSpec {
    SystemConfig base;
    std::vector<Scheme> schemes;
    std::vector<double> pilot_ratios;
    std::vector<double> snr_grid_db;
    std::uint64_t num_trials = 10000;
    std::string output_path = "mse.csv";
    unsigned threads = 0; ///< 0 = hardware concurrency
};

/// One aggregated CSV row.
struct ResultRow {
    Scheme scheme;
    std::size_t num_tx;
    double pilot_ratio;
    double snr_db;
    std::uint64_t trials;
    double mse_mean;
    double mse_stderr;
};

/// Parses a decimal, "inf", or an a/b fraction such as "1/16"; `what`
/// names the source in error messages.
double parse_ratio(const std::string& text, const std::string& what);

/// Loads the flat key-value config documented in the README
/// (n_fft, schemes, pilot_ratios, snr_db, trials, seed, power_mode, ...).
ExperimentSpec load_experiment_spec(const std::string& path);

/// Derives the SystemConfig of one grid point (throws config_error naming
/// the grid point if the derived config is invalid).
SystemConfig grid_point_config(const ExperimentSpec& spec, Scheme scheme,
                               double pilot_ratio, double snr_db);

/// One end-to-end trial (pilots -> channels -> superposition + AWGN ->
/// receiver), returning the trial MSE. Randomness comes only from
/// (seed, grid_index, trial_id), never from scheduling.
double run_trial(const SystemConfig& cfg, std::uint64_t seed,
                 std::uint64_t grid_index, std::uint64_t trial_id);

/// Runs the full sweep, writes one CSV row per grid point to
/// spec.output_path (mean MSE and standard error over num_trials) and
/// returns the rows. Output bytes depend only on (spec, seed) - never on
/// thread count or scheduling. The output file is opened before any
/// computation so an unwritable path fails fast.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// One noiseless trial at cfg; writes the receiver-side CIR magnitudes as
/// CSV for external plotting. PS_ISAC dumps |joint CIR|; CI_ISAC dumps the
/// per-transmitter diagnostic traces obtained by zero-filling each comb
/// estimate to length N before a size-N inverse transform (this view is
/// periodic in time; it is not part of the estimation path).
void dump_cir_snapshot(const SystemConfig& cfg, RngStream& rng,
                       const std::string& path);

/// Writes the complexity table (both schemes, each U in u_list) and the
/// unambiguous-range table into one CSV file with two '#'-headed sections.
void emit_tables(const std::vector<std::uint64_t>& u_list, std::uint64_t n,
                 const RangeConfig& rc, const std::string& path);

/// Single-section writers shared by emit_tables and the CLI.
void write_complexity_csv(std::ostream& out,
                          const std::vector<std::uint64_t>& u_list,
                          std::uint64_t n);
void write_range_csv(std::ostream& out, const std::vector<std::uint64_t>& u_list,
                     const RangeConfig& rc);

} // namespace psisac

#endif
