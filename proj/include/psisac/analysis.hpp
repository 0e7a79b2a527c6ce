#ifndef PSISAC_ANALYSIS_HPP
#define PSISAC_ANALYSIS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "psisac/estimator.hpp"
#include "psisac/types.hpp"
#include "psisac/waveform.hpp"

namespace psisac {

/// Exact real-operation counts for one OFDM symbol (integer arithmetic only).
struct ComplexityReport {
    Scheme scheme;
    std::uint64_t num_tx;
    std::uint64_t n_fft;
    std::uint64_t tx_additions;
    std::uint64_t tx_multiplications;
    std::uint64_t rx_additions;
    std::uint64_t rx_multiplications;
};

/// Closed-form operation counts. Per radix-2 FFT: 3N*log2(N) - 3N + 4 real
/// additions and N*log2(N) - 3N + 4 real multiplications. CI-ISAC spends
/// 2U+1 transforms at the receiver, PS-ISAC U+2 (one shared inverse
/// transform); both add 2N real multiplications for the LS division, and
/// PS-ISAC adds 2N per transmitter for the phase ramp.
ComplexityReport complexity(Scheme scheme, std::uint64_t u, std::uint64_t n);

/// Inputs of the unambiguous-range formula R_max = N_p * c / (2 * N * df).
struct RangeConfig {
    std::uint64_t n_fft = 256;
    std::uint64_t n_pilot = 256;
    double subcarrier_spacing_hz = 15e3;
    double light_speed_mps = 2.998e8;
};

/// Maximum unambiguous range in meters.
double max_unambiguous_range(const RangeConfig& rc);

/// Single-trial MSE: (1/(U*N)) * sum_u sum_k |h_u(k) - est_u(k)|^2.
double mse(const std::vector<cvec>& true_cfrs, const EstimationResult& estimates);

/// dB floor reported for empty bins (average power below 1e-30).
inline constexpr double kPsdFloorDb = -300.0;

/// Averaged periodogram of symbol-length time-domain signals, in dB relative
/// to the flat unit-power-per-bin reference level.
std::vector<double> psd(const std::vector<cvec>& signals, std::size_t n_fft);

/// Piecewise-linear spectral mask. Breakpoints are (normalized frequency
/// bin/N in [0,1], limit in dB relative to the unit-power reference), sorted
/// ascending; the limit is clamped beyond the first/last breakpoint.
struct MaskSpec {
    std::vector<std::pair<double, double>> breakpoints;
};

/// Parses a mask file of `frequency,limit_db` lines ('#' starts a comment).
MaskSpec load_mask(const std::string& path);

/// Interpolated mask limit at normalized frequency f (clamped at the ends).
double mask_limit_at(const MaskSpec& mask, double f);

struct MaskViolation {
    std::size_t bin;
    double excess_db;
};

/// Bins whose PSD exceeds the interpolated mask; empty means compliant.
std::vector<MaskViolation> mask_check(const std::vector<double>& psd_db,
                                      const MaskSpec& mask);

} // namespace psisac

#endif
