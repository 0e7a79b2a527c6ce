#ifndef PSISAC_WAVEFORM_HPP
#define PSISAC_WAVEFORM_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "psisac/numerics.hpp"
#include "psisac/types.hpp"

namespace psisac {

/// Pilot allocation scheme. PS_ISAC overlaps all transmitters on the full
/// grid with per-transmitter phase ramps; CI_ISAC interleaves disjoint combs.
enum class Scheme { PS_ISAC, CI_ISAC };

/// CONSTRAINED caps every occupied pilot bin at unit power; UNCONSTRAINED
/// boosts sparse (interleaved) pilots by sqrt(1/PR) to keep total power
/// equal to the full-grid case.
enum class PowerMode { CONSTRAINED, UNCONSTRAINED };

std::string to_string(Scheme s);
std::string to_string(PowerMode m);
Scheme scheme_from_string(std::string_view name);
PowerMode power_mode_from_string(std::string_view name);

/// One scenario: FFT size N, CP length, transmitter count U, pilot ratio PR,
/// scheme, power mode, noise variance, channel tap count and RNG seed.
struct SystemConfig {
    std::size_t n_fft = 256;
    std::size_t n_cp = 64;
    std::size_t num_tx = 4;
    double pilot_ratio = 1.0;
    Scheme scheme = Scheme::PS_ISAC;
    PowerMode power_mode = PowerMode::CONSTRAINED;
    double noise_variance = 0.0;
    std::size_t num_taps = 63;
    std::uint64_t seed = 0;

    /// Throws config_error naming the first violated invariant.
    void validate() const;
};

/// Per-transmitter frequency-domain pilot grids.
/// per_tx[u] has length n_fft with zeros on unallocated bins; allocation[u]
/// lists the occupied bin indices in ascending order. For PS_ISAC every
/// transmitter holds the identical base sequence (the phase ramp is applied
/// at modulation time), so per_tx[0] is the receiver's known x_F.
struct PilotGrid {
    std::vector<cvec> per_tx;
    std::vector<std::vector<std::size_t>> allocation;
};

/// Pseudo-random unit-modulus QPSK pilots (values e^{j*pi*(2m+1)/4}),
/// placed per scheme and scaled per power mode.
PilotGrid generate_pilots(const SystemConfig& cfg, RngStream& rng);

/// Applies transmitter u's phase ramp e^{-j2*pi*k*(u-1)*n_cp/n_fft},
/// which right-shifts the time-domain symbol by (u-1)*n_cp samples.
/// tx_index is 1-based.
cvec phase_shift(const cvec& pilots, std::size_t tx_index, std::size_t n_cp,
                 std::size_t n_fft);

/// Prepends the last n_cp samples as cyclic prefix.
cvec add_cp(const cvec& time, std::size_t n_cp);

/// Drops the first n_cp samples; input length must be N + n_cp.
cvec remove_cp(const cvec& time_with_cp, std::size_t n_cp);

/// Full transmitter for one OFDM symbol: (phase shift for PS_ISAC) ->
/// unitary IDFT -> CP. Output length n_fft + n_cp. tx_index is 1-based.
cvec modulate_tx(const SystemConfig& cfg, const PilotGrid& pilots,
                 std::size_t tx_index);

} // namespace psisac

#endif
