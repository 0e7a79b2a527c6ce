#ifndef PSISAC_CHANNEL_HPP
#define PSISAC_CHANNEL_HPP

#include <cstddef>
#include <vector>

#include "psisac/numerics.hpp"
#include "psisac/types.hpp"

namespace psisac {

/// Time-domain taps (length L) and the matching frequency response on the
/// N-bin grid: cfr(k) = sum_l taps(l) e^{-j2*pi*kl/N}.
struct ChannelRealization {
    cvec taps;
    cvec cfr;
};

/// Frequency-selective Rayleigh realization: taps i.i.d. CN(0, 1/L)
/// (uniform power-delay profile, unit total power), so each cfr bin is
/// marginally CN(0, 1).
ChannelRealization draw_channel(RngStream& rng, std::size_t num_taps,
                                std::size_t n_fft);

/// Linear convolution of a CP-framed signal (length N + n_cp) with the
/// channel taps, truncated to the input length. Taps must fit inside the
/// CP or the circular-convolution model breaks (config_error).
cvec apply_channel(const cvec& tx_signal_with_cp, const ChannelRealization& ch,
                   std::size_t n_cp);

/// Elementwise sum of equal-length signals plus CN(0, noise_variance) AWGN;
/// variance 0 adds nothing and consumes no randomness.
cvec superpose_and_add_noise(const std::vector<cvec>& signals, RngStream& rng,
                             double noise_variance);

} // namespace psisac

#endif
