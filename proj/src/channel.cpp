#include "psisac/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace psisac {

ChannelRealization draw_channel(RngStream& rng, std::size_t num_taps,
                                std::size_t n_fft) {
    if (num_taps == 0) throw std::invalid_argument("draw_channel: num_taps == 0");
    if (num_taps > n_fft)
        throw std::invalid_argument("draw_channel: num_taps exceeds n_fft");
    ChannelRealization ch;
    ch.taps = complex_gaussian(rng, num_taps, 1.0 / static_cast<double>(num_taps));
    cvec padded(n_fft, cpx{0.0, 0.0});
    for (std::size_t i = 0; i < num_taps; ++i) padded[i] = ch.taps[i];
    ch.cfr = dft(padded);
    const double root_n = std::sqrt(static_cast<double>(n_fft));
    for (auto& v : ch.cfr) v *= root_n;
    return ch;
}

cvec apply_channel(const cvec& tx_time, const ChannelRealization& ch,
                   std::size_t n_cp) {
    if (tx_time.empty()) throw std::invalid_argument("apply_channel: empty signal");
    if (ch.taps.empty()) throw std::invalid_argument("apply_channel: empty channel");
    if (ch.taps.size() > n_cp)
        throw config_error(
            "apply_channel: channel length exceeds cyclic prefix (inter-symbol "
            "interference would corrupt the estimate)");
    const std::size_t n = tx_time.size();
    const std::size_t l = ch.taps.size();
    cvec out(n, cpx{0.0, 0.0});
    for (std::size_t i = 0; i < l; ++i) {
        const double hr = ch.taps[i].real();
        const double hi = ch.taps[i].imag();
        for (std::size_t t = i; t < n; ++t) {
            const double xr = tx_time[t - i].real();
            const double xi = tx_time[t - i].imag();
            out[t] += cpx{hr * xr - hi * xi, hr * xi + hi * xr};
        }
    }
    return out;
}

cvec superpose_and_add_noise(const std::vector<cvec>& tx_signals, RngStream& rng,
                             double noise_variance) {
    if (tx_signals.empty())
        throw std::invalid_argument("superpose_and_add_noise: no signals");
    const std::size_t n = tx_signals.front().size();
    for (const auto& s : tx_signals)
        if (s.size() != n)
            throw std::invalid_argument(
                "superpose_and_add_noise: signal lengths differ");
    cvec y(n, cpx{0.0, 0.0});
    for (const auto& s : tx_signals)
        for (std::size_t t = 0; t < n; ++t) y[t] += s[t];
    if (noise_variance > 0.0) {
        const cvec w = complex_gaussian(rng, n, noise_variance);
        for (std::size_t t = 0; t < n; ++t) y[t] += w[t];
    }
    return y;
}

} // namespace psisac
