#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "psisac/channel.hpp"
#include "psisac/waveform.hpp"
#include "support/reference.hpp"

using namespace psisac;
using namespace psisac::testref;

TEST_CASE("draw_channel produces taps plus the matching frequency response") {
    RngStream rng(21, 0);
    const ChannelRealization ch = draw_channel(rng, 6, 32);
    REQUIRE(ch.taps.size() == 6);
    REQUIRE(ch.cfr.size() == 32);
    for (std::size_t k = 0; k < 32; ++k) {
        cpx acc{0.0, 0.0};
        for (std::size_t l = 0; l < 6; ++l) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(l) / 32.0;
            acc += ch.taps[l] * std::polar(1.0, ang);
        }
        CHECK(std::abs(ch.cfr[k] - acc) < 1e-10);
    }
}

TEST_CASE("draw_channel has unit average power and CN(0,1) bins") {
    RngStream rng(22, 0);
    double tap_power = 0.0;
    double bin_power = 0.0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) {
        const ChannelRealization ch = draw_channel(rng, 8, 32);
        for (const cpx& t : ch.taps) tap_power += std::norm(t);
        bin_power += std::norm(ch.cfr[3]);
    }
    CHECK(std::abs(tap_power / draws - 1.0) < 0.05);
    CHECK(std::abs(bin_power / draws - 1.0) < 0.05);
}

TEST_CASE("draw_channel is deterministic per stream and rejects bad sizes") {
    RngStream a(5, 9);
    RngStream b(5, 9);
    const ChannelRealization ca = draw_channel(a, 4, 16);
    const ChannelRealization cb = draw_channel(b, 4, 16);
    CHECK(max_abs_diff(ca.taps, cb.taps) == 0.0);
    RngStream rng(5, 10);
    CHECK_THROWS_AS(draw_channel(rng, 0, 16), std::invalid_argument);
    CHECK_THROWS_AS(draw_channel(rng, 17, 16), std::invalid_argument);
}

TEST_CASE("apply_channel equals direct linear convolution") {
    std::mt19937_64 gen(401);
    const cvec x = random_cvec(gen, 40);
    ChannelRealization ch;
    ch.taps = random_cvec(gen, 8);
    const cvec y = apply_channel(x, ch, 8);
    CHECK(max_abs_diff(y, direct_convolve(x, ch.taps)) < 1e-12);
}

TEST_CASE("apply_channel rejects channels longer than the cyclic prefix") {
    std::mt19937_64 gen(402);
    const cvec x = random_cvec(gen, 40);
    ChannelRealization ch;
    ch.taps = random_cvec(gen, 9);
    CHECK_THROWS_AS(apply_channel(x, ch, 8), config_error);
    CHECK_THROWS_AS(apply_channel(cvec{}, ch, 16), std::invalid_argument);
}

TEST_CASE("CP framing turns the channel into a per-bin product") {
    std::mt19937_64 gen(403);
    const std::size_t n = 64;
    const std::size_t n_cp = 16;
    const cvec x_f = random_cvec(gen, n);
    ChannelRealization ch;
    ch.taps = random_cvec(gen, 10);
    cvec padded(n, cpx{0.0, 0.0});
    for (std::size_t l = 0; l < ch.taps.size(); ++l) padded[l] = ch.taps[l];
    const cvec cfr_scaled = direct_dft(padded); // cfr / sqrt(N)

    const cvec rx = apply_channel(add_cp(direct_idft(x_f), n_cp), ch, n_cp);
    const cvec y_f = direct_dft(remove_cp(rx, n_cp));
    const double root_n = std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        CHECK(std::abs(y_f[k] - x_f[k] * cfr_scaled[k] * root_n) < 1e-10);
}

TEST_CASE("superpose_and_add_noise sums signals and calibrated noise") {
    const cvec a{{1.0, 0.0}, {0.0, 1.0}};
    const cvec b{{2.0, -1.0}, {1.0, 1.0}};
    RngStream rng(31, 0);
    const cvec clean = superpose_and_add_noise({a, b}, rng, 0.0);
    CHECK(std::abs(clean[0] - cpx{3.0, -1.0}) == 0.0);
    CHECK(std::abs(clean[1] - cpx{1.0, 2.0}) == 0.0);

    const std::size_t n = 200000;
    const cvec zeros(n, cpx{0.0, 0.0});
    RngStream rng2(32, 0);
    const cvec noisy = superpose_and_add_noise({zeros}, rng2, 0.25);
    double power = 0.0;
    for (const cpx& v : noisy) power += std::norm(v);
    CHECK(std::abs(power / static_cast<double>(n) - 0.25) < 0.01);

    RngStream rng3(33, 0);
    CHECK_THROWS_AS(superpose_and_add_noise({}, rng3, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(superpose_and_add_noise({a, cvec(3)}, rng3, 0.0),
                    std::invalid_argument);
}
