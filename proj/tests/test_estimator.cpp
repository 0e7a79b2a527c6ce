#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "psisac/channel.hpp"
#include "psisac/estimator.hpp"
#include "psisac/numerics.hpp"
#include "support/reference.hpp"

using namespace psisac;
using namespace psisac::testref;

namespace {

struct Scenario {
    PilotGrid pilots;
    std::vector<ChannelRealization> channels;
    cvec y; ///< received symbol with CP
};

Scenario make_trial(const SystemConfig& cfg, std::uint64_t seed,
                    double noise_variance) {
    Scenario s;
    RngStream pilot_rng(seed, 0);
    s.pilots = generate_pilots(cfg, pilot_rng);
    std::vector<cvec> signals(cfg.num_tx);
    s.channels.resize(cfg.num_tx);
    for (std::size_t u = 1; u <= cfg.num_tx; ++u) {
        RngStream ch_rng(seed, 100 + u);
        s.channels[u - 1] = draw_channel(ch_rng, cfg.num_taps, cfg.n_fft);
        signals[u - 1] = apply_channel(modulate_tx(cfg, s.pilots, u),
                                       s.channels[u - 1], cfg.n_cp);
    }
    RngStream noise_rng(seed, 999);
    s.y = superpose_and_add_noise(signals, noise_rng, noise_variance);
    return s;
}

/// Isolated single-transmitter LS: transmitter u alone on the air, per-bin
/// division against its own known pilots on its occupied bins.
cvec genie_ls(const SystemConfig& cfg, const Scenario& s, std::size_t u) {
    const cvec y_alone = apply_channel(modulate_tx(cfg, s.pilots, u),
                                       s.channels[u - 1], cfg.n_cp);
    const cvec y_f = dft(remove_cp(y_alone, cfg.n_cp));
    const cvec known =
        cfg.scheme == Scheme::PS_ISAC
            ? phase_shift(s.pilots.per_tx[0], u, cfg.n_cp, cfg.n_fft)
            : s.pilots.per_tx[u - 1];
    return ls_estimate(y_f, known, s.pilots.allocation[u - 1]);
}

SystemConfig fig2_config() {
    SystemConfig cfg;
    cfg.n_fft = 32;
    cfg.n_cp = 8;
    cfg.num_tx = 4;
    cfg.num_taps = 4;
    cfg.scheme = Scheme::PS_ISAC;
    cfg.pilot_ratio = 1.0;
    return cfg;
}

} // namespace

TEST_CASE("ls_estimate divides received bins by known pilots") {
    const cvec y{{2.0, 0.0}};
    const cvec x{{1.0, 1.0}};
    const cvec h = ls_estimate(y, x, {0});
    REQUIRE(h.size() == 1);
    CHECK(std::abs(h[0] - cpx{1.0, -1.0}) < 1e-15);
}

TEST_CASE("ls_estimate compacts to the occupied set and rejects zero pilots") {
    const cvec y{{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {4.0, 0.0}};
    const cvec x{{1.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {2.0, 0.0}};
    const cvec h = ls_estimate(y, x, {0, 2});
    REQUIRE(h.size() == 2);
    CHECK(std::abs(h[1] - cpx{6.0, 0.0}) < 1e-15);
    CHECK_THROWS_AS(ls_estimate(y, x, {1}), std::domain_error);
    CHECK_THROWS_AS(ls_estimate(y, x, {4}), std::invalid_argument);
    CHECK_THROWS_AS(ls_estimate(y, cvec(3), {0}), std::invalid_argument);
}

TEST_CASE("noiseless PS separation recovers every transmitter exactly") {
    const SystemConfig cfg = fig2_config();
    const Scenario s = make_trial(cfg, 2024, 0.0);
    const EstimationResult est = run_receiver(s.y, s.pilots, cfg);
    REQUIRE(est.per_tx_cfr.size() == cfg.num_tx);
    REQUIRE(est.joint_cir.size() == cfg.n_fft);
    for (std::size_t u = 0; u < cfg.num_tx; ++u)
        CHECK(max_abs_diff(est.per_tx_cfr[u], s.channels[u].cfr) < 1e-9);
}

TEST_CASE("joint CIR confines each transmitter to its own window") {
    SystemConfig cfg = fig2_config();
    cfg.n_fft = 64; // windows cover [0, 32): the rest must stay empty
    const Scenario s = make_trial(cfg, 7, 0.0);
    const EstimationResult est = run_receiver(s.y, s.pilots, cfg);
    double total = 0.0;
    double outside = 0.0;
    for (std::size_t n = 0; n < est.joint_cir.size(); ++n) {
        const double p = std::norm(est.joint_cir[n]);
        total += p;
        if (n >= cfg.num_tx * cfg.n_cp) outside += p;
    }
    CHECK(outside < 1e-10 * total);
    // Within each window only the first num_taps samples carry energy.
    for (std::size_t u = 0; u < cfg.num_tx; ++u)
        for (std::size_t l = cfg.num_taps; l < cfg.n_cp; ++l)
            CHECK(std::abs(est.joint_cir[u * cfg.n_cp + l]) <
                  1e-10 * std::sqrt(total));
}

TEST_CASE("per-transmitter CFRs are the transforms of re-centered windows") {
    const SystemConfig cfg = fig2_config();
    const Scenario s = make_trial(cfg, 11, 0.05);
    const EstimationResult est = run_receiver(s.y, s.pilots, cfg);
    for (std::size_t u = 0; u < cfg.num_tx; ++u) {
        cvec windowed(cfg.n_fft, cpx{0.0, 0.0});
        for (std::size_t l = 0; l < cfg.n_cp; ++l)
            windowed[l] = est.joint_cir[u * cfg.n_cp + l];
        CHECK(max_abs_diff(est.per_tx_cfr[u], direct_dft(windowed)) < 1e-12);
    }
}

TEST_CASE("single-transmitter PS reduces to window denoising") {
    SystemConfig cfg = fig2_config();
    cfg.num_tx = 1;
    const Scenario s = make_trial(cfg, 3, 0.0);
    const EstimationResult est = run_receiver(s.y, s.pilots, cfg);
    CHECK(max_abs_diff(est.per_tx_cfr[0], s.channels[0].cfr) < 1e-9);
    double outside = 0.0;
    for (std::size_t n = cfg.n_cp; n < cfg.n_fft; ++n)
        outside += std::norm(est.joint_cir[n]);
    CHECK(outside < 1e-20);
}

TEST_CASE("PS windowing keeps the n_cp/N share of the noise") {
    SystemConfig cfg;
    cfg.n_fft = 64;
    cfg.n_cp = 16;
    cfg.num_tx = 4;
    cfg.num_taps = 15;
    cfg.noise_variance = 0.2;
    const double expected = cfg.noise_variance * 16.0 / 64.0;
    double acc = 0.0;
    const int trials = 2500;
    for (int t = 0; t < trials; ++t) {
        const Scenario s = make_trial(cfg, 5000 + t, cfg.noise_variance);
        const EstimationResult est = run_receiver(s.y, s.pilots, cfg);
        for (std::size_t u = 0; u < cfg.num_tx; ++u) {
            double err = 0.0;
            for (std::size_t k = 0; k < cfg.n_fft; ++k)
                err += std::norm(est.per_tx_cfr[u][k] - s.channels[u].cfr[k]);
            acc += err / static_cast<double>(cfg.n_fft);
        }
    }
    const double measured = acc / (trials * 4.0);
    CHECK(std::abs(measured / expected - 1.0) < 0.05);
}

TEST_CASE("noiseless CI estimation is exact on all bins in both power modes") {
    for (const PowerMode mode :
         {PowerMode::CONSTRAINED, PowerMode::UNCONSTRAINED}) {
        SystemConfig cfg;
        cfg.n_fft = 64;
        cfg.n_cp = 16;
        cfg.num_tx = 4;
        cfg.num_taps = 15;
        cfg.scheme = Scheme::CI_ISAC;
        cfg.pilot_ratio = 0.25;
        cfg.power_mode = mode;
        const Scenario s = make_trial(cfg, 31, 0.0);
        const EstimationResult est = run_receiver(s.y, s.pilots, cfg);
        CHECK(est.joint_cir.empty());
        for (std::size_t u = 0; u < cfg.num_tx; ++u)
            CHECK(max_abs_diff(est.per_tx_cfr[u], s.channels[u].cfr) < 1e-9);
    }
}

TEST_CASE("CI estimation rejects overlapping occupied sets") {
    SystemConfig cfg;
    cfg.n_fft = 16;
    cfg.n_cp = 4;
    cfg.num_tx = 4;
    cfg.num_taps = 4;
    cfg.scheme = Scheme::CI_ISAC;
    cfg.pilot_ratio = 0.25;
    RngStream rng(1, 0);
    PilotGrid grid = generate_pilots(cfg, rng);
    grid.allocation[1] = grid.allocation[0];
    const cvec y_f(cfg.n_fft, cpx{1.0, 0.0});
    CHECK_THROWS_AS(estimate_ci_isac(y_f, grid, cfg), config_error);
}

TEST_CASE("receiver equals the isolated single-transmitter genie") {
    SystemConfig ps;
    ps.n_fft = 256;
    ps.n_cp = 64;
    ps.num_tx = 4;
    ps.num_taps = 63;
    ps.scheme = Scheme::PS_ISAC;
    const Scenario sp = make_trial(ps, 77, 0.0);
    const EstimationResult ep = run_receiver(sp.y, sp.pilots, ps);
    for (std::size_t u = 1; u <= ps.num_tx; ++u) {
        const cvec genie = genie_ls(ps, sp, u);
        double worst = 0.0;
        for (std::size_t k = 0; k < ps.n_fft; ++k)
            worst = std::max(worst,
                             std::abs(ep.per_tx_cfr[u - 1][k] - genie[k]));
        CHECK(worst < 1e-9);
    }

    SystemConfig ci = ps;
    ci.scheme = Scheme::CI_ISAC;
    ci.pilot_ratio = 0.25;
    const Scenario sc = make_trial(ci, 78, 0.0);
    const EstimationResult ec = run_receiver(sc.y, sc.pilots, ci);
    for (std::size_t u = 1; u <= ci.num_tx; ++u) {
        const cvec genie = genie_ls(ci, sc, u);
        const auto& occ = sc.pilots.allocation[u - 1];
        double worst = 0.0;
        for (std::size_t i = 0; i < occ.size(); ++i)
            worst = std::max(
                worst, std::abs(ec.per_tx_cfr[u - 1][occ[i]] - genie[i]));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("zero received signal estimates zero channels") {
    const SystemConfig cfg = fig2_config();
    RngStream rng(4, 0);
    const PilotGrid pilots = generate_pilots(cfg, rng);
    const cvec y(cfg.n_fft + cfg.n_cp, cpx{0.0, 0.0});
    const EstimationResult est = run_receiver(y, pilots, cfg);
    for (const cvec& cfr : est.per_tx_cfr)
        for (const cpx& v : cfr) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("receiver validates input length and scheme pairing") {
    const SystemConfig cfg = fig2_config();
    RngStream rng(4, 0);
    const PilotGrid pilots = generate_pilots(cfg, rng);
    CHECK_THROWS_AS(run_receiver(cvec(cfg.n_fft), pilots, cfg),
                    std::invalid_argument);
    const cvec h(cfg.n_fft, cpx{1.0, 0.0});
    SystemConfig ci = cfg;
    ci.scheme = Scheme::CI_ISAC;
    ci.pilot_ratio = 0.25;
    CHECK_THROWS_AS(separate_ps_isac(h, ci), config_error);
    CHECK_THROWS_AS(separate_ps_isac(cvec(8), cfg), std::invalid_argument);
    CHECK_THROWS_AS(estimate_ci_isac(h, pilots, cfg), config_error);
}
