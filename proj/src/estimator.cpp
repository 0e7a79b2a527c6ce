#include "psisac/estimator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psisac {

cvec ls_estimate(const cvec& y_f, const cvec& known_pilots,
                 const std::vector<std::size_t>& occupied) {
    if (known_pilots.size() != y_f.size())
        throw std::invalid_argument("ls_estimate: pilot/received length mismatch");
    cvec out;
    out.reserve(occupied.size());
    for (const std::size_t k : occupied) {
        if (k >= y_f.size())
            throw std::invalid_argument("ls_estimate: occupied index out of range");
        const cpx p = known_pilots[k];
        if (p.real() == 0.0 && p.imag() == 0.0)
            throw std::domain_error("ls_estimate: zero pilot on occupied bin " +
                                    std::to_string(k));
        out.push_back(y_f[k] / p);
    }
    return out;
}

EstimationResult separate_ps_isac(const cvec& h_f_joint, const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.scheme != Scheme::PS_ISAC)
        throw config_error("separate_ps_isac: config scheme is not ps-isac");
    if (h_f_joint.size() != cfg.n_fft)
        throw std::invalid_argument("separate_ps_isac: estimate length != n_fft");

    EstimationResult res;
    res.joint_cir = idft(h_f_joint);
    res.per_tx_cfr.resize(cfg.num_tx);
    cvec padded(cfg.n_fft);
    for (std::size_t u = 1; u <= cfg.num_tx; ++u) {
        const std::size_t start = (u - 1) * cfg.n_cp;
        // Keep only this transmitter's window and shift it back to the
        // origin, undoing the transmit-side phase ramp.
        std::fill(padded.begin(), padded.end(), cpx{0.0, 0.0});
        for (std::size_t l = 0; l < cfg.n_cp; ++l)
            padded[l] = res.joint_cir[start + l];
        res.per_tx_cfr[u - 1] = dft(padded);
    }
    return res;
}

EstimationResult estimate_ci_isac(const cvec& y_f, const PilotGrid& pilots,
                                  const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.scheme != Scheme::CI_ISAC)
        throw config_error("estimate_ci_isac: config scheme is not ci-isac");
    if (y_f.size() != cfg.n_fft)
        throw std::invalid_argument("estimate_ci_isac: received length != n_fft");
    if (pilots.per_tx.size() != cfg.num_tx ||
        pilots.allocation.size() != cfg.num_tx)
        throw config_error("estimate_ci_isac: pilot grid does not match config");

    std::vector<char> seen(cfg.n_fft, 0);
    for (const auto& occ : pilots.allocation)
        for (const std::size_t k : occ) {
            if (k >= cfg.n_fft || seen[k])
                throw config_error(
                    "estimate_ci_isac: occupied subcarrier sets overlap");
            seen[k] = 1;
        }

    const std::size_t n = cfg.n_fft;
    EstimationResult res;
    res.per_tx_cfr.resize(cfg.num_tx);
    for (std::size_t u = 1; u <= cfg.num_tx; ++u) {
        const auto& occ = pilots.allocation[u - 1];
        const cvec comb = ls_estimate(y_f, pilots.per_tx[u - 1], occ);
        const std::size_t n_p = comb.size();
        const cvec cir_short = idft(comb);
        // The comb occupied by transmitter u is offset by u-1 subcarriers, so
        // the short-grid CIR carries a residual per-tap rotation; undo it and
        // restore the amplitude lost between grid sizes before interpolating
        // back to the full band.
        const double gain = std::sqrt(static_cast<double>(n) /
                                      static_cast<double>(n_p));
        cvec padded(n, cpx{0.0, 0.0});
        for (std::size_t l = 0; l < n_p; ++l) {
            const double ang = 2.0 * std::numbers::pi *
                               static_cast<double>(u - 1) *
                               static_cast<double>(l) / static_cast<double>(n);
            padded[l] = cir_short[l] * cpx{std::cos(ang), std::sin(ang)} * gain;
        }
        res.per_tx_cfr[u - 1] = dft(padded);
    }
    return res;
}

EstimationResult run_receiver(const cvec& y_t_with_cp, const PilotGrid& pilots,
                              const SystemConfig& cfg) {
    cfg.validate();
    if (y_t_with_cp.size() != cfg.n_fft + cfg.n_cp)
        throw std::invalid_argument("run_receiver: input length != n_fft + n_cp");
    const cvec y_f = dft(remove_cp(y_t_with_cp, cfg.n_cp));
    if (cfg.scheme == Scheme::PS_ISAC) {
        if (pilots.per_tx.empty() || pilots.per_tx[0].size() != cfg.n_fft)
            throw config_error("run_receiver: pilot grid does not match config");
        std::vector<std::size_t> all(cfg.n_fft);
        for (std::size_t k = 0; k < cfg.n_fft; ++k) all[k] = k;
        const cvec joint = ls_estimate(y_f, pilots.per_tx[0], all);
        return separate_ps_isac(joint, cfg);
    }
    return estimate_ci_isac(y_f, pilots, cfg);
}

} // namespace psisac
