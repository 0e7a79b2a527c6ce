#include "psisac/waveform.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psisac {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string lowered(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::replace(s.begin(), s.end(), '_', '-');
    return s;
}

} // namespace

std::string to_string(Scheme s) {
    return s == Scheme::PS_ISAC ? "ps-isac" : "ci-isac";
}

std::string to_string(PowerMode m) {
    return m == PowerMode::CONSTRAINED ? "constrained" : "unconstrained";
}

Scheme scheme_from_string(std::string_view name) {
    const std::string s = lowered(name);
    if (s == "ps-isac" || s == "ps") return Scheme::PS_ISAC;
    if (s == "ci-isac" || s == "ci") return Scheme::CI_ISAC;
    throw config_error("unknown scheme '" + std::string(name) +
                       "' (expected ps-isac or ci-isac)");
}

PowerMode power_mode_from_string(std::string_view name) {
    const std::string s = lowered(name);
    if (s == "constrained") return PowerMode::CONSTRAINED;
    if (s == "unconstrained") return PowerMode::UNCONSTRAINED;
    throw config_error("unknown power mode '" + std::string(name) +
                       "' (expected constrained or unconstrained)");
}

void SystemConfig::validate() const {
    if (!is_pow2(n_fft) || n_fft < 2)
        throw config_error("n_fft must be a power of two >= 2");
    if (n_cp == 0 || n_cp >= n_fft)
        throw config_error("n_cp must satisfy 0 < n_cp < n_fft");
    if (num_tx == 0) throw config_error("num_tx must be positive");
    if (num_taps == 0 || num_taps > n_cp)
        throw config_error("num_taps must satisfy 0 < num_taps <= n_cp");
    if (!(noise_variance >= 0.0))
        throw config_error("noise_variance must be non-negative");
    if (!(pilot_ratio > 0.0) || !(pilot_ratio <= 1.0))
        throw config_error("pilot_ratio must lie in (0, 1]");
    if (scheme == Scheme::PS_ISAC) {
        if (pilot_ratio != 1.0)
            throw config_error("PS-ISAC requires pilot_ratio = 1");
        if (num_tx * n_cp > n_fft)
            throw config_error(
                "PS-ISAC requires num_tx * n_cp <= n_fft (CIR windows overlap)");
    } else {
        if (n_fft % num_tx != 0)
            throw config_error(
                "CI-ISAC requires num_tx to divide n_fft (integer comb size)");
        if (std::abs(pilot_ratio * static_cast<double>(num_tx) - 1.0) > 1e-12)
            throw config_error("CI-ISAC requires pilot_ratio = 1/num_tx");
    }
}

PilotGrid generate_pilots(const SystemConfig& cfg, RngStream& rng) {
    cfg.validate();
    const std::size_t n = cfg.n_fft;
    const std::size_t u_count = cfg.num_tx;
    PilotGrid grid;
    grid.per_tx.resize(u_count);
    grid.allocation.resize(u_count);

    const auto qpsk = [&rng]() {
        static constexpr double s = std::numbers::sqrt2 / 2.0;
        switch (rng.next_u64() & 3) {
            case 0: return cpx{s, s};
            case 1: return cpx{-s, s};
            case 2: return cpx{-s, -s};
            default: return cpx{s, -s};
        }
    };

    if (cfg.scheme == Scheme::PS_ISAC) {
        // One shared base sequence on the full grid; power modes coincide
        // because PR = 1.
        cvec base(n);
        for (auto& v : base) v = qpsk();
        std::vector<std::size_t> all(n);
        for (std::size_t k = 0; k < n; ++k) all[k] = k;
        for (std::size_t u = 0; u < u_count; ++u) {
            grid.per_tx[u] = base;
            grid.allocation[u] = all;
        }
    } else {
        const double scale =
            cfg.power_mode == PowerMode::UNCONSTRAINED
                ? std::sqrt(1.0 / cfg.pilot_ratio)
                : 1.0;
        for (std::size_t u = 0; u < u_count; ++u) {
            grid.per_tx[u].assign(n, cpx{0.0, 0.0});
            for (std::size_t k = u; k < n; k += u_count) {
                grid.per_tx[u][k] = qpsk() * scale;
                grid.allocation[u].push_back(k);
            }
        }
    }
    return grid;
}

cvec phase_shift(const cvec& pilots, std::size_t tx_index, std::size_t n_cp,
                 std::size_t n_fft) {
    if (pilots.size() != n_fft)
        throw std::invalid_argument("phase_shift: pilots length must equal n_fft");
    if (tx_index == 0)
        throw std::invalid_argument("phase_shift: tx_index is 1-based");
    const std::size_t shift = (tx_index - 1) * n_cp;
    if (shift >= n_fft)
        throw std::invalid_argument(
            "phase_shift: shift amount (tx_index-1)*n_cp must be < n_fft");
    cvec out(n_fft);
    for (std::size_t k = 0; k < n_fft; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(shift) / static_cast<double>(n_fft);
        out[k] = pilots[k] * cpx{std::cos(ang), std::sin(ang)};
    }
    return out;
}

cvec add_cp(const cvec& time, std::size_t n_cp) {
    if (n_cp >= time.size())
        throw std::invalid_argument("add_cp: n_cp must be < symbol length");
    cvec out;
    out.reserve(time.size() + n_cp);
    out.insert(out.end(), time.end() - static_cast<std::ptrdiff_t>(n_cp), time.end());
    out.insert(out.end(), time.begin(), time.end());
    return out;
}

cvec remove_cp(const cvec& time_with_cp, std::size_t n_cp) {
    if (time_with_cp.size() <= n_cp)
        throw std::invalid_argument("remove_cp: input shorter than n_cp + 1");
    return cvec(time_with_cp.begin() + static_cast<std::ptrdiff_t>(n_cp),
                time_with_cp.end());
}

cvec modulate_tx(const SystemConfig& cfg, const PilotGrid& pilots,
                 std::size_t tx_index) {
    cfg.validate();
    if (tx_index == 0 || tx_index > cfg.num_tx)
        throw std::invalid_argument("modulate_tx: tx_index out of range");
    if (pilots.per_tx.size() != cfg.num_tx ||
        pilots.per_tx[tx_index - 1].size() != cfg.n_fft)
        throw config_error("modulate_tx: pilot grid does not match config");
    const cvec& grid = pilots.per_tx[tx_index - 1];
    const cvec freq = cfg.scheme == Scheme::PS_ISAC
                          ? phase_shift(grid, tx_index, cfg.n_cp, cfg.n_fft)
                          : grid;
    return add_cp(idft(freq), cfg.n_cp);
}

} // namespace psisac
