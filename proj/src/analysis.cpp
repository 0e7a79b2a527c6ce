#include "psisac/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "psisac/numerics.hpp"

namespace psisac {

namespace {

std::uint64_t checked_count(std::int64_t v, const char* what) {
    if (v < 0) throw std::logic_error(std::string("negative count: ") + what);
    return static_cast<std::uint64_t>(v);
}

} // namespace

ComplexityReport complexity(Scheme scheme, std::uint64_t u, std::uint64_t n) {
    if (u == 0) throw std::invalid_argument("complexity: u must be >= 1");
    if (n < 2 || !std::has_single_bit(n))
        throw std::invalid_argument("complexity: n must be a power of two >= 2");
    const std::int64_t nn = static_cast<std::int64_t>(n);
    const std::int64_t lg = std::countr_zero(n);
    const std::int64_t fft_add = 3 * nn * lg - 3 * nn + 4;
    const std::int64_t fft_mult = nn * lg - 3 * nn + 4;
    const std::int64_t uu = static_cast<std::int64_t>(u);

    ComplexityReport r;
    r.scheme = scheme;
    r.num_tx = u;
    r.n_fft = n;
    if (scheme == Scheme::CI_ISAC) {
        r.tx_additions = checked_count(uu * fft_add, "tx add");
        r.tx_multiplications = checked_count(uu * fft_mult, "tx mult");
        r.rx_additions = checked_count((2 * uu + 1) * fft_add, "rx add");
        r.rx_multiplications =
            checked_count((2 * uu + 1) * fft_mult + 2 * nn, "rx mult");
    } else {
        r.tx_additions = checked_count(uu * fft_add, "tx add");
        r.tx_multiplications =
            checked_count(uu * (nn * lg - nn + 4), "tx mult");
        r.rx_additions = checked_count((uu + 2) * fft_add, "rx add");
        r.rx_multiplications =
            checked_count((uu + 2) * fft_mult + 2 * nn, "rx mult");
    }
    return r;
}

double max_unambiguous_range(const RangeConfig& rc) {
    if (rc.n_fft == 0 || rc.n_pilot == 0)
        throw std::invalid_argument("max_unambiguous_range: zero grid size");
    if (rc.n_pilot > rc.n_fft)
        throw std::invalid_argument("max_unambiguous_range: n_pilot > n_fft");
    if (!(rc.subcarrier_spacing_hz > 0.0) || !(rc.light_speed_mps > 0.0))
        throw std::invalid_argument(
            "max_unambiguous_range: spacing and light speed must be positive");
    return static_cast<double>(rc.n_pilot) * rc.light_speed_mps /
           (2.0 * static_cast<double>(rc.n_fft) * rc.subcarrier_spacing_hz);
}

double mse(const std::vector<cvec>& true_cfrs, const EstimationResult& estimates) {
    const std::size_t u_count = true_cfrs.size();
    if (u_count == 0 || estimates.per_tx_cfr.size() != u_count)
        throw std::invalid_argument("mse: transmitter count mismatch");
    double acc = 0.0;
    std::size_t bins = 0;
    for (std::size_t u = 0; u < u_count; ++u) {
        const cvec& t = true_cfrs[u];
        const cvec& e = estimates.per_tx_cfr[u];
        if (t.size() != e.size() || t.empty())
            throw std::invalid_argument("mse: CFR length mismatch");
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double dr = e[k].real() - t[k].real();
            const double di = e[k].imag() - t[k].imag();
            acc += dr * dr + di * di;
        }
        bins += t.size();
    }
    return acc / static_cast<double>(bins);
}

std::vector<double> psd(const std::vector<cvec>& signals, std::size_t n_fft) {
    if (signals.empty())
        throw std::invalid_argument("psd: need at least one symbol");
    std::vector<double> accum(n_fft, 0.0);
    for (const auto& s : signals) {
        if (s.size() != n_fft)
            throw std::invalid_argument("psd: signal length != n_fft");
        const cvec spec = dft(s);
        for (std::size_t k = 0; k < n_fft; ++k) {
            const double re = spec[k].real();
            const double im = spec[k].imag();
            accum[k] += re * re + im * im;
        }
    }
    const double inv = 1.0 / static_cast<double>(signals.size());
    std::vector<double> out(n_fft);
    for (std::size_t k = 0; k < n_fft; ++k) {
        const double avg = accum[k] * inv;
        out[k] = avg < 1e-30 ? kPsdFloorDb : 10.0 * std::log10(avg);
    }
    return out;
}

MaskSpec load_mask(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open mask file: " + path);
    MaskSpec mask;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto is_space = [](unsigned char c) { return std::isspace(c); };
        line.erase(line.begin(),
                   std::find_if_not(line.begin(), line.end(), is_space));
        line.erase(std::find_if_not(line.rbegin(), line.rend(), is_space).base(),
                   line.end());
        if (line.empty()) continue;
        std::istringstream ss(line);
        double freq = 0.0;
        double limit = 0.0;
        char comma = 0;
        if (!(ss >> freq >> comma >> limit) || comma != ',' ||
            (ss >> std::ws, !ss.eof()))
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'frequency_offset,limit_db'");
        if (!mask.breakpoints.empty() && freq < mask.breakpoints.back().first)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": breakpoints must be sorted ascending");
        mask.breakpoints.emplace_back(freq, limit);
    }
    if (mask.breakpoints.empty())
        throw config_error(path + ": mask file has no breakpoints");
    return mask;
}

double mask_limit_at(const MaskSpec& mask, double f) {
    if (mask.breakpoints.empty())
        throw config_error("mask_limit_at: mask has no breakpoints");
    const auto& bp = mask.breakpoints;
    if (f <= bp.front().first) return bp.front().second;
    if (f >= bp.back().first) return bp.back().second;
    std::size_t i = 1;
    while (bp[i].first < f) ++i;
    const auto& [f0, l0] = bp[i - 1];
    const auto& [f1, l1] = bp[i];
    return f1 == f0 ? l1 : l0 + (l1 - l0) * (f - f0) / (f1 - f0);
}

std::vector<MaskViolation> mask_check(const std::vector<double>& psd_db,
                                      const MaskSpec& mask) {
    if (mask.breakpoints.empty())
        throw config_error("mask_check: mask has no breakpoints");
    std::vector<MaskViolation> violations;
    const std::size_t n = psd_db.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n);
        const double limit = mask_limit_at(mask, f);
        if (psd_db[k] > limit)
            violations.push_back({k, psd_db[k] - limit});
    }
    return violations;
}

} // namespace psisac
