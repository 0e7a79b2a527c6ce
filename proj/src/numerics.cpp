#include "psisac/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace psisac {

namespace {

// Philox2x64 round constants (Random123).
constexpr std::uint64_t kPhiloxMul = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kPhiloxWeyl = 0x9E3779B97F4A7C15ULL;

// One 10-round Philox2x64 block: counter (c0, c1) under the given key.
std::pair<std::uint64_t, std::uint64_t> philox2x64_10(std::uint64_t key,
                                                      std::uint64_t c0,
                                                      std::uint64_t c1) {
    for (int round = 0; round < 10; ++round) {
        const unsigned __int128 prod = static_cast<unsigned __int128>(kPhiloxMul) * c0;
        const auto lo = static_cast<std::uint64_t>(prod);
        const auto hi = static_cast<std::uint64_t>(prod >> 64);
        c0 = hi ^ key ^ c1;
        c1 = lo;
        key += kPhiloxWeyl;
    }
    return {c0, c1};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t RngStream::next_u64() noexcept {
    if (has_pending_) {
        has_pending_ = false;
        return pending_;
    }
    const auto [a, b] = philox2x64_10(key_, block_++, id_);
    pending_ = b;
    has_pending_ = true;
    return a;
}

double RngStream::uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RngStream RngStream::substream(std::uint64_t k) const noexcept {
    return RngStream(key_, splitmix64(id_ ^ splitmix64(k)));
}

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Forward twiddles exp(-j2*pi*k/n) for k < n/2, cached per size.
const cvec& twiddle_table(std::size_t n) {
    thread_local std::map<std::size_t, cvec> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    cvec tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n);
        tw[k] = {std::cos(ang), std::sin(ang)};
    }
    return cache.emplace(n, std::move(tw)).first->second;
}

// In-place radix-2 FFT, no scaling. inverse flips the kernel sign.
void fft_radix2(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const cvec& tw = twiddle_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cpx& w = tw[k * stride];
                const double wr = w.real();
                const double wi = inverse ? -w.imag() : w.imag();
                cpx& lo = a[i + k];
                cpx& hi = a[i + k + half];
                const double vr = hi.real() * wr - hi.imag() * wi;
                const double vi = hi.real() * wi + hi.imag() * wr;
                const double ur = lo.real();
                const double ui = lo.imag();
                lo = {ur + vr, ui + vi};
                hi = {ur - vr, ui - vi};
            }
        }
    }
}

// Direct O(N^2) summation for non-power-of-two sizes.
cvec transform_direct(const cvec& x, bool inverse) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    cvec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double accr = 0.0;
        double acci = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double ang = sign * 2.0 * std::numbers::pi *
                               static_cast<double>(k) * static_cast<double>(m) /
                               static_cast<double>(n);
            const double cr = std::cos(ang);
            const double ci = std::sin(ang);
            accr += x[m].real() * cr - x[m].imag() * ci;
            acci += x[m].real() * ci + x[m].imag() * cr;
        }
        out[k] = {accr, acci};
    }
    return out;
}

cvec unitary_transform(const cvec& x, bool inverse) {
    if (x.empty()) throw std::invalid_argument("dft/idft: input must be non-empty");
    cvec out;
    if (is_pow2(x.size())) {
        out = x;
        fft_radix2(out, inverse);
    } else {
        out = transform_direct(x, inverse);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out) v *= scale;
    return out;
}

} // namespace

cvec dft(const cvec& x) { return unitary_transform(x, false); }

cvec idft(const cvec& x) { return unitary_transform(x, true); }

cvec complex_gaussian(RngStream& rng, std::size_t n, double variance) {
    if (n == 0) throw std::invalid_argument("complex_gaussian: n must be >= 1");
    if (!(variance > 0.0))
        throw std::invalid_argument("complex_gaussian: variance must be positive");
    cvec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Box-Muller; u1 in (0,1] keeps the log finite.
        const double u1 = 1.0 - rng.uniform01();
        const double u2 = rng.uniform01();
        const double r = std::sqrt(-variance * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        out[i] = {r * std::cos(ang), r * std::sin(ang)};
    }
    return out;
}

} // namespace psisac
