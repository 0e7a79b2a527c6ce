#ifndef PSISAC_NUMERICS_HPP
#define PSISAC_NUMERICS_HPP

#include <cstdint>
#include <cstddef>

#include "psisac/types.hpp"

namespace psisac {

/**
 * Counter-based random stream (Philox2x64-10).
 *
 * A stream is fully identified by (seed, stream_id): the seed is the cipher
 * key and the stream id occupies the high word of the counter, so distinct
 * stream ids draw from disjoint counter ranges of the same keyed generator.
 * Identical (seed, stream_id) reproduces the identical sample sequence on
 * every run and under any parallel schedule. A stream is single-owner;
 * hand distinct streams to concurrent workers instead of sharing one.
 */
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
        : key_(seed), id_(stream_id) {}

    std::uint64_t next_u64() noexcept;

    /// Uniform double in [0, 1), built from the top 53 bits of next_u64().
    double uniform01() noexcept;

    /// Child stream with a stream id mixed from (stream_id, k).
    RngStream substream(std::uint64_t k) const noexcept;

    std::uint64_t seed() const noexcept { return key_; }
    std::uint64_t stream_id() const noexcept { return id_; }

  private:
    std::uint64_t key_;
    std::uint64_t id_;
    std::uint64_t block_ = 0;
    std::uint64_t pending_ = 0;
    bool has_pending_ = false;
};

/// Unitary forward DFT: X(k) = (1/sqrt(N)) sum_n x(n) e^{-j2*pi*nk/N}.
/// Radix-2 FFT for power-of-two sizes, direct summation otherwise.
cvec dft(const cvec& x);

/// Unitary inverse DFT: y(n) = (1/sqrt(N)) sum_k x(k) e^{+j2*pi*kn/N}.
/// Exact inverse of dft() for every length.
cvec idft(const cvec& x);

/// n i.i.d. circularly symmetric complex Gaussians CN(0, variance);
/// real and imaginary parts are each N(0, variance/2).
cvec complex_gaussian(RngStream& rng, std::size_t n, double variance);

} // namespace psisac

#endif
