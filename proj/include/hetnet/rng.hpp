#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hetnet
{

//! One Philox-4x32-10 block (Salmon et al., SC'11).
std::array<std::uint32_t, 4>
philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

//! Named streams so that every random quantity of a drop has its own sequence.
enum class Stream : std::uint32_t
{
    Mcells = 1,
    Scells = 2,
    Ues = 3,
    Fading = 4,
    Los = 5,
    Priority = 6,
    Interferer = 7,
    Gain = 8,
};

/*!
 * Counter-based generator keyed by (seed, drop, stream).
 *
 * Satisfies UniformRandomBitGenerator, so it plugs into <random>
 * distributions. Streams for different drops never overlap, which keeps
 * results independent of how drops are scheduled across threads.
 */
class Philox
{
  public:
    using result_type = std::uint32_t;

    Philox(std::uint64_t seed, std::uint32_t drop, std::uint32_t stream);
    Philox(std::uint64_t seed, std::uint32_t drop, Stream stream)
        : Philox(seed, drop, static_cast<std::uint32_t>(stream))
    {
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    //! Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
};

/*!
 * Stateless uniform on (0, 1) for an indexed pair (a, b).
 *
 * Used for marks that must not depend on evaluation order, e.g. the LOS
 * state of a given UE-Scell link.
 */
double hashed_uniform(std::uint64_t seed, std::uint32_t drop, Stream stream, std::uint32_t a,
                      std::uint32_t b);

//! Two independent hashed uniforms for the same index pair.
std::array<double, 2> hashed_uniform2(std::uint64_t seed, std::uint32_t drop, Stream stream,
                                      std::uint32_t a, std::uint32_t b);

}  // namespace hetnet
