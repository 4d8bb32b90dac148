#include "hetnet/rng.hpp"

namespace hetnet
{

namespace
{
constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

// Hashed draws live in the upper half of the stream word so they never
// collide with sequential counters.
constexpr std::uint32_t kHashedBit = 0x80000000u;

inline double to_unit(std::uint32_t hi, std::uint32_t lo)
{
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    // 53 bits, shifted by half an ulp to stay off 0 and 1.
    return (static_cast<double>(bits & ((1ULL << 53) - 1)) + 0.5) * 0x1.0p-53;
}
}  // namespace

std::array<std::uint32_t, 4>
philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round)
    {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

Philox::Philox(std::uint64_t seed, std::uint32_t drop, std::uint32_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
    , counter_{0, 0, stream & ~kHashedBit, drop}
{
}

Philox::result_type Philox::operator()()
{
    if (used_ == 4)
    {
        buffer_ = philox4x32(counter_, key_);
        if (++counter_[0] == 0)
        {
            ++counter_[1];
        }
        used_ = 0;
    }
    return buffer_[used_++];
}

double Philox::uniform()
{
    const std::uint32_t hi = (*this)();
    const std::uint32_t lo = (*this)();
    return to_unit(hi, lo);
}

std::array<double, 2> hashed_uniform2(std::uint64_t seed, std::uint32_t drop, Stream stream,
                                      std::uint32_t a, std::uint32_t b)
{
    const auto out = philox4x32(
        {a, b, static_cast<std::uint32_t>(stream) | kHashedBit, drop},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    return {to_unit(out[0], out[1]), to_unit(out[2], out[3])};
}

double hashed_uniform(std::uint64_t seed, std::uint32_t drop, Stream stream, std::uint32_t a,
                      std::uint32_t b)
{
    return hashed_uniform2(seed, drop, stream, a, b)[0];
}

}  // namespace hetnet
