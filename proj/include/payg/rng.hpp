#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "error.hpp"

namespace payg {

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
 *
 * Maps a 128-bit counter and a 64-bit key to 128 random bits. Any block of
 * any stream can be computed directly, so streams never need to be advanced
 * in lock-step.
 */
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter generate(Counter ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint64_t const p0 = std::uint64_t{kMul0} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

/// Independent draw streams used inside one replication.
enum class Lane : std::uint32_t { entrants = 0, mortality = 1, returns = 2 };

//---------------------------------------------------------------------------//
/*!
 * Reproducible source of standard normal variates.
 *
 * The stream is fully determined by (seed, stream_id, lane): block i of the
 * stream is Philox(counter = {i, stream_id, lane}, key = seed), and each block
 * yields two normals through the Box-Muller transform. Stream ids are limited
 * to 48 bits; the remaining counter bits hold the lane.
 */
class NormalSource {
public:
    static constexpr std::uint64_t kMaxStreamId = (std::uint64_t{1} << 48) - 1;

    NormalSource(std::uint64_t seed, std::uint64_t stream_id, Lane lane = Lane::entrants)
        : seed_{seed}, stream_id_{stream_id}, lane_{lane}
    {
        if (stream_id > kMaxStreamId) {
            throw ValidationError("stream id exceeds 48 bits");
        }
    }

    /// Next standard normal in the stream.
    double operator()() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            ++drawn_;
            return spare_;
        }
        auto const bits = Philox4x32::generate(counter(), key());
        ++block_;
        double const u1 = to_unit(bits[0], bits[1]);
        double const u2 = to_unit(bits[2], bits[3]);
        double const radius = std::sqrt(-2.0 * std::log(u1));
        double const angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        ++drawn_;
        return radius * std::cos(angle);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    Lane lane() const noexcept { return lane_; }
    /// Number of normals drawn so far.
    std::uint64_t drawn() const noexcept { return drawn_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    Lane lane_;
    std::uint64_t block_ = 0;
    std::uint64_t drawn_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;

    Philox4x32::Counter counter() const noexcept
    {
        return {static_cast<std::uint32_t>(block_),
                static_cast<std::uint32_t>(block_ >> 32),
                static_cast<std::uint32_t>(stream_id_),
                static_cast<std::uint32_t>(stream_id_ >> 32)
                    | (static_cast<std::uint32_t>(lane_) << 16)};
    }

    Philox4x32::Key key() const noexcept
    {
        return {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    }

    // Uniform on the open interval (0, 1) from 53 random bits.
    static double to_unit(std::uint32_t lo, std::uint32_t hi) noexcept
    {
        std::uint64_t const bits = (std::uint64_t{hi} << 32 | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }
};

inline double draw_standard_normal(NormalSource& src) noexcept
{
    return src();
}

} // namespace payg
