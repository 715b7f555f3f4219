#pragma once

#include <array>
#include <cstdint>

namespace tsaudit {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11), version 1 of
/// the stream layout below. Keep the layout stable: tests pin values drawn
/// through it.
///
/// Stream layout: key = 64-bit seed; counter = (block_lo, block_hi,
/// stream_lo, stream_hi). Each 128-bit block yields two 53-bit uniforms, so a
/// stream holds 2^65 draws and distinct stream ids never overlap.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr int kLayoutVersion = 1;

    /// The raw bijection; exposed for known-answer tests.
    static Block encrypt(Block counter, Key key) noexcept;

    Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept;

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal by inverse CDF, one uniform per draw.
    double normal();

private:
    std::uint64_t next_u64() noexcept;

    Key key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int used_ = 4;  ///< 32-bit words of buffer_ consumed
};

}  // namespace tsaudit
