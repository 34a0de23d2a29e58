#ifndef SFWM_PHILOX_HPP
#define SFWM_PHILOX_HPP

#include <array>
#include <cstdint>

namespace sfwm
{

// Philox4x32-10 counter-based generator. Integer-only, so streams are
// bit-identical across platforms, and any (seed, stream, index) draw can be
// produced without sequential state. This is what makes pulse batches
// partition-independent: channel c of pulse p always reads substream
// (stream = c, index = p), regardless of execution order.
class Philox4x32
{
public:
    using Block = std::array<uint32_t, 4>;

    // counter = (lo64, hi64) laid out as four 32-bit words, key = seed split in two.
    static Block generate(uint64_t seed, uint64_t counter_hi, uint64_t counter_lo)
    {
        uint32_t x0 = static_cast<uint32_t>(counter_lo);
        uint32_t x1 = static_cast<uint32_t>(counter_lo >> 32);
        uint32_t x2 = static_cast<uint32_t>(counter_hi);
        uint32_t x3 = static_cast<uint32_t>(counter_hi >> 32);
        uint32_t k0 = static_cast<uint32_t>(seed);
        uint32_t k1 = static_cast<uint32_t>(seed >> 32);
        for (int round = 0; round < 10; ++round)
        {
            const uint64_t p0 = static_cast<uint64_t>(kMul0) * x0;
            const uint64_t p1 = static_cast<uint64_t>(kMul1) * x2;
            const uint32_t y0 = static_cast<uint32_t>(p1 >> 32) ^ x1 ^ k0;
            const uint32_t y1 = static_cast<uint32_t>(p1);
            const uint32_t y2 = static_cast<uint32_t>(p0 >> 32) ^ x3 ^ k1;
            const uint32_t y3 = static_cast<uint32_t>(p0);
            x0 = y0;
            x1 = y1;
            x2 = y2;
            x3 = y3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {x0, x1, x2, x3};
    }

private:
    static constexpr uint32_t kMul0 = 0xD2511F53u;
    static constexpr uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;
};

// Substream view for one (seed, stream, index) triple: an unbounded sequence of
// uniforms obtained by advancing the block counter within the substream.
// Each Philox block yields two doubles.
class SubstreamRng
{
public:
    SubstreamRng(uint64_t seed, uint32_t stream, uint64_t index)
        : seed_(seed), hi_(static_cast<uint64_t>(stream) << 32), lo_(index), word_(4)
    {
    }

    // Uniform in (0, 1]; 53-bit resolution, never exactly zero so logarithms are safe.
    double uniform()
    {
        const uint64_t bits = (static_cast<uint64_t>(next_word()) << 32) | next_word();
        return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() <= p; }

private:
    uint32_t next_word()
    {
        if (word_ >= 4)
        {
            block_ = Philox4x32::generate(seed_, hi_ | block_index_, lo_);
            ++block_index_;
            word_ = 0;
        }
        return block_[word_++];
    }

    uint64_t seed_;
    uint64_t hi_;
    uint64_t lo_;
    Philox4x32::Block block_{};
    uint32_t block_index_ = 0;
    int word_;
};

} // namespace sfwm

#endif // SFWM_PHILOX_HPP
