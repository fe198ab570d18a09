#pragma once

#include <cstdint>
#include <vector>

namespace dualband {

// 32-bit range coder with carry propagation into the buffered output.
// Frequencies are integers; the cumulative total must be <= 1<<16 so that
// range/total never collapses. Termination aligns the final code value to a
// multiple of 2^24 and strips trailing zero bytes (the decoder reads missing
// bytes as zero), keeping the tail overhead to a byte or two.
class RangeEncoder {
public:
    void encode(std::uint32_t cum_freq, std::uint32_t freq, std::uint32_t total);
    std::vector<std::uint8_t> finish();

    static constexpr std::uint32_t kMaxTotal = 1u << 16;

private:
    void shift_low();
    void propagate_carry();

    std::vector<std::uint8_t> buf_;
    std::uint64_t low_ = 0;  // 33-bit window (bit 32 is the pending carry)
    std::uint32_t range_ = 0xFFFFFFFFu;
};

class RangeDecoder {
public:
    explicit RangeDecoder(const std::vector<std::uint8_t>& bytes);

    // Returns a value in [0, total); the caller maps it to a symbol's
    // cumulative interval and confirms with decode_update.
    std::uint32_t decode_freq(std::uint32_t total);
    void decode_update(std::uint32_t cum_freq, std::uint32_t freq);

private:
    std::uint8_t next_byte();

    const std::vector<std::uint8_t>* bytes_;
    std::size_t pos_ = 0;
    std::uint32_t code_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::uint32_t r_ = 0;  // range/total from the last decode_freq
};

}  // namespace dualband
