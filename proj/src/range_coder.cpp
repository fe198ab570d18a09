#include "dualband/range_coder.hpp"

#include "dualband/errors.hpp"

namespace dualband {

namespace {
constexpr std::uint32_t kTopValue = 1u << 24;
constexpr std::uint64_t kCarryBit = 1ull << 32;
}  // namespace

void RangeEncoder::propagate_carry() {
    for (auto it = buf_.rbegin(); it != buf_.rend(); ++it) {
        if (++(*it) != 0) return;
    }
    // A carry out of the first byte cannot happen: low_ < 2^32 when the
    // buffer is empty, so the first shifted byte absorbs any later carry.
}

void RangeEncoder::shift_low() {
    if (low_ & kCarryBit) propagate_carry();
    buf_.push_back(static_cast<std::uint8_t>(low_ >> 24));
    low_ = (low_ << 8) & 0xFFFFFFFFull;
}

void RangeEncoder::encode(std::uint32_t cum_freq, std::uint32_t freq,
                          std::uint32_t total) {
    if (total == 0 || total > kMaxTotal || freq == 0 || cum_freq + freq > total)
        throw ConfigError("range encoder: bad frequency interval");
    const std::uint32_t r = range_ / total;
    low_ += static_cast<std::uint64_t>(cum_freq) * r;
    range_ = freq * r;
    while (range_ < kTopValue) {
        shift_low();
        range_ <<= 8;
    }
}

std::vector<std::uint8_t> RangeEncoder::finish() {
    // Any value in [low, low+range) decodes correctly; range >= 2^24 holds
    // here, so a multiple of 2^24 is always available in the interval. If the
    // rounding crosses a 2^32 boundary relative to low (an extra carry the
    // buffered prefix may not be able to absorb), fall back to low itself.
    std::uint64_t v = (low_ + kTopValue - 1) >> 24 << 24;
    if ((v >> 32) != (low_ >> 32)) v = low_;
    if (v & kCarryBit) {
        propagate_carry();
        v &= 0xFFFFFFFFull;
    }
    for (int i = 0; i < 4; ++i) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 24));
        v = (v << 8) & 0xFFFFFFFFull;
    }
    while (!buf_.empty() && buf_.back() == 0) buf_.pop_back();
    return std::move(buf_);
}

RangeDecoder::RangeDecoder(const std::vector<std::uint8_t>& bytes)
    : bytes_(&bytes) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
    return pos_ < bytes_->size() ? (*bytes_)[pos_++] : 0;
}

std::uint32_t RangeDecoder::decode_freq(std::uint32_t total) {
    r_ = range_ / total;
    const std::uint32_t v = code_ / r_;
    return v < total ? v : total - 1;
}

void RangeDecoder::decode_update(std::uint32_t cum_freq, std::uint32_t freq) {
    code_ -= cum_freq * r_;
    range_ = freq * r_;
    while (range_ < kTopValue) {
        code_ = (code_ << 8) | next_byte();
        range_ <<= 8;
    }
}

}  // namespace dualband
