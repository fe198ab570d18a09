#include "dualband/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dualband/dct.hpp"
#include "dualband/errors.hpp"
#include "dualband/math.hpp"
#include "dualband/range_coder.hpp"
#include "dualband/rng.hpp"

namespace dualband {

namespace {

constexpr double kScaleFloor = 1e-3;
constexpr std::int32_t kSymbolCap = 255;  // |v| beyond this goes to escape
constexpr std::uint32_t kTotal = RangeEncoder::kMaxTotal;

double cdf_diff(double mean, double scale, double v) {
    const double z0 = (v - 0.5 - mean) / scale;
    const double z1 = (v + 0.5 - mean) / scale;
    double p;
    if (z0 >= 0.0)
        p = 0.5 * (erfc_series(z0 / std::sqrt(2.0)) - erfc_series(z1 / std::sqrt(2.0)));
    else if (z1 <= 0.0)
        p = 0.5 * (erfc_series(-z1 / std::sqrt(2.0)) - erfc_series(-z0 / std::sqrt(2.0)));
    else
        p = normal_cdf(z1) - normal_cdf(z0);
    return std::max(p, 1e-300);
}

// Quantized frequency table for one latent dimension: a window of symbols
// around the prior mean plus a trailing escape slot; frequencies sum to 2^16.
struct SymbolModel {
    std::int32_t lo = 0, hi = 0;
    std::vector<std::uint32_t> cum;  // size nsym+2; escape occupies the last slot

    std::uint32_t freq(std::size_t idx) const { return cum[idx + 1] - cum[idx]; }
    std::size_t escape_index() const { return cum.size() - 2; }
};

SymbolModel build_model(double mean, double scale) {
    SymbolModel m;
    const std::int32_t c = static_cast<std::int32_t>(
        std::clamp<long>(std::lround(mean), -kSymbolCap, kSymbolCap));
    const std::int32_t k = std::max<std::int32_t>(
        4, static_cast<std::int32_t>(std::ceil(10.0 * scale)));
    m.lo = std::max(-kSymbolCap, c - k);
    m.hi = std::min(kSymbolCap, c + k);
    const std::size_t nsym = static_cast<std::size_t>(m.hi - m.lo + 1);
    const std::uint32_t budget = kTotal - static_cast<std::uint32_t>(nsym) - 1;
    m.cum.resize(nsym + 2);
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < nsym; ++i) {
        m.cum[i] = acc;
        const double p = cdf_diff(mean, scale, m.lo + static_cast<std::int32_t>(i));
        acc += 1 + static_cast<std::uint32_t>(p * budget);
    }
    m.cum[nsym] = acc;      // escape starts here
    m.cum[nsym + 1] = kTotal;  // escape frequency = kTotal - acc >= 1
    return m;
}

void encode_raw_u32(RangeEncoder& enc, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) enc.encode((v >> s) & 0xFF, 1, 256);
}

std::uint32_t decode_raw_u32(RangeDecoder& dec) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        const std::uint32_t b = dec.decode_freq(256);
        dec.decode_update(b, 1);
        v = (v << 8) | b;
    }
    return v;
}

void put_u16v(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back(v >> 8);
}
void put_u32v(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}
void put_u64v(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

struct ByteReader {
    const std::vector<std::uint8_t>* b;
    std::size_t pos = 0;
    bool take(void* dst, std::size_t n) {
        if (pos + n > b->size()) return false;
        std::memcpy(dst, b->data() + pos, n);
        pos += n;
        return true;
    }
    bool u16(std::uint16_t& v) {
        std::uint8_t t[2];
        if (!take(t, 2)) return false;
        v = std::uint16_t(t[0] | (t[1] << 8));
        return true;
    }
    bool u32(std::uint32_t& v) {
        std::uint8_t t[4];
        if (!take(t, 4)) return false;
        v = t[0] | (t[1] << 8) | (t[2] << 16) | (std::uint32_t(t[3]) << 24);
        return true;
    }
    bool u64(std::uint64_t& v) {
        std::uint8_t t[8];
        if (!take(t, 8)) return false;
        v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | t[i];
        return true;
    }
};

}  // namespace

void PriorModel::validate() const {
    if (mean.size() != scale.size())
        throw ConfigError("prior: mean/scale length mismatch");
    for (double s : scale)
        if (!(s > 0.0)) throw ConfigError("prior: scales must be > 0");
}

std::uint64_t prior_digest(const PriorModel& prior) {
    std::uint64_t h = fnv1a64(prior.mean.data(), prior.mean.size() * sizeof(double));
    return fnv1a64(prior.scale.data(), prior.scale.size() * sizeof(double), h);
}

double discrete_prob(const PriorModel& prior, std::size_t dim, std::int32_t value) {
    if (dim >= prior.dims()) throw ConfigError("discrete_prob: dim out of range");
    return cdf_diff(prior.mean[dim], prior.scale[dim], value);
}

double ideal_entropy_bits(const PriorModel& prior,
                          const std::vector<std::int32_t>& quantized) {
    double bits = 0.0;
    for (std::size_t i = 0; i < quantized.size(); ++i)
        bits -= std::log2(discrete_prob(prior, i, quantized[i]));
    return bits;
}

std::vector<std::uint8_t> code_latent(const std::vector<std::int32_t>& quantized,
                                      const PriorModel& prior) {
    prior.validate();
    if (quantized.size() != prior.dims())
        throw ConfigError("code_latent: latent/prior dim mismatch");
    RangeEncoder enc;
    for (std::size_t i = 0; i < quantized.size(); ++i) {
        const SymbolModel m = build_model(prior.mean[i], prior.scale[i]);
        const std::int32_t v = quantized[i];
        if (v >= m.lo && v <= m.hi) {
            const std::size_t idx = static_cast<std::size_t>(v - m.lo);
            enc.encode(m.cum[idx], m.freq(idx), kTotal);
        } else {
            const std::size_t esc = m.escape_index();
            enc.encode(m.cum[esc], m.freq(esc), kTotal);
            encode_raw_u32(enc, static_cast<std::uint32_t>(v));
        }
    }
    return enc.finish();
}

std::vector<std::int32_t> decode_latent(const std::vector<std::uint8_t>& bytes,
                                        std::size_t dims, const PriorModel& prior) {
    prior.validate();
    if (dims != prior.dims())
        throw ConfigError("decode_latent: latent/prior dim mismatch");
    RangeDecoder dec(bytes);
    std::vector<std::int32_t> out(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        const SymbolModel m = build_model(prior.mean[i], prior.scale[i]);
        const std::uint32_t f = dec.decode_freq(kTotal);
        // locate the interval containing f
        const auto it = std::upper_bound(m.cum.begin(), m.cum.end(), f);
        const std::size_t idx = static_cast<std::size_t>(it - m.cum.begin()) - 1;
        dec.decode_update(m.cum[idx], m.freq(idx));
        if (idx == m.escape_index())
            out[i] = static_cast<std::int32_t>(decode_raw_u32(dec));
        else
            out[i] = m.lo + static_cast<std::int32_t>(idx);
    }
    return out;
}

LatentCode encode(const Frame& frame, const PriorModel& prior) {
    const std::vector<double> latent = frame_to_latent(frame);
    if (latent.size() != prior.dims())
        throw ConfigError("encode: prior dims " + std::to_string(prior.dims()) +
                          " != latent length " + std::to_string(latent.size()));
    LatentCode code;
    code.frame_w = frame.width;
    code.frame_h = frame.height;
    code.frame_c = frame.channels;
    code.quantized.resize(latent.size());
    for (std::size_t i = 0; i < latent.size(); ++i)
        code.quantized[i] = static_cast<std::int32_t>(std::lround(latent[i]));
    code.bitstream = code_latent(code.quantized, prior);
    code.bit_length = 8 * code.bitstream.size();
    return code;
}

Frame decode(const LatentCode& code, const PriorModel& prior, double gamma,
             std::uint64_t seed) {
    const std::size_t dims = latent_size(code.frame_w, code.frame_h, code.frame_c);
    std::vector<std::int32_t> q = decode_latent(code.bitstream, dims, prior);
    std::vector<double> latent(dims);
    if (gamma > 0.0) {
        Rng rng(seed);
        for (std::size_t i = 0; i < dims; ++i)
            latent[i] = q[i] + gamma * rng.normal();
    } else {
        for (std::size_t i = 0; i < dims; ++i) latent[i] = q[i];
    }
    Frame f = latent_to_frame(latent, code.frame_w, code.frame_h, code.frame_c);
    for (double& v : f.samples) v = std::clamp(v, 0.0, 1.0);
    return f;
}

RdReport rd_report(const Frame& frame, const PriorModel& prior, double gamma,
                   double lambda, std::uint64_t seed) {
    const LatentCode code = encode(frame, prior);
    const Frame rec = decode(code, prior, gamma, seed);
    double se = 0.0;
    for (std::size_t i = 0; i < frame.samples.size(); ++i) {
        const double d = frame.samples[i] - rec.samples[i];
        se += d * d;
    }
    RdReport r;
    r.distortion_mse = se / static_cast<double>(frame.samples.size());
    r.rate_bits = static_cast<double>(code.bit_length);
    r.lambda = lambda;
    r.compression_ratio =
        r.rate_bits / (8.0 * frame.width * frame.height * frame.channels);
    return r;
}

PriorModel fit_prior(const std::vector<Frame>& frames) {
    if (frames.size() < 2)
        throw ConfigError("fit_prior: need at least 2 frames");
    const std::vector<double> first = frame_to_latent(frames[0]);
    const std::size_t dims = first.size();
    std::vector<double> sum(dims, 0.0), sumsq(dims, 0.0);
    for (const auto& f : frames) {
        const std::vector<double> z = frame_to_latent(f);
        if (z.size() != dims)
            throw ConfigError("fit_prior: frames have differing dims");
        for (std::size_t i = 0; i < dims; ++i) {
            sum[i] += z[i];
            sumsq[i] += z[i] * z[i];
        }
    }
    const double n = static_cast<double>(frames.size());
    PriorModel prior;
    prior.mean.resize(dims);
    prior.scale.resize(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        prior.mean[i] = sum[i] / n;
        const double var = std::max(0.0, sumsq[i] / n - prior.mean[i] * prior.mean[i]);
        prior.scale[i] = std::max(kScaleFloor, std::sqrt(var));
    }
    return prior;
}

std::vector<std::uint8_t> serialize_code(const LatentCode& code,
                                         const PriorModel& prior) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), {'D', 'B', 'L', 'C'});
    put_u16v(out, 1);  // version
    put_u16v(out, static_cast<std::uint16_t>(code.frame_w));
    put_u16v(out, static_cast<std::uint16_t>(code.frame_h));
    put_u16v(out, static_cast<std::uint16_t>(code.frame_c));
    std::uint32_t g;
    std::memcpy(&g, &code.gamma, 4);
    put_u32v(out, g);
    put_u64v(out, prior_digest(prior));
    put_u32v(out, static_cast<std::uint32_t>(code.bit_length));
    out.insert(out.end(), code.bitstream.begin(), code.bitstream.end());
    return out;
}

LatentCode deserialize_code(const std::vector<std::uint8_t>& bytes,
                            const PriorModel& prior) {
    ByteReader r{&bytes};
    std::uint8_t magic[4];
    if (!r.take(magic, 4) || std::memcmp(magic, "DBLC", 4) != 0)
        throw ParseError("latent container: missing DBLC magic");
    std::uint16_t version, w, h, c;
    std::uint32_t graw, bitcount;
    std::uint64_t digest;
    if (!r.u16(version) || !r.u16(w) || !r.u16(h) || !r.u16(c) || !r.u32(graw) ||
        !r.u64(digest) || !r.u32(bitcount))
        throw ParseError("latent container: truncated header");
    if (version != 1)
        throw ParseError("latent container: unsupported version");
    if (digest != prior_digest(prior))
        throw ParseError("latent container: prior digest mismatch");
    if (bitcount % 8 != 0 || bytes.size() - r.pos != bitcount / 8)
        throw ParseError("latent container: payload length mismatch");
    LatentCode code;
    code.frame_w = w;
    code.frame_h = h;
    code.frame_c = c;
    std::memcpy(&code.gamma, &graw, 4);
    code.bit_length = bitcount;
    code.bitstream.assign(bytes.begin() + static_cast<long>(r.pos), bytes.end());
    code.quantized = decode_latent(code.bitstream, latent_size(w, h, c), prior);
    return code;
}

}  // namespace dualband
