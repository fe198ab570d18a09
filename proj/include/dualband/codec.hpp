#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualband/scene.hpp"

namespace dualband {

// Factorized Gaussian prior over the latent vector, one (mean, scale) pair per
// dimension.
struct PriorModel {
    std::vector<double> mean;
    std::vector<double> scale;  // > 0

    std::size_t dims() const { return mean.size(); }
    void validate() const;
};

std::uint64_t prior_digest(const PriorModel& prior);

// Quantized latent plus its entropy-coded payload.
struct LatentCode {
    std::vector<std::int32_t> quantized;
    std::vector<std::uint8_t> bitstream;
    std::uint64_t bit_length = 0;  // 8 * bitstream.size()
    int frame_w = 0, frame_h = 0, frame_c = 0;
    float gamma = 0.0f;  // decoder noise level recorded in the container
};

struct RdReport {
    double distortion_mse = 0.0;
    double rate_bits = 0.0;
    double lambda = 0.0;
    double compression_ratio = 0.0;  // rate_bits / (8 * W * H * C)

    double objective() const { return distortion_mse + lambda * rate_bits; }
    double bandwidth_reduction() const { return 1.0 - compression_ratio; }
};

// P(value) = CDF((value+0.5-mean)/scale) - CDF((value-0.5-mean)/scale),
// evaluated in the tail-stable form and floored at 1e-300.
double discrete_prob(const PriorModel& prior, std::size_t dim, std::int32_t value);

// -sum log2 P(q_i); the rate lower bound for coding q under the prior.
double ideal_entropy_bits(const PriorModel& prior,
                          const std::vector<std::int32_t>& quantized);

// Orthonormal 8x8 block transform, round-half-away-from-zero quantization,
// range coding against the discretized prior.
LatentCode encode(const Frame& frame, const PriorModel& prior);

// Entropy-decode, add seeded N(0, gamma^2) latent noise (gamma=0: none),
// inverse transform, clamp to [0,1].
Frame decode(const LatentCode& code, const PriorModel& prior, double gamma,
             std::uint64_t seed);

RdReport rd_report(const Frame& frame, const PriorModel& prior, double gamma,
                   double lambda, std::uint64_t seed = 0);

// Per-dimension empirical mean/stddev of the transformed latents, scale
// floored at 1e-3. Needs at least two frames of identical dims.
PriorModel fit_prior(const std::vector<Frame>& frames);

// Entropy-code / decode a raw quantized vector (no transform); used for
// latent transport and round-trip checks.
std::vector<std::uint8_t> code_latent(const std::vector<std::int32_t>& quantized,
                                      const PriorModel& prior);
std::vector<std::int32_t> decode_latent(const std::vector<std::uint8_t>& bytes,
                                        std::size_t dims, const PriorModel& prior);

// "DBLC" container: magic, version u16, (W,H,C) u16, gamma f32, prior digest
// u64, payload bit count u32, payload.
std::vector<std::uint8_t> serialize_code(const LatentCode& code,
                                         const PriorModel& prior);
LatentCode deserialize_code(const std::vector<std::uint8_t>& bytes,
                            const PriorModel& prior);

}  // namespace dualband
