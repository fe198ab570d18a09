#pragma once

#include <cstddef>
#include <vector>

#include "dualband/scene.hpp"

namespace dualband {

inline constexpr int kBlock = 8;

// Padded dimension: next multiple of 8 (reflection padding at the bottom/right).
inline int padded_dim(int d) { return (d + kBlock - 1) / kBlock * kBlock; }

inline std::size_t latent_size(int w, int h, int c) {
    return static_cast<std::size_t>(padded_dim(w)) * padded_dim(h) * c;
}

// Orthonormal 8x8 DCT-II of every block of every channel. Latent layout:
// channel-major, then blocks row-major, then the 64 coefficients row-major.
std::vector<double> frame_to_latent(const Frame& frame);

// Exact inverse of frame_to_latent (up to fp rounding); crops padding, does not
// clamp.
Frame latent_to_frame(const std::vector<double>& latent, int w, int h, int c);

}  // namespace dualband
