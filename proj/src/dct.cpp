#include "dualband/dct.hpp"

#include <array>
#include <cmath>

#include "dualband/errors.hpp"
#include "dualband/math.hpp"

namespace dualband {

namespace {

using Basis = std::array<std::array<double, kBlock>, kBlock>;

const Basis& dct_basis() {
    static const Basis basis = [] {
        Basis b{};
        for (int k = 0; k < kBlock; ++k) {
            const double a = k == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
            for (int n = 0; n < kBlock; ++n)
                b[k][n] = a * std::cos(kPi * (2 * n + 1) * k / (2.0 * kBlock));
        }
        return b;
    }();
    return basis;
}

// Reflect index i into [0, d): d, d+1, ... map back to d-1, d-2, ...
int reflect(int i, int d) { return i < d ? i : 2 * d - 1 - i; }

}  // namespace

std::vector<double> frame_to_latent(const Frame& frame) {
    if (frame.width < 1 || frame.height < 1 || frame.channels < 1 ||
        frame.samples.size() != static_cast<std::size_t>(frame.width) *
                                    frame.height * frame.channels)
        throw ConfigError("frame_to_latent: inconsistent frame dims");
    const auto& T = dct_basis();
    const int pw = padded_dim(frame.width), ph = padded_dim(frame.height);
    std::vector<double> latent(latent_size(frame.width, frame.height, frame.channels));
    std::size_t out = 0;
    for (int c = 0; c < frame.channels; ++c) {
        for (int by = 0; by < ph; by += kBlock) {
            for (int bx = 0; bx < pw; bx += kBlock) {
                double blk[kBlock][kBlock];
                for (int y = 0; y < kBlock; ++y)
                    for (int x = 0; x < kBlock; ++x)
                        blk[y][x] = frame.at(reflect(bx + x, frame.width),
                                             reflect(by + y, frame.height), c);
                double tmp[kBlock][kBlock];
                // rows: tmp = blk * T^T
                for (int y = 0; y < kBlock; ++y)
                    for (int k = 0; k < kBlock; ++k) {
                        double s = 0;
                        for (int x = 0; x < kBlock; ++x) s += blk[y][x] * T[k][x];
                        tmp[y][k] = s;
                    }
                // cols: out = T * tmp
                for (int k = 0; k < kBlock; ++k)
                    for (int x = 0; x < kBlock; ++x) {
                        double s = 0;
                        for (int y = 0; y < kBlock; ++y) s += T[k][y] * tmp[y][x];
                        latent[out++] = s;
                    }
            }
        }
    }
    return latent;
}

Frame latent_to_frame(const std::vector<double>& latent, int w, int h, int c) {
    if (latent.size() != latent_size(w, h, c))
        throw ConfigError("latent_to_frame: latent length does not match dims");
    const auto& T = dct_basis();
    const int pw = padded_dim(w), ph = padded_dim(h);
    Frame frame;
    frame.width = w;
    frame.height = h;
    frame.channels = c;
    frame.samples.resize(static_cast<std::size_t>(w) * h * c);
    std::size_t in = 0;
    for (int ch = 0; ch < c; ++ch) {
        for (int by = 0; by < ph; by += kBlock) {
            for (int bx = 0; bx < pw; bx += kBlock) {
                double coef[kBlock][kBlock];
                for (int v = 0; v < kBlock; ++v)
                    for (int u = 0; u < kBlock; ++u) coef[v][u] = latent[in++];
                double tmp[kBlock][kBlock];
                // cols: tmp = T^T * coef
                for (int y = 0; y < kBlock; ++y)
                    for (int u = 0; u < kBlock; ++u) {
                        double s = 0;
                        for (int v = 0; v < kBlock; ++v) s += T[v][y] * coef[v][u];
                        tmp[y][u] = s;
                    }
                // rows: blk = tmp * T
                for (int y = 0; y < kBlock; ++y)
                    for (int x = 0; x < kBlock; ++x) {
                        double s = 0;
                        for (int u = 0; u < kBlock; ++u) s += tmp[y][u] * T[u][x];
                        const int px = bx + x, py = by + y;
                        if (px < w && py < h) frame.at(px, py, ch) = s;
                    }
            }
        }
    }
    return frame;
}

}  // namespace dualband
