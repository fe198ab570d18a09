#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dualband {

// Row-major intensity image, samples in [0,1]. Generated frames are quantized
// to the 8-bit grid (k/255) so that trace export/import is an exact identity.
struct Frame {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> samples;  // width*height*channels

    double at(int x, int y, int c) const {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double& at(int x, int y, int c) {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool operator==(const Frame&) const = default;
};

inline constexpr int kNumBeams = 64;

// Received mmWave power per beam, dBm.
struct PowerVector {
    std::array<double, kNumBeams> gains_dbm{};
    bool operator==(const PowerVector&) const = default;
};

struct ScenarioConfig {
    int num_steps = 100;
    double distance_m = 10.6;
    int blocker_crossings = 30;
    int blocker_speed = 2;  // pixels/step
    int frame_w = 32;
    int frame_h = 32;
    int frame_c = 3;
    std::uint64_t seed = 1;
    double blocked_power_drop_db = 20.0;

    void validate() const;
};

// Per-step ground truth for one scenario run.
struct LinkTrace {
    std::vector<Frame> frames;
    std::vector<PowerVector> powers;
    std::vector<int> blocked;  // a[t] in {0,1}
    bool operator==(const LinkTrace&) const = default;

    std::size_t size() const { return blocked.size(); }
};

// Column whose obstruction defines a[t]=1; the link line-of-sight in the scene.
inline int los_column(int frame_w) { return frame_w / 2; }

// Unblocked per-beam power profile (dBm), before jitter.
double beam_profile_dbm(int beam);

// Beams attenuated while blocked: [24, 40].
inline constexpr int kCentralBeamLo = 24;
inline constexpr int kCentralBeamHi = 40;

LinkTrace generate_trace(const ScenarioConfig& cfg);

void export_trace(const LinkTrace& trace, const std::string& path);
LinkTrace import_trace(const std::string& path);

}  // namespace dualband
