#include "dualband/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

#include "dualband/errors.hpp"
#include "dualband/rng.hpp"

namespace dualband {

namespace {

constexpr double kBlobShade = 0.15;    // blob multiplies covered pixels by this
constexpr double kJitterSigmaDb = 0.5; // per-beam per-step power jitter

double background(int x, int y, int c, int w, int h) {
    // Brightness dips toward the LOS column, so a blob is darkest exactly
    // when it sits on the link line; its darkness therefore encodes its
    // distance to the LOS column, which is what makes frames informative
    // about upcoming crossings.
    const int los = los_column(w);
    const int span = std::max(los, w - 1 - los);
    return 0.30 + 0.50 * std::abs(x - los) / span + 0.08 * y / (h - 1) + 0.03 * c;
}

double quantize8(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return std::round(v * 255.0) / 255.0;
}

struct Crossing {
    double t_mid;   // step at which the blob center sits on the LOS column
    int run_start;  // first blocked step
    int run_len;
    int width_px;
};

// Little-endian primitives for the trace container.
void put_u16(std::ofstream& os, std::uint16_t v) {
    char b[2] = {char(v & 0xFF), char(v >> 8)};
    os.write(b, 2);
}
void put_u32(std::ofstream& os, std::uint32_t v) {
    char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF),
                 char(v >> 24)};
    os.write(b, 4);
}
void put_f32(std::ofstream& os, float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    put_u32(os, u);
}

bool get_bytes(std::ifstream& is, char* dst, std::size_t n) {
    is.read(dst, static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(is.gcount()) == n;
}
bool get_u16(std::ifstream& is, std::uint16_t& v) {
    unsigned char b[2];
    if (!get_bytes(is, reinterpret_cast<char*>(b), 2)) return false;
    v = std::uint16_t(b[0] | (b[1] << 8));
    return true;
}
bool get_u32(std::ifstream& is, std::uint32_t& v) {
    unsigned char b[4];
    if (!get_bytes(is, reinterpret_cast<char*>(b), 4)) return false;
    v = std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
        (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
    return true;
}
bool get_f32(std::ifstream& is, float& v) {
    std::uint32_t u;
    if (!get_u32(is, u)) return false;
    std::memcpy(&v, &u, 4);
    return true;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (num_steps < 1) throw ConfigError("scenario.num_steps must be >= 1");
    if (blocker_crossings < 0)
        throw ConfigError("scenario.blocker_crossings must be >= 0");
    if (blocker_speed < 1) throw ConfigError("scenario.blocker_speed must be >= 1");
    if (frame_w < 8 || frame_h < 8 || frame_c < 1)
        throw ConfigError("scenario.frame dims must be at least 8x8x1");
    if (!(distance_m > 0.0)) throw ConfigError("scenario.distance_m must be > 0");
    if (blocked_power_drop_db < 0.0)
        throw ConfigError("scenario.blocked_power_drop_db must be >= 0");
    if (blocker_crossings > 0 && 2 * blocker_crossings - 1 > num_steps)
        throw ConfigError("scenario.blocker_crossings does not fit in num_steps");
}

double beam_profile_dbm(int beam) {
    const double d = beam - 32.0;
    return -60.0 + 15.0 * std::exp(-d * d / 128.0);
}

LinkTrace generate_trace(const ScenarioConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const int n = cfg.num_steps;
    const int k = cfg.blocker_crossings;

    // Blockage runs: lengths uniform in [1,3], separated by at least one clear
    // step, leftover slack spread across the k+1 gaps.
    std::vector<int> lens(k);
    int total = 0;
    for (int i = 0; i < k; ++i) {
        lens[i] = static_cast<int>(rng.uniform_int(1, 3));
        total += lens[i];
    }
    const int budget = n - std::max(0, k - 1);
    for (int i = 0; total > budget; i = (i + 1) % std::max(1, k)) {
        if (lens[i] > 1) {
            --lens[i];
            --total;
        }
    }
    const int extra = budget - total;
    std::vector<int> gaps(k + 1, 0);
    if (k == 0) {
        gaps[0] = n;
    } else {
        std::vector<double> w(k + 1);
        double wsum = 0.0;
        for (auto& wi : w) {
            wi = rng.uniform() + 0.05;
            wsum += wi;
        }
        int assigned = 0;
        for (int i = 0; i <= k; ++i) {
            gaps[i] = static_cast<int>(std::floor(extra * w[i] / wsum));
            assigned += gaps[i];
        }
        for (int i = 0; assigned < extra; i = (i + 1) % (k + 1)) {
            ++gaps[i];
            ++assigned;
        }
    }

    std::vector<int> blocked(n, 0);
    std::vector<Crossing> crossings;
    crossings.reserve(k);
    int pos = gaps[0];
    for (int i = 0; i < k; ++i) {
        Crossing c;
        c.run_start = pos;
        c.run_len = lens[i];
        c.t_mid = pos + (lens[i] - 1) / 2.0;
        c.width_px = cfg.blocker_speed * lens[i] + 4;
        crossings.push_back(c);
        for (int t = pos; t < pos + lens[i]; ++t) blocked[t] = 1;
        pos += lens[i];
        if (i + 1 < k) pos += 1 + gaps[i + 1];
    }

    const int w = cfg.frame_w, h = cfg.frame_h, ch = cfg.frame_c;
    const int los = los_column(w);
    const int row_lo = std::max(1, h / 8);
    const int row_hi = h - row_lo;

    LinkTrace trace;
    trace.blocked = blocked;
    trace.frames.reserve(n);
    trace.powers.reserve(n);
    for (int t = 0; t < n; ++t) {
        Frame f;
        f.width = w;
        f.height = h;
        f.channels = ch;
        f.samples.resize(static_cast<std::size_t>(w) * h * ch);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int c = 0; c < ch; ++c)
                    f.at(x, y, c) = background(x, y, c, w, h);
        for (const auto& cr : crossings) {
            const double xc = los + (t - cr.t_mid) * cfg.blocker_speed;
            const int x0 = static_cast<int>(std::ceil(xc - cr.width_px / 2.0));
            const int x1 = static_cast<int>(std::floor(xc + cr.width_px / 2.0));
            if (x1 < 0 || x0 >= w) continue;
            for (int x = std::max(0, x0); x <= std::min(w - 1, x1); ++x)
                for (int y = row_lo; y < row_hi; ++y)
                    for (int c = 0; c < ch; ++c)
                        f.at(x, y, c) *= kBlobShade;
        }
        for (auto& v : f.samples) v = quantize8(v);
        trace.frames.push_back(std::move(f));

        PowerVector p;
        for (int b = 0; b < kNumBeams; ++b) {
            double g = beam_profile_dbm(b) + kJitterSigmaDb * rng.normal();
            if (blocked[t] && b >= kCentralBeamLo && b <= kCentralBeamHi)
                g -= cfg.blocked_power_drop_db;
            // snap through f32 so export/import is an exact identity
            p.gains_dbm[b] = static_cast<double>(static_cast<float>(g));
        }
        trace.powers.push_back(p);
    }
    return trace;
}

void export_trace(const LinkTrace& trace, const std::string& path) {
    if (trace.frames.size() != trace.size() || trace.powers.size() != trace.size())
        throw ConfigError("trace: frames/powers/blocked lengths differ");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for write: " + path);
    os.write("DBTR", 4);
    put_u16(os, 1);  // version
    put_u32(os, static_cast<std::uint32_t>(trace.size()));
    const int w = trace.frames.empty() ? 0 : trace.frames[0].width;
    const int h = trace.frames.empty() ? 0 : trace.frames[0].height;
    const int c = trace.frames.empty() ? 0 : trace.frames[0].channels;
    put_u16(os, static_cast<std::uint16_t>(w));
    put_u16(os, static_cast<std::uint16_t>(h));
    put_u16(os, static_cast<std::uint16_t>(c));
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const char a = static_cast<char>(trace.blocked[t] ? 1 : 0);
        os.write(&a, 1);
        for (double g : trace.powers[t].gains_dbm)
            put_f32(os, static_cast<float>(g));
        const Frame& f = trace.frames[t];
        if (f.width != w || f.height != h || f.channels != c)
            throw ConfigError("trace: frame dims vary across steps");
        for (double v : f.samples) {
            const char b =
                static_cast<char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
            os.write(&b, 1);
        }
    }
    if (!os) throw IoError("write failed: " + path);
}

LinkTrace import_trace(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for read: " + path);
    char magic[4];
    if (!get_bytes(is, magic, 4) || std::memcmp(magic, "DBTR", 4) != 0)
        throw ParseError(path + ": missing DBTR magic (empty or foreign file)");
    std::uint16_t version, w, h, c;
    std::uint32_t n;
    if (!get_u16(is, version) || !get_u32(is, n) || !get_u16(is, w) ||
        !get_u16(is, h) || !get_u16(is, c))
        throw ParseError(path + ": truncated header");
    if (version != 1)
        throw ParseError(path + ": unsupported version " + std::to_string(version));
    LinkTrace trace;
    for (std::uint32_t t = 0; t < n; ++t) {
        const std::string where = path + ": step " + std::to_string(t);
        char a;
        if (!get_bytes(is, &a, 1)) throw ParseError(where + ": truncated flag");
        if (a != 0 && a != 1)
            throw ParseError(where + ": blocked flag out of {0,1}");
        trace.blocked.push_back(a);
        PowerVector p;
        for (int b = 0; b < kNumBeams; ++b) {
            float g;
            if (!get_f32(is, g))
                throw ParseError(where + ": truncated power vector (expected 64 beams)");
            if (!std::isfinite(g))
                throw ParseError(where + ": non-finite beam power");
            p.gains_dbm[b] = static_cast<double>(g);
        }
        trace.powers.push_back(p);
        Frame f;
        f.width = w;
        f.height = h;
        f.channels = c;
        const std::size_t len = static_cast<std::size_t>(w) * h * c;
        std::vector<char> raw(len);
        if (!get_bytes(is, raw.data(), len))
            throw ParseError(where + ": truncated frame samples");
        f.samples.resize(len);
        for (std::size_t i = 0; i < len; ++i)
            f.samples[i] = static_cast<unsigned char>(raw[i]) / 255.0;
        trace.frames.push_back(std::move(f));
    }
    char spare;
    if (is.read(&spare, 1), is.gcount() != 0)
        throw ParseError(path + ": trailing bytes after last step");
    return trace;
}

}  // namespace dualband
