#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

#include "dualband/codec.hpp"
#include "dualband/dct.hpp"
#include "dualband/errors.hpp"
#include "dualband/range_coder.hpp"
#include "dualband/rng.hpp"
#include "dualband/scene.hpp"

using namespace dualband;

namespace {

Frame random_frame(int w, int h, int c, std::uint64_t seed) {
    Frame f;
    f.width = w;
    f.height = h;
    f.channels = c;
    f.samples.resize(static_cast<std::size_t>(w) * h * c);
    Rng rng(seed);
    for (double& v : f.samples) v = rng.uniform();
    return f;
}

PriorModel unit_prior(std::size_t dims) {
    PriorModel p;
    p.mean.assign(dims, 0.0);
    p.scale.assign(dims, 1.0);
    return p;
}

PriorModel random_prior(std::size_t dims, Rng& rng) {
    PriorModel p;
    p.mean.resize(dims);
    p.scale.resize(dims);
    for (std::size_t i = 0; i < dims; ++i) {
        p.mean[i] = -10.0 + 20.0 * rng.uniform();
        p.scale[i] = 0.1 + 7.9 * rng.uniform();
    }
    return p;
}

double mse(const Frame& a, const Frame& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = a.samples[i] - b.samples[i];
        s += d * d;
    }
    return s / static_cast<double>(a.samples.size());
}

}  // namespace

TEST_CASE("block transform is orthonormal (inverse of forward is identity)") {
    const std::tuple<int, int, int> shapes[] = {
        {8, 8, 1}, {32, 32, 3}, {12, 10, 2}, {9, 17, 1}};
    for (auto [w, h, c] : shapes) {
        const Frame f = random_frame(w, h, c, 100 + w);
        const auto latent = frame_to_latent(f);
        CHECK(latent.size() == latent_size(w, h, c));
        const Frame back = latent_to_frame(latent, w, h, c);
        REQUIRE(back.samples.size() == f.samples.size());
        for (std::size_t i = 0; i < f.samples.size(); ++i)
            CHECK(std::fabs(back.samples[i] - f.samples[i]) < 1e-9);
    }
}

TEST_CASE("range coder: random models round-trip bit-exactly") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t nsym = 2 + static_cast<std::uint32_t>(rng.uniform_int(0, 60));
        std::vector<std::uint32_t> freq(nsym), cum(nsym + 1, 0);
        std::uint32_t total = 0;
        for (auto& f : freq) {
            f = 1 + static_cast<std::uint32_t>(rng.uniform_int(0, 800));
            total += f;
        }
        REQUIRE(total <= RangeEncoder::kMaxTotal);
        for (std::uint32_t i = 0; i < nsym; ++i) cum[i + 1] = cum[i] + freq[i];

        const int n = 1 + static_cast<int>(rng.uniform_int(0, 400));
        std::vector<std::uint32_t> syms(n);
        RangeEncoder enc;
        for (auto& s : syms) {
            s = static_cast<std::uint32_t>(rng.uniform_int(0, nsym - 1));
            enc.encode(cum[s], freq[s], total);
        }
        const auto bytes = enc.finish();
        RangeDecoder dec(bytes);
        for (int i = 0; i < n; ++i) {
            const std::uint32_t f = dec.decode_freq(total);
            std::uint32_t s = 0;
            while (cum[s + 1] <= f) ++s;
            dec.decode_update(cum[s], freq[s]);
            REQUIRE(s == syms[i]);
        }
    }
}

TEST_CASE("discrete probabilities") {
    const PriorModel p = unit_prior(1);
    SUBCASE("standard normal at zero") {
        CHECK(std::fabs(discrete_prob(p, 0, 0) - 0.38292) < 1e-5);
    }
    SUBCASE("symmetry around a zero mean") {
        for (std::int32_t v : {1, 2, 3, 7, 40})
            CHECK(discrete_prob(p, 0, v) ==
                  doctest::Approx(discrete_prob(p, 0, -v)).epsilon(1e-12));
    }
    SUBCASE("sums to one over the lattice") {
        PriorModel q;
        q.mean = {0.0, 1.7, -3.2};
        q.scale = {1.0, 0.4, 6.0};
        for (std::size_t d = 0; d < q.dims(); ++d) {
            double sum = 0.0;
            for (std::int32_t v = -1000; v <= 1000; ++v) sum += discrete_prob(q, d, v);
            CHECK(std::fabs(sum - 1.0) < 1e-9);
        }
    }
    SUBCASE("strictly positive far in the tail") {
        CHECK(discrete_prob(p, 0, 200) > 0.0);
    }
    SUBCASE("dim bound is checked") {
        CHECK_THROWS_AS(discrete_prob(p, 5, 0), ConfigError);
    }
}

TEST_CASE("lossless latent transport: 1000 random latents round-trip") {
    Rng rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dims = 8 + rng.uniform_int(0, 120);
        const PriorModel prior = random_prior(dims, rng);
        std::vector<std::int32_t> q(dims);
        for (std::size_t i = 0; i < dims; ++i) {
            if (rng.uniform() < 0.01) {
                // exercise the escape path with values far outside the window
                q[i] = static_cast<std::int32_t>(rng.uniform_int(0, 2000000)) - 1000000;
            } else {
                q[i] = static_cast<std::int32_t>(
                    std::lround(prior.mean[i] + prior.scale[i] * rng.normal()));
            }
        }
        const auto bytes = code_latent(q, prior);
        const auto back = decode_latent(bytes, dims, prior);
        REQUIRE(back == q);
    }
}

TEST_CASE("rate stays within 2% + 16 bits of the ideal entropy") {
    Rng rng(31337);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dims = 64 + rng.uniform_int(0, 200);
        const PriorModel prior = random_prior(dims, rng);
        std::vector<std::int32_t> q(dims);
        for (std::size_t i = 0; i < dims; ++i)
            q[i] = static_cast<std::int32_t>(
                std::lround(prior.mean[i] + prior.scale[i] * rng.normal()));
        const auto bytes = code_latent(q, prior);
        const double ideal = ideal_entropy_bits(prior, q);
        CHECK(8.0 * bytes.size() <= std::ceil(ideal) + 16.0 + 0.02 * ideal);
    }
}

TEST_CASE("encode: zero frame and entropy bound on a random 8x8 frame") {
    SUBCASE("constant-zero frame quantizes to the zero latent") {
        Frame f;
        f.width = 8;
        f.height = 8;
        f.channels = 1;
        f.samples.assign(64, 0.0);
        const PriorModel prior = unit_prior(64);
        const LatentCode code = encode(f, prior);
        for (auto v : code.quantized) CHECK(v == 0);
        double ideal = 0.0;
        for (int i = 0; i < 64; ++i) ideal -= std::log2(discrete_prob(prior, i, 0));
        CHECK(code.bit_length <= std::ceil(ideal) + 16.0 + 0.02 * ideal);
    }
    SUBCASE("random frame rate bound") {
        const Frame f = random_frame(8, 8, 1, 9);
        const PriorModel prior = unit_prior(64);
        const LatentCode code = encode(f, prior);
        const double ideal = ideal_entropy_bits(prior, code.quantized);
        CHECK(static_cast<double>(code.bit_length) <= std::ceil(ideal) + 16.0);
    }
}

TEST_CASE("encode/decode round trip at gamma 0") {
    const Frame f = random_frame(32, 32, 3, 4242);
    const PriorModel prior = fit_prior({f, random_frame(32, 32, 3, 4243)});
    const LatentCode code = encode(f, prior);

    SUBCASE("decode equals direct quantize + inverse transform") {
        Frame direct;
        {
            auto latent = frame_to_latent(f);
            std::vector<double> ql(latent.size());
            for (std::size_t i = 0; i < latent.size(); ++i)
                ql[i] = static_cast<double>(std::lround(latent[i]));
            direct = latent_to_frame(ql, 32, 32, 3);
            for (double& v : direct.samples) v = std::clamp(v, 0.0, 1.0);
        }
        const Frame dec = decode(code, prior, 0.0, 0);
        REQUIRE(dec.samples.size() == direct.samples.size());
        for (std::size_t i = 0; i < dec.samples.size(); ++i)
            CHECK(dec.samples[i] == direct.samples[i]);
    }
    SUBCASE("quantization-noise MSE bound") {
        const Frame dec = decode(code, prior, 0.0, 0);
        CHECK(mse(f, dec) <= 1.0 / 12.0);
    }
    SUBCASE("re-encoding the gamma=0 reconstruction is idempotent on the latent") {
        const Frame dec = decode(code, prior, 0.0, 0);
        const LatentCode again = encode(dec, prior);
        CHECK(again.quantized == code.quantized);
    }
    SUBCASE("decode determinism") {
        CHECK(decode(code, prior, 0.0, 1) == decode(code, prior, 0.0, 2));
        CHECK(decode(code, prior, 0.5, 7) == decode(code, prior, 0.5, 7));
        CHECK_FALSE(decode(code, prior, 0.5, 7) == decode(code, prior, 0.5, 8));
    }
}

TEST_CASE("mean MSE increases with gamma (64 seeds)") {
    const Frame f = random_frame(16, 16, 1, 5150);
    const PriorModel prior = fit_prior({f, random_frame(16, 16, 1, 5151)});
    const LatentCode code = encode(f, prior);
    auto mean_mse = [&](double gamma) {
        double acc = 0.0;
        for (std::uint64_t s = 0; s < 64; ++s)
            acc += mse(f, decode(code, prior, gamma, s));
        return acc / 64.0;
    };
    const double m0 = mean_mse(0.0);
    const double m05 = mean_mse(0.5);
    const double m1 = mean_mse(1.0);
    CHECK(m0 < m05);
    CHECK(m05 < m1);
}

TEST_CASE("rd_report semantics") {
    SUBCASE("reference operating point: ratio 0.2969 means 70.31% reduction") {
        RdReport r;
        r.compression_ratio = 0.2969;
        CHECK(std::fabs(r.bandwidth_reduction() - 0.7031) < 1e-12);
    }
    SUBCASE("lambda 0 makes the objective pure distortion") {
        const Frame f = random_frame(16, 16, 1, 88);
        const PriorModel prior = fit_prior({f, random_frame(16, 16, 1, 89)});
        const RdReport r = rd_report(f, prior, 0.0, 0.0);
        CHECK(r.objective() == r.distortion_mse);
        CHECK(r.rate_bits >= 0.0);
        CHECK(r.compression_ratio ==
              doctest::Approx(r.rate_bits / (8.0 * 16 * 16)).epsilon(1e-12));
    }
    SUBCASE("widening the prior increases the rate") {
        const Frame f = random_frame(16, 16, 1, 90);
        PriorModel prior = fit_prior({f, random_frame(16, 16, 1, 91)});
        const RdReport narrow = rd_report(f, prior, 0.0, 0.01);
        for (double& s : prior.scale) s *= 4.0;
        const RdReport wide = rd_report(f, prior, 0.0, 0.01);
        CHECK(wide.rate_bits > narrow.rate_bits);
    }
}

TEST_CASE("fit_prior") {
    SUBCASE("identical frames floor every scale") {
        const Frame f = random_frame(8, 8, 1, 7);
        const PriorModel p = fit_prior({f, f, f});
        CHECK(p.dims() == 64);
        for (double s : p.scale) CHECK(s == 1e-3);
        for (std::size_t i = 0; i < 64; ++i)
            CHECK(p.mean[i] == doctest::Approx(frame_to_latent(f)[i]).epsilon(1e-12));
    }
    SUBCASE("dims match the frame shape") {
        const PriorModel p =
            fit_prior({random_frame(12, 10, 2, 1), random_frame(12, 10, 2, 2)});
        CHECK(p.dims() == latent_size(12, 10, 2));
    }
    SUBCASE("fewer than two frames is an error") {
        CHECK_THROWS_AS(fit_prior({random_frame(8, 8, 1, 1)}), ConfigError);
        CHECK_THROWS_AS(fit_prior({}), ConfigError);
    }
    SUBCASE("fitted prior codes every training frame at a finite rate") {
        ScenarioConfig cfg;
        cfg.num_steps = 30;
        cfg.blocker_crossings = 4;
        cfg.seed = 5;
        const LinkTrace t = generate_trace(cfg);
        const PriorModel prior = fit_prior(t.frames);
        for (const auto& f : t.frames) {
            const LatentCode code = encode(f, prior);
            CHECK(code.bit_length > 0);
            CHECK(code.bit_length < 8ull * 32 * 32 * 3 * 4);
        }
    }
}

TEST_CASE("latent container round trip and corruption detection") {
    const Frame f = random_frame(32, 32, 3, 1234);
    const PriorModel prior = fit_prior({f, random_frame(32, 32, 3, 1235)});
    LatentCode code = encode(f, prior);
    code.gamma = 0.5f;
    const auto bytes = serialize_code(code, prior);

    SUBCASE("round trip") {
        const LatentCode back = deserialize_code(bytes, prior);
        CHECK(back.quantized == code.quantized);
        CHECK(back.bitstream == code.bitstream);
        CHECK(back.frame_w == 32);
        CHECK(back.frame_h == 32);
        CHECK(back.frame_c == 3);
        CHECK(back.gamma == 0.5f);
    }
    SUBCASE("digest mismatch") {
        PriorModel other = prior;
        other.mean[0] += 1.0;
        CHECK_THROWS_AS(deserialize_code(bytes, other), ParseError);
    }
    SUBCASE("bad magic") {
        auto bad = bytes;
        bad[0] = 'X';
        CHECK_THROWS_AS(deserialize_code(bad, prior), ParseError);
    }
    SUBCASE("truncated payload") {
        auto bad = bytes;
        bad.pop_back();
        CHECK_THROWS_AS(deserialize_code(bad, prior), ParseError);
    }
    SUBCASE("trailing bytes") {
        auto bad = bytes;
        bad.push_back(0);
        CHECK_THROWS_AS(deserialize_code(bad, prior), ParseError);
    }
}

TEST_CASE("encode rejects a mismatched prior") {
    const Frame f = random_frame(8, 8, 1, 3);
    CHECK_THROWS_AS(encode(f, unit_prior(63)), ConfigError);
    CHECK_THROWS_AS(code_latent({1, 2, 3}, unit_prior(2)), ConfigError);
    CHECK_THROWS_AS(decode_latent({0, 0, 0, 0}, 3, unit_prior(2)), ConfigError);
}
