#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dualband/config.hpp"
#include "dualband/errors.hpp"

using namespace dualband;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("defaults validate and echo round-trips through the parser") {
    ExperimentConfig cfg;
    cfg.validate();
    const std::string text = cfg.echo();
    const ExperimentConfig back = parse_config_text(text);
    CHECK(back.echo() == text);
}

TEST_CASE("parser accepts comments, blanks and whitespace") {
    const ExperimentConfig cfg = parse_config_text(
        "# experiment\n"
        "\n"
        "  scenario.num_steps = 42  # short trace\n"
        "band.mmwave.carrier_hz=30e9\n"
        "policy.modes=mmwave,switching\n"
        "sweep.counts=1, 2,3\n");
    CHECK(cfg.scenario.num_steps == 42);
    CHECK(cfg.mmwave.carrier_hz == 30e9);
    REQUIRE(cfg.policy_modes.size() == 2);
    CHECK(cfg.policy_modes[0] == PolicyMode::MMWAVE_ONLY);
    CHECK(cfg.policy_modes[1] == PolicyMode::SWITCHING);
    CHECK(cfg.sweep_counts == std::vector<int>{1, 2, 3});
}

TEST_CASE("unknown keys and malformed lines name the offender") {
    try {
        parse_config_text("scenario.numsteps=10\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("scenario.numsteps") != std::string::npos);
    }
    try {
        parse_config_text("scenario.num_steps\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("dataset.r=five\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("codec.gamma=not_a_number\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("policy.modes=lte\n"), ConfigError);
}

TEST_CASE("validation names the violated key path") {
    ExperimentConfig cfg = parse_config_text("dataset.r=0\n");
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("dataset.r") != std::string::npos);
    }

    cfg = parse_config_text("dataset.train_frac=0.9\n");  // sums to 1.2
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = parse_config_text("train.learning_rate=0\n");
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("train.learning_rate") !=
              std::string::npos);
    }

    cfg = parse_config_text("band.mmwave.bandwidth_hz=-1\n");
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("band.mmwave") != std::string::npos);
    }
}

TEST_CASE("load_config reads files and reports missing ones") {
    const std::string path = temp_path("config_load.cfg");
    {
        std::ofstream os(path, std::ios::trunc);
        os << "scenario.seed=99\ncodec.gamma=0.25\n";
    }
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.scenario.seed == 99);
    CHECK(cfg.codec_gamma == 0.25);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_config(path), IoError);
}

TEST_CASE("atomic_write leaves no temp file and replaces content whole") {
    const std::string path = temp_path("atomic_out.txt");
    atomic_write(path, "first\n");
    atomic_write(path, "second\n");
    std::ifstream is(path);
    std::string content((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "second\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove(path);
}
