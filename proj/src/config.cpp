#include "dualband/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dualband/errors.hpp"

namespace dualband {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
        throw ConfigError(key + ": not a number: '" + v + "'");
    return d;
}

long long parse_int(const std::string& key, const std::string& v) {
    const double d = parse_double(key, v);
    if (std::floor(d) != d) throw ConfigError(key + ": expected an integer");
    return static_cast<long long>(d);
}

PolicyMode parse_mode(const std::string& key, const std::string& v) {
    if (v == "mmwave") return PolicyMode::MMWAVE_ONLY;
    if (v == "sub6") return PolicyMode::SUB6_ONLY;
    if (v == "switching") return PolicyMode::SWITCHING;
    throw ConfigError(key + ": unknown policy '" + v +
                      "' (expected mmwave, sub6 or switching)");
}

void apply_band(BandConfig& band, const std::string& key,
                const std::string& field, const std::string& v) {
    if (field == "carrier_hz")
        band.carrier_hz = parse_double(key, v);
    else if (field == "bandwidth_hz")
        band.bandwidth_hz = parse_double(key, v);
    else if (field == "tx_power_dbm")
        band.tx_power_dbm = parse_double(key, v);
    else if (field == "noise_power_dbm")
        band.noise_power_dbm = parse_double(key, v);
    else if (field == "nlos_extra_loss_db")
        band.nlos_extra_loss_db = parse_double(key, v);
    else if (field == "antenna_gain_db")
        band.antenna_gain_db = parse_double(key, v);
    else
        throw ConfigError(key + ": unknown band field");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "scenario.num_steps")
            cfg.scenario.num_steps = static_cast<int>(parse_int(key, val));
        else if (key == "scenario.distance_m")
            cfg.scenario.distance_m = parse_double(key, val);
        else if (key == "scenario.blocker_crossings")
            cfg.scenario.blocker_crossings = static_cast<int>(parse_int(key, val));
        else if (key == "scenario.blocker_speed")
            cfg.scenario.blocker_speed = static_cast<int>(parse_int(key, val));
        else if (key == "scenario.frame_w")
            cfg.scenario.frame_w = static_cast<int>(parse_int(key, val));
        else if (key == "scenario.frame_h")
            cfg.scenario.frame_h = static_cast<int>(parse_int(key, val));
        else if (key == "scenario.frame_c")
            cfg.scenario.frame_c = static_cast<int>(parse_int(key, val));
        else if (key == "scenario.seed")
            cfg.scenario.seed = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "scenario.blocked_power_drop_db")
            cfg.scenario.blocked_power_drop_db = parse_double(key, val);
        else if (key.rfind("band.mmwave.", 0) == 0)
            apply_band(cfg.mmwave, key, key.substr(12), val);
        else if (key.rfind("band.sub6.", 0) == 0)
            apply_band(cfg.sub6, key, key.substr(10), val);
        else if (key == "dataset.r")
            cfg.dataset_r = static_cast<int>(parse_int(key, val));
        else if (key == "dataset.r_prime")
            cfg.dataset_r_prime = static_cast<int>(parse_int(key, val));
        else if (key == "dataset.train_frac")
            cfg.fractions.train = parse_double(key, val);
        else if (key == "dataset.val_frac")
            cfg.fractions.val = parse_double(key, val);
        else if (key == "dataset.test_frac")
            cfg.fractions.test = parse_double(key, val);
        else if (key == "dataset.seed")
            cfg.dataset_seed = static_cast<std::uint64_t>(parse_int(key, val));
        else if (key == "codec.lambda")
            cfg.codec_lambda = parse_double(key, val);
        else if (key == "codec.gamma")
            cfg.codec_gamma = parse_double(key, val);
        else if (key == "policy.modes") {
            cfg.policy_modes.clear();
            for (const auto& m : split_commas(val))
                cfg.policy_modes.push_back(parse_mode(key, m));
        } else if (key == "policy.horizon")
            cfg.policy_horizon = static_cast<int>(parse_int(key, val));
        else if (key == "sim.step_duration_s")
            cfg.step_duration_s = parse_double(key, val);
        else if (key == "train.epochs")
            cfg.train_epochs = static_cast<int>(parse_int(key, val));
        else if (key == "train.learning_rate")
            cfg.train_learning_rate = parse_double(key, val);
        else if (key == "train.pooled_traces")
            cfg.train_pooled_traces = static_cast<int>(parse_int(key, val));
        else if (key == "train.blocker_crossings")
            cfg.train_crossings = static_cast<int>(parse_int(key, val));
        else if (key == "sweep.counts") {
            cfg.sweep_counts.clear();
            for (const auto& c : split_commas(val))
                cfg.sweep_counts.push_back(static_cast<int>(parse_int(key, c)));
        } else if (key == "sweep.num_seeds")
            cfg.sweep_num_seeds = static_cast<int>(parse_int(key, val));
        else if (key == "codec_eval.lambdas") {
            cfg.eval_lambdas.clear();
            for (const auto& c : split_commas(val))
                cfg.eval_lambdas.push_back(parse_double(key, c));
        } else if (key == "codec_eval.gammas") {
            cfg.eval_gammas.clear();
            for (const auto& c : split_commas(val))
                cfg.eval_gammas.push_back(parse_double(key, c));
        } else
            throw ConfigError("unknown config key: " + key);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

void ExperimentConfig::validate() const {
    scenario.validate();
    mmwave.validate("band.mmwave");
    sub6.validate("band.sub6");
    if (dataset_r < 1) throw ConfigError("dataset.r must be >= 1");
    if (dataset_r_prime < 1) throw ConfigError("dataset.r_prime must be >= 1");
    if (!(fractions.train > 0 && fractions.val > 0 && fractions.test > 0))
        throw ConfigError("dataset.*_frac must be positive");
    if (std::fabs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9)
        throw ConfigError("dataset.*_frac must sum to 1");
    if (codec_gamma < 0) throw ConfigError("codec.gamma must be >= 0");
    if (codec_lambda < 0) throw ConfigError("codec.lambda must be >= 0");
    if (policy_horizon < 1) throw ConfigError("policy.horizon must be >= 1");
    if (policy_modes.empty()) throw ConfigError("policy.modes must be non-empty");
    if (!(step_duration_s > 0)) throw ConfigError("sim.step_duration_s must be > 0");
    if (train_epochs < 0) throw ConfigError("train.epochs must be >= 0");
    if (!(train_learning_rate > 0)) throw ConfigError("train.learning_rate must be > 0");
    if (train_pooled_traces < 1) throw ConfigError("train.pooled_traces must be >= 1");
    if (train_crossings < 0) throw ConfigError("train.blocker_crossings must be >= 0");
    if (sweep_counts.empty()) throw ConfigError("sweep.counts must be non-empty");
    if (sweep_num_seeds < 1) throw ConfigError("sweep.num_seeds must be >= 1");
}

std::string ExperimentConfig::echo() const {
    std::map<std::string, std::string> kv;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    kv["scenario.num_steps"] = std::to_string(scenario.num_steps);
    kv["scenario.distance_m"] = num(scenario.distance_m);
    kv["scenario.blocker_crossings"] = std::to_string(scenario.blocker_crossings);
    kv["scenario.blocker_speed"] = std::to_string(scenario.blocker_speed);
    kv["scenario.frame_w"] = std::to_string(scenario.frame_w);
    kv["scenario.frame_h"] = std::to_string(scenario.frame_h);
    kv["scenario.frame_c"] = std::to_string(scenario.frame_c);
    kv["scenario.seed"] = std::to_string(scenario.seed);
    kv["scenario.blocked_power_drop_db"] = num(scenario.blocked_power_drop_db);
    for (const auto* b : {&mmwave, &sub6}) {
        const std::string p = "band." + b->name + ".";
        kv[p + "carrier_hz"] = num(b->carrier_hz);
        kv[p + "bandwidth_hz"] = num(b->bandwidth_hz);
        kv[p + "tx_power_dbm"] = num(b->tx_power_dbm);
        kv[p + "noise_power_dbm"] = num(b->noise_power_dbm);
        kv[p + "nlos_extra_loss_db"] = num(b->nlos_extra_loss_db);
        kv[p + "antenna_gain_db"] = num(b->antenna_gain_db);
    }
    kv["dataset.r"] = std::to_string(dataset_r);
    kv["dataset.r_prime"] = std::to_string(dataset_r_prime);
    kv["dataset.train_frac"] = num(fractions.train);
    kv["dataset.val_frac"] = num(fractions.val);
    kv["dataset.test_frac"] = num(fractions.test);
    kv["dataset.seed"] = std::to_string(dataset_seed);
    kv["codec.lambda"] = num(codec_lambda);
    kv["codec.gamma"] = num(codec_gamma);
    std::string modes;
    for (const auto m : policy_modes) {
        if (!modes.empty()) modes += ",";
        modes += policy_name(m);
    }
    kv["policy.modes"] = modes;
    kv["policy.horizon"] = std::to_string(policy_horizon);
    kv["sim.step_duration_s"] = num(step_duration_s);
    kv["train.epochs"] = std::to_string(train_epochs);
    kv["train.learning_rate"] = num(train_learning_rate);
    kv["train.pooled_traces"] = std::to_string(train_pooled_traces);
    kv["train.blocker_crossings"] = std::to_string(train_crossings);
    std::string counts;
    for (int c : sweep_counts) {
        if (!counts.empty()) counts += ",";
        counts += std::to_string(c);
    }
    kv["sweep.counts"] = counts;
    kv["sweep.num_seeds"] = std::to_string(sweep_num_seeds);
    std::string ls, gs;
    for (double l : eval_lambdas) {
        if (!ls.empty()) ls += ",";
        ls += num(l);
    }
    for (double g : eval_gammas) {
        if (!gs.empty()) gs += ",";
        gs += num(g);
    }
    kv["codec_eval.lambdas"] = ls;
    kv["codec_eval.gammas"] = gs;
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open for write: " + tmp);
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path + ": " + ec.message());
}

}  // namespace dualband
