#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dualband/channel.hpp"
#include "dualband/dataset.hpp"
#include "dualband/scene.hpp"
#include "dualband/simulator.hpp"

namespace dualband {

// Declarative experiment description, parsed from flat `key=value` text with
// dotted keys (e.g. band.mmwave.carrier_hz=28e9). Unknown keys are errors.
struct ExperimentConfig {
    ScenarioConfig scenario;
    BandConfig mmwave = mmwave_default();
    BandConfig sub6 = sub6_default();

    int dataset_r = 5;
    int dataset_r_prime = 5;
    SplitFractions fractions;
    std::uint64_t dataset_seed = 1;

    double codec_lambda = 0.01;
    double codec_gamma = 0.5;

    std::vector<PolicyMode> policy_modes = {
        PolicyMode::MMWAVE_ONLY, PolicyMode::SUB6_ONLY, PolicyMode::SWITCHING};
    int policy_horizon = 1;

    double step_duration_s = kDefaultStepDurationS;

    int train_epochs = 1500;
    double train_learning_rate = 0.1;
    int train_pooled_traces = 24;
    // Crossing count of the traces pooled for training. The dense default
    // scenario (30 crossings / 100 steps) leaves no blockage-free future
    // window of r' steps, so training data uses a sparser variant.
    int train_crossings = 6;

    std::vector<int> sweep_counts = {5, 10, 15, 20, 25, 30};
    int sweep_num_seeds = 10;
    std::vector<double> eval_lambdas = {0.0, 0.01, 0.1};
    std::vector<double> eval_gammas = {0.0, 0.5, 1.0};

    void validate() const;
    // Effective config, defaults applied, one sorted key=value per line.
    std::string echo() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// temp-file + rename so partially written outputs are never observed
void atomic_write(const std::string& path, const std::string& content);

}  // namespace dualband
