#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dualband/channel.hpp"
#include "dualband/codec.hpp"
#include "dualband/dataset.hpp"
#include "dualband/predictor.hpp"
#include "dualband/scene.hpp"

namespace dualband {

enum class PolicyMode { MMWAVE_ONLY, SUB6_ONLY, SWITCHING };

std::string policy_name(PolicyMode mode);

// Sensing rate of 6.5 samples/s.
inline constexpr double kDefaultStepDurationS = 1.0 / 6.5;

struct PolicyConfig {
    PolicyMode mode = PolicyMode::MMWAVE_ONLY;
    std::shared_ptr<BlockagePredictor> predictor;  // required for SWITCHING
    double gamma = 0.0;   // codec noise level on the fog->cloud path
    double lambda = 0.0;  // R-D weight, reported only
    int window_r = 5;     // observation window length
    // r' of the in-loop prediction: the band for step t follows the predicted
    // blockage status of steps {t, ..., t+horizon-1}, predicted from the
    // window ending at t-1. horizon=1 aligns the switch with the step it
    // covers.
    int decision_horizon = 1;
    std::shared_ptr<const PriorModel> prior;  // fitted from the trace if null
    std::uint64_t decode_seed = 0;
};

struct StepMetrics {
    int step = 0;
    std::string band;
    int blocked = 0;
    int predicted = 0;  // -1 when the policy does not predict
    double snr_db = 0.0;
    double throughput_bps = 0.0;
    double cumulative_bits = 0.0;
    double ber = 0.0;
    double fog_bits = 0.0;
};

struct RunReport {
    std::vector<StepMetrics> steps;
    double cumulative_bits = 0.0;
    double mean_ber = 0.0;
    double prediction_accuracy = 0.0;  // switching only, else 1
    double total_fog_bits = 0.0;
    double bandwidth_reduction = 0.0;  // 1 - fog bits / raw bits
};

RunReport run(const LinkTrace& trace, const BandConfig& mmwave,
              const BandConfig& sub6, const PolicyConfig& policy,
              double step_duration_s = kDefaultStepDurationS,
              double distance_m = 10.6);

std::string report_to_csv(const RunReport& report);
std::string report_to_json(const RunReport& report);

struct SweepConfig {
    ScenarioConfig scenario;  // num_steps/seed overridden per cell
    BandConfig mmwave = mmwave_default();
    BandConfig sub6 = sub6_default();
    std::vector<int> counts;
    std::vector<std::uint64_t> seeds;
    std::vector<PolicyMode> policies;
    double step_duration_s = kDefaultStepDurationS;
    int jobs = 1;
};

struct SweepRow {
    int count = 0;
    std::string policy;
    std::uint64_t seed = 0;
    double metric = 0.0;
};

// One row per (count, policy, seed); metric = cumulative throughput in bits.
// SWITCHING cells use the oracle predictor with horizon 1.
std::vector<SweepRow> sweep_blockages(const SweepConfig& cfg);
// Same grid, metric = mean BER.
std::vector<SweepRow> sweep_ber(const SweepConfig& cfg);

std::string sweep_to_csv(const std::vector<SweepRow>& rows,
                         const std::string& metric_name);

struct GammaSweepConfig {
    ScenarioConfig scenario;
    int r = 5;
    int r_prime = 5;
    SplitFractions fractions;
    std::vector<double> gammas;
    std::vector<std::uint64_t> seeds;
    int pooled_traces = 6;  // traces pooled per seed to get a usable dataset
    int epochs = 1500;
    double learning_rate = 0.1;
};

struct GammaRow {
    double gamma = 0.0;
    double mean_accuracy = 0.0;
};

// Trains the logistic predictor on gamma=0-decoded frames and evaluates the
// test split decoded at each requested gamma; accuracy averaged over seeds.
std::vector<GammaRow> gamma_sweep(const GammaSweepConfig& cfg);

// Windowed samples whose frames went through encode->decode at the given
// noise level; powers and labels untouched.
std::vector<WindowedSample> decode_samples_of_trace(const LinkTrace& trace,
                                                    const PriorModel& prior,
                                                    double gamma,
                                                    std::uint64_t decode_seed,
                                                    int r, int r_prime);

}  // namespace dualband
