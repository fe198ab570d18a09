#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dualband/dataset.hpp"
#include "dualband/rng.hpp"

namespace dualband {

struct FeatureVector {
    std::vector<double> values;
};

inline constexpr int kFrameStatsPerStep = 4;
inline constexpr int kFeaturesPerStep = kNumBeams + kFrameStatsPerStep;

// Per-beam and per-statistic normalization, fitted on the training split.
struct FeatureExtractor {
    std::array<double, kNumBeams> power_mean{};
    std::array<double, kNumBeams> power_std{};
    std::array<double, kFrameStatsPerStep> stat_mean{};
    std::array<double, kFrameStatsPerStep> stat_std{};

    // mean 0 / std 1 (raw values pass through)
    static FeatureExtractor identity();
    static FeatureExtractor fit(const std::vector<WindowedSample>& samples);

    // Per step: 64 z-scored beam powers, then z-scored frame mean, variance,
    // LOS-column mean, darkest 8x8-block mean; concatenated oldest step first.
    FeatureVector extract(const WindowedSample& sample) const;
};

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    double threshold = 0.5;

    double probability(const FeatureVector& x) const;
};

void save_model(const LogisticModel& model, const std::string& path);
LogisticModel load_model(const std::string& path);

// Mean cross-entropy and its analytic gradient (d/dw, d/db) at the given
// parameters over a batch.
double logistic_loss_and_gradient(const std::vector<FeatureVector>& xs,
                                  const std::vector<int>& labels,
                                  const std::vector<double>& weights, double bias,
                                  std::vector<double>* grad_w, double* grad_b);

// Full-batch gradient descent from zero init; optional per-epoch loss curve
// (entry 0 is the loss at initialization).
LogisticModel train_logistic_features(const std::vector<FeatureVector>& xs,
                                      const std::vector<int>& labels, int epochs,
                                      double learning_rate,
                                      std::vector<double>* loss_curve = nullptr);

LogisticModel train_logistic(const SplitDataset& dataset,
                             const FeatureExtractor& extractor, int epochs,
                             double learning_rate,
                             std::vector<double>* loss_curve = nullptr);

struct Prediction {
    double probability = 0.0;
    int decision = 0;  // 1 iff probability >= threshold
};

class BlockagePredictor {
public:
    virtual ~BlockagePredictor() = default;
    virtual Prediction predict(const WindowedSample& sample) = 0;
    // True when the predictor needs a full observation window before it can
    // answer (the simulator falls back to Sub-6 during that warm-up).
    virtual bool needs_window() const { return false; }
};

// Returns the ground-truth label; upper bound for any switching policy.
class OraclePredictor : public BlockagePredictor {
public:
    Prediction predict(const WindowedSample& sample) override;
};

struct ConfusionPredictorConfig {
    double true_positive_rate = 1.0;
    double true_negative_rate = 1.0;
    std::uint64_t seed = 0;
};

// Emulates a predictor with a target TPR/TNR by flipping the true label.
class ConfusionPredictor : public BlockagePredictor {
public:
    explicit ConfusionPredictor(const ConfusionPredictorConfig& cfg);
    Prediction predict(const WindowedSample& sample) override;

private:
    ConfusionPredictorConfig cfg_;
    Rng rng_;
};

class LogisticPredictor : public BlockagePredictor {
public:
    LogisticPredictor(LogisticModel model, FeatureExtractor extractor)
        : model_(std::move(model)), extractor_(extractor) {}
    Prediction predict(const WindowedSample& sample) override;
    bool needs_window() const override { return true; }

private:
    LogisticModel model_;
    FeatureExtractor extractor_;
};

struct EvalMetrics {
    double accuracy = 0.0;
    double tpr = 0.0;
    double tnr = 0.0;
    double cross_entropy = 0.0;
};

EvalMetrics evaluate(BlockagePredictor& predictor,
                     const std::vector<WindowedSample>& samples);

}  // namespace dualband
