#include "dualband/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dualband/errors.hpp"

namespace dualband {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// clamped log for cross-entropy accumulation
double safe_log(double p) { return std::log(std::max(p, 1e-15)); }

void frame_stats(const Frame& f, double out[kFrameStatsPerStep]) {
    double sum = 0.0, sumsq = 0.0;
    for (double v : f.samples) {
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(f.samples.size());
    const double mean = sum / n;
    out[0] = mean;
    out[1] = std::max(0.0, sumsq / n - mean * mean);

    const int los = los_column(f.width);
    double col = 0.0;
    for (int y = 0; y < f.height; ++y)
        for (int c = 0; c < f.channels; ++c) col += f.at(los, y, c);
    out[2] = col / (f.height * f.channels);

    // darkest 8x8 tile (tiles truncated at the frame edge), channel-averaged
    double darkest = std::numeric_limits<double>::infinity();
    for (int by = 0; by < f.height; by += 8) {
        for (int bx = 0; bx < f.width; bx += 8) {
            double s = 0.0;
            int cnt = 0;
            for (int y = by; y < std::min(by + 8, f.height); ++y)
                for (int x = bx; x < std::min(bx + 8, f.width); ++x)
                    for (int c = 0; c < f.channels; ++c) {
                        s += f.at(x, y, c);
                        ++cnt;
                    }
            darkest = std::min(darkest, s / cnt);
        }
    }
    out[3] = darkest;
}

}  // namespace

FeatureExtractor FeatureExtractor::identity() {
    FeatureExtractor fe;
    fe.power_mean.fill(0.0);
    fe.power_std.fill(1.0);
    fe.stat_mean.fill(0.0);
    fe.stat_std.fill(1.0);
    return fe;
}

FeatureExtractor FeatureExtractor::fit(const std::vector<WindowedSample>& samples) {
    FeatureExtractor fe;
    std::array<double, kNumBeams> sum{}, sumsq{};
    std::array<double, kFrameStatsPerStep> ssum{}, ssumsq{};
    std::size_t n = 0;
    for (const auto& s : samples) {
        for (const auto& p : s.powers) {
            for (int b = 0; b < kNumBeams; ++b) {
                sum[b] += p.gains_dbm[b];
                sumsq[b] += p.gains_dbm[b] * p.gains_dbm[b];
            }
            ++n;
        }
        for (const auto& f : s.frames) {
            double fs[kFrameStatsPerStep];
            frame_stats(f, fs);
            for (int k = 0; k < kFrameStatsPerStep; ++k) {
                ssum[k] += fs[k];
                ssumsq[k] += fs[k] * fs[k];
            }
        }
    }
    if (n == 0) throw ConfigError("feature fit: no power vectors in samples");
    for (int b = 0; b < kNumBeams; ++b) {
        fe.power_mean[b] = sum[b] / n;
        const double var =
            std::max(0.0, sumsq[b] / n - fe.power_mean[b] * fe.power_mean[b]);
        fe.power_std[b] = std::max(1e-6, std::sqrt(var));
    }
    for (int k = 0; k < kFrameStatsPerStep; ++k) {
        fe.stat_mean[k] = ssum[k] / n;
        const double var =
            std::max(0.0, ssumsq[k] / n - fe.stat_mean[k] * fe.stat_mean[k]);
        fe.stat_std[k] = std::max(1e-6, std::sqrt(var));
    }
    return fe;
}

FeatureVector FeatureExtractor::extract(const WindowedSample& sample) const {
    FeatureVector x;
    x.values.reserve(sample.powers.size() * kFeaturesPerStep);
    for (std::size_t t = 0; t < sample.powers.size(); ++t) {
        for (int b = 0; b < kNumBeams; ++b)
            x.values.push_back(
                (sample.powers[t].gains_dbm[b] - power_mean[b]) / power_std[b]);
        double fs[kFrameStatsPerStep];
        frame_stats(sample.frames[t], fs);
        for (int k = 0; k < kFrameStatsPerStep; ++k)
            x.values.push_back((fs[k] - stat_mean[k]) / stat_std[k]);
    }
    return x;
}

double LogisticModel::probability(const FeatureVector& x) const {
    if (x.values.size() != weights.size())
        throw ConfigError("logistic: feature length " +
                          std::to_string(x.values.size()) + " != model " +
                          std::to_string(weights.size()));
    double z = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) z += weights[i] * x.values[i];
    return sigmoid(z);
}

void save_model(const LogisticModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open for write: " + path);
    os.precision(17);
    os << "feature_len " << model.weights.size() << "\n";
    os << "threshold " << model.threshold << "\n";
    os << "bias " << model.bias << "\n";
    os << "weights";
    for (double w : model.weights) os << " " << w;
    os << "\n";
    if (!os) throw IoError("write failed: " + path);
}

LogisticModel load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for read: " + path);
    LogisticModel m;
    std::string key;
    std::size_t len = 0;
    if (!(is >> key >> len) || key != "feature_len")
        throw ParseError(path + ": expected feature_len");
    if (!(is >> key >> m.threshold) || key != "threshold")
        throw ParseError(path + ": expected threshold");
    if (!(is >> key >> m.bias) || key != "bias")
        throw ParseError(path + ": expected bias");
    if (!(is >> key) || key != "weights")
        throw ParseError(path + ": expected weights");
    m.weights.resize(len);
    for (std::size_t i = 0; i < len; ++i)
        if (!(is >> m.weights[i]))
            throw ParseError(path + ": truncated weights (expected " +
                             std::to_string(len) + ")");
    return m;
}

double logistic_loss_and_gradient(const std::vector<FeatureVector>& xs,
                                  const std::vector<int>& labels,
                                  const std::vector<double>& weights, double bias,
                                  std::vector<double>* grad_w, double* grad_b) {
    const std::size_t n = xs.size();
    const std::size_t d = weights.size();
    if (grad_w) grad_w->assign(d, 0.0);
    if (grad_b) *grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = bias;
        for (std::size_t j = 0; j < d; ++j) z += weights[j] * xs[i].values[j];
        const double p = sigmoid(z);
        const double y = labels[i];
        loss -= y * safe_log(p) + (1.0 - y) * safe_log(1.0 - p);
        const double err = p - y;
        if (grad_w)
            for (std::size_t j = 0; j < d; ++j) (*grad_w)[j] += err * xs[i].values[j];
        if (grad_b) *grad_b += err;
    }
    loss /= n;
    if (grad_w)
        for (double& g : *grad_w) g /= n;
    if (grad_b) *grad_b /= n;
    return loss;
}

LogisticModel train_logistic_features(const std::vector<FeatureVector>& xs,
                                      const std::vector<int>& labels, int epochs,
                                      double learning_rate,
                                      std::vector<double>* loss_curve) {
    if (xs.empty() || xs.size() != labels.size())
        throw ConfigError("train: empty or mismatched feature/label sets");
    const bool has_pos = std::count(labels.begin(), labels.end(), 1) > 0;
    const bool has_neg = std::count(labels.begin(), labels.end(), 0) > 0;
    if (!has_pos || !has_neg)
        throw ConfigError("train: training set must contain both classes");
    LogisticModel m;
    m.weights.assign(xs[0].values.size(), 0.0);
    std::vector<double> gw;
    double gb = 0.0;
    for (int e = 0; e < epochs; ++e) {
        const double loss =
            logistic_loss_and_gradient(xs, labels, m.weights, m.bias, &gw, &gb);
        if (loss_curve) loss_curve->push_back(loss);
        for (std::size_t j = 0; j < m.weights.size(); ++j)
            m.weights[j] -= learning_rate * gw[j];
        m.bias -= learning_rate * gb;
    }
    if (loss_curve)
        loss_curve->push_back(
            logistic_loss_and_gradient(xs, labels, m.weights, m.bias, nullptr, nullptr));
    return m;
}

LogisticModel train_logistic(const SplitDataset& dataset,
                             const FeatureExtractor& extractor, int epochs,
                             double learning_rate, std::vector<double>* loss_curve) {
    if (dataset.train.empty()) throw ConfigError("train: empty training split");
    std::vector<FeatureVector> xs;
    std::vector<int> ys;
    xs.reserve(dataset.train.size());
    for (const auto& s : dataset.train) {
        xs.push_back(extractor.extract(s));
        ys.push_back(s.label);
    }
    return train_logistic_features(xs, ys, epochs, learning_rate, loss_curve);
}

Prediction OraclePredictor::predict(const WindowedSample& sample) {
    return {sample.label ? 1.0 : 0.0, sample.label};
}

ConfusionPredictor::ConfusionPredictor(const ConfusionPredictorConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed) {
    if (cfg.true_positive_rate < 0 || cfg.true_positive_rate > 1 ||
        cfg.true_negative_rate < 0 || cfg.true_negative_rate > 1)
        throw ConfigError("confusion predictor: rates must be in [0,1]");
}

Prediction ConfusionPredictor::predict(const WindowedSample& sample) {
    const double u = rng_.uniform();
    int decision;
    if (sample.label == 1)
        decision = u < cfg_.true_positive_rate ? 1 : 0;
    else
        decision = u < cfg_.true_negative_rate ? 0 : 1;
    return {decision ? 1.0 : 0.0, decision};
}

Prediction LogisticPredictor::predict(const WindowedSample& sample) {
    const double p = model_.probability(extractor_.extract(sample));
    // tie at the threshold predicts blockage
    return {p, p >= model_.threshold ? 1 : 0};
}

EvalMetrics evaluate(BlockagePredictor& predictor,
                     const std::vector<WindowedSample>& samples) {
    if (samples.empty()) throw ConfigError("evaluate: no samples");
    std::size_t correct = 0, tp = 0, tn = 0, pos = 0, neg = 0;
    double ce = 0.0;
    for (const auto& s : samples) {
        const Prediction pr = predictor.predict(s);
        if (pr.decision == s.label) ++correct;
        if (s.label) {
            ++pos;
            if (pr.decision) ++tp;
            ce -= safe_log(pr.probability);
        } else {
            ++neg;
            if (!pr.decision) ++tn;
            ce -= safe_log(1.0 - pr.probability);
        }
    }
    EvalMetrics m;
    m.accuracy = static_cast<double>(correct) / samples.size();
    m.tpr = pos ? static_cast<double>(tp) / pos : 0.0;
    m.tnr = neg ? static_cast<double>(tn) / neg : 0.0;
    m.cross_entropy = ce / samples.size();
    return m;
}

}  // namespace dualband
