#include "dualband/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

#include "dualband/errors.hpp"

#include <json.hpp>

namespace dualband {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

int horizon_label(const LinkTrace& trace, int from_step, int horizon) {
    const int end = std::min<int>(from_step + horizon,
                                  static_cast<int>(trace.size()));
    for (int t = from_step; t < end; ++t)
        if (trace.blocked[t]) return 1;
    return 0;
}

}  // namespace

std::string policy_name(PolicyMode mode) {
    switch (mode) {
        case PolicyMode::MMWAVE_ONLY: return "mmwave";
        case PolicyMode::SUB6_ONLY: return "sub6";
        case PolicyMode::SWITCHING: return "switching";
    }
    return "?";
}

RunReport run(const LinkTrace& trace, const BandConfig& mmwave,
              const BandConfig& sub6, const PolicyConfig& policy,
              double step_duration_s, double distance_m) {
    const int n = static_cast<int>(trace.size());
    if (n == 0) throw ConfigError("run: empty trace");
    const bool switching = policy.mode == PolicyMode::SWITCHING;
    if (switching && !policy.predictor)
        throw ConfigError("run: SWITCHING policy requires a predictor");
    const int r = policy.window_r;
    const bool windowed =
        switching && policy.predictor->needs_window();
    if (windowed && n < r + 1)
        throw ConfigError("run: trace length " + std::to_string(n) +
                          " too short for window_r=" + std::to_string(r));

    const Frame& f0 = trace.frames[0];
    const double raw_bits_per_frame = 8.0 * f0.width * f0.height * f0.channels;

    std::shared_ptr<const PriorModel> prior = policy.prior;
    if (switching && !prior) {
        auto p = std::make_shared<PriorModel>(fit_prior(trace.frames));
        prior = p;
    }

    RunReport rep;
    rep.steps.reserve(n);
    std::vector<Frame> decoded;  // fog->cloud reconstructions, filled as we go
    if (switching) decoded.reserve(n);
    int predictions_correct = 0;

    for (int t = 0; t < n; ++t) {
        StepMetrics sm;
        sm.step = t;
        sm.blocked = trace.blocked[t];
        sm.predicted = -1;

        const BandConfig* band = nullptr;
        if (policy.mode == PolicyMode::MMWAVE_ONLY) {
            band = &mmwave;
            sm.fog_bits = raw_bits_per_frame;
        } else if (policy.mode == PolicyMode::SUB6_ONLY) {
            band = &sub6;
            sm.fog_bits = raw_bits_per_frame;
        } else {
            // fog node ships the entropy-coded latent of the current frame
            const LatentCode code = encode(trace.frames[t], *prior);
            sm.fog_bits = static_cast<double>(code.bit_length);
            if (windowed)
                decoded.push_back(
                    decode(code, *prior, policy.gamma,
                           policy.decode_seed + static_cast<std::uint64_t>(t)));

            int s_hat;
            if (windowed && t < r) {
                s_hat = 1;  // cold start: no full window yet, stay safe on Sub-6
            } else {
                WindowedSample sample;
                sample.origin_index = t - 1;
                sample.label =
                    horizon_label(trace, t, policy.decision_horizon);
                if (windowed) {
                    for (int u = t - r; u <= t - 1; ++u) {
                        sample.frames.push_back(decoded[u]);
                        sample.powers.push_back(trace.powers[u]);
                    }
                }
                s_hat = policy.predictor->predict(sample).decision;
            }
            sm.predicted = s_hat;
            if (s_hat == horizon_label(trace, t, policy.decision_horizon))
                ++predictions_correct;
            band = s_hat ? &sub6 : &mmwave;
        }

        const ChannelState st = channel_state(*band, trace.blocked[t], distance_m);
        sm.band = band->name;
        sm.snr_db = st.snr_db;
        sm.throughput_bps = shannon_capacity_bps(*band, st.snr_db);
        sm.ber = qpsk_ber(st.snr_db);
        rep.cumulative_bits += sm.throughput_bps * step_duration_s;
        sm.cumulative_bits = rep.cumulative_bits;
        rep.total_fog_bits += sm.fog_bits;
        rep.mean_ber += sm.ber;
        rep.steps.push_back(std::move(sm));
    }
    rep.mean_ber /= n;
    rep.prediction_accuracy =
        switching ? static_cast<double>(predictions_correct) / n : 1.0;
    rep.bandwidth_reduction = 1.0 - rep.total_fog_bits / (raw_bits_per_frame * n);
    return rep;
}

std::string report_to_csv(const RunReport& report) {
    std::ostringstream os;
    os << "step,band,blocked,predicted,snr_db,throughput_bps,cumulative_bits,"
          "ber,fog_bits\n";
    for (const auto& s : report.steps)
        os << s.step << ',' << s.band << ',' << s.blocked << ',' << s.predicted
           << ',' << fmt(s.snr_db) << ',' << fmt(s.throughput_bps) << ','
           << fmt(s.cumulative_bits) << ',' << fmt(s.ber) << ','
           << fmt(s.fog_bits) << '\n';
    return os.str();
}

std::string report_to_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["cumulative_bits"] = report.cumulative_bits;
    j["mean_ber"] = report.mean_ber;
    j["prediction_accuracy"] = report.prediction_accuracy;
    j["total_fog_bits"] = report.total_fog_bits;
    j["bandwidth_reduction"] = report.bandwidth_reduction;
    j["steps"] = nlohmann::ordered_json::array();
    for (const auto& s : report.steps) {
        nlohmann::ordered_json js;
        js["step"] = s.step;
        js["band"] = s.band;
        js["blocked"] = s.blocked;
        js["predicted"] = s.predicted;
        js["snr_db"] = s.snr_db;
        js["throughput_bps"] = s.throughput_bps;
        js["cumulative_bits"] = s.cumulative_bits;
        js["ber"] = s.ber;
        js["fog_bits"] = s.fog_bits;
        j["steps"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

namespace {

struct Cell {
    int count;
    PolicyMode mode;
    std::uint64_t seed;
};

std::vector<SweepRow> sweep_impl(const SweepConfig& cfg, bool ber_metric) {
    if (cfg.counts.empty()) throw ConfigError("sweep: counts must be non-empty");
    if (cfg.seeds.empty()) throw ConfigError("sweep: seeds must be non-empty");
    std::vector<Cell> cells;
    for (int count : cfg.counts)
        for (PolicyMode mode : cfg.policies)
            for (std::uint64_t seed : cfg.seeds) cells.push_back({count, mode, seed});

    auto eval_cell = [&](const Cell& cell) {
        ScenarioConfig sc = cfg.scenario;
        sc.blocker_crossings = cell.count;
        sc.seed = cell.seed;
        const LinkTrace trace = generate_trace(sc);
        PolicyConfig policy;
        policy.mode = cell.mode;
        if (cell.mode == PolicyMode::SWITCHING)
            policy.predictor = std::make_shared<OraclePredictor>();
        const RunReport rep =
            run(trace, cfg.mmwave, cfg.sub6, policy, cfg.step_duration_s,
                cfg.scenario.distance_m);
        return ber_metric ? rep.mean_ber : rep.cumulative_bits;
    };

    std::vector<double> metrics(cells.size());
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) metrics[i] = eval_cell(cells[i]);
    } else {
        std::vector<std::future<void>> workers;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < jobs; ++w)
            workers.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < cells.size(); i = next++)
                    metrics[i] = eval_cell(cells[i]);
            }));
        for (auto& f : workers) f.get();
    }

    std::vector<SweepRow> rows;
    rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        rows.push_back({cells[i].count, policy_name(cells[i].mode), cells[i].seed,
                        metrics[i]});
    return rows;
}

}  // namespace

std::vector<SweepRow> sweep_blockages(const SweepConfig& cfg) {
    return sweep_impl(cfg, false);
}

std::vector<SweepRow> sweep_ber(const SweepConfig& cfg) {
    return sweep_impl(cfg, true);
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows,
                         const std::string& metric_name) {
    std::ostringstream os;
    os << "count,policy,seed," << metric_name << "\n";
    for (const auto& r : rows)
        os << r.count << ',' << r.policy << ',' << r.seed << ',' << fmt(r.metric)
           << '\n';
    return os.str();
}

std::vector<WindowedSample> decode_samples_of_trace(const LinkTrace& trace,
                                                    const PriorModel& prior,
                                                    double gamma,
                                                    std::uint64_t decode_seed,
                                                    int r, int r_prime) {
    LinkTrace decoded = trace;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const LatentCode code = encode(trace.frames[t], prior);
        decoded.frames[t] =
            decode(code, prior, gamma, decode_seed + static_cast<std::uint64_t>(t));
    }
    return window_and_label(decoded, r, r_prime);
}

std::vector<GammaRow> gamma_sweep(const GammaSweepConfig& cfg) {
    for (double g : cfg.gammas)
        if (g < 0.0 || g > 1.5)
            throw ConfigError("gamma_sweep: gammas must lie in [0, 1.5]");
    std::vector<GammaRow> rows;
    for (double g : cfg.gammas) rows.push_back({g, 0.0});

    for (std::uint64_t seed : cfg.seeds) {
        // pool several traces so the balanced dataset has usable size
        std::vector<LinkTrace> traces;
        for (int i = 0; i < cfg.pooled_traces; ++i) {
            ScenarioConfig sc = cfg.scenario;
            sc.seed = seed * 1000003ull + static_cast<std::uint64_t>(i);
            traces.push_back(generate_trace(sc));
        }
        std::vector<Frame> all_frames;
        for (const auto& t : traces)
            all_frames.insert(all_frames.end(), t.frames.begin(), t.frames.end());
        const PriorModel prior = fit_prior(all_frames);

        auto pooled_samples = [&](double gamma) {
            std::vector<WindowedSample> all;
            for (std::size_t i = 0; i < traces.size(); ++i) {
                auto s = decode_samples_of_trace(traces[i], prior, gamma,
                                                 seed + 7919 * i, cfg.r, cfg.r_prime);
                all.insert(all.end(), s.begin(), s.end());
            }
            // balance/split depend only on labels, counts and the seed, so the
            // same selection applies across gamma variants
            return split(balance(all, seed), cfg.fractions, seed);
        };

        const SplitDataset base = pooled_samples(0.0);
        const FeatureExtractor fe = FeatureExtractor::fit(base.train);
        const LogisticModel model =
            train_logistic(base, fe, cfg.epochs, cfg.learning_rate);

        for (auto& row : rows) {
            const SplitDataset at_gamma =
                row.gamma == 0.0 ? base : pooled_samples(row.gamma);
            LogisticPredictor pred(model, fe);
            row.mean_accuracy += evaluate(pred, at_gamma.test).accuracy;
        }
    }
    for (auto& row : rows) row.mean_accuracy /= static_cast<double>(cfg.seeds.size());
    return rows;
}

}  // namespace dualband
