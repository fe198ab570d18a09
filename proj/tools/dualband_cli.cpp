// Experiment runner: turns a declarative config into traces, trained models,
// per-policy run reports and sweep tables.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualband/config.hpp"
#include "dualband/errors.hpp"

namespace fs = std::filesystem;
using namespace dualband;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    long long seed_override = -1;
    int jobs = 1;
};

ExperimentConfig load_effective_config(const CommonArgs& args) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = load_config(args.config_path);
    if (args.seed_override >= 0) {
        cfg.scenario.seed = static_cast<std::uint64_t>(args.seed_override);
        cfg.dataset_seed = static_cast<std::uint64_t>(args.seed_override);
    }
    cfg.validate();
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

// Pooled windowed dataset drawn from traces seeded off the scenario seed.
struct TrainedPredictor {
    std::shared_ptr<LogisticPredictor> predictor;
    std::shared_ptr<const PriorModel> prior;
    LogisticModel model;
    FeatureExtractor extractor;
    std::vector<double> loss_curve;
    EvalMetrics test_metrics;
};

TrainedPredictor train_pipeline(const ExperimentConfig& cfg, int r_prime,
                                double gamma) {
    std::vector<LinkTrace> traces;
    for (int i = 0; i < cfg.train_pooled_traces; ++i) {
        ScenarioConfig sc = cfg.scenario;
        sc.blocker_crossings = cfg.train_crossings;
        sc.seed = cfg.scenario.seed * 1000003ull + 17 + static_cast<std::uint64_t>(i);
        traces.push_back(generate_trace(sc));
    }
    std::vector<Frame> frames;
    for (const auto& t : traces)
        frames.insert(frames.end(), t.frames.begin(), t.frames.end());
    TrainedPredictor out;
    out.prior = std::make_shared<const PriorModel>(fit_prior(frames));

    std::vector<WindowedSample> samples;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        auto s = decode_samples_of_trace(traces[i], *out.prior, gamma,
                                         cfg.dataset_seed + 7919 * i, cfg.dataset_r,
                                         r_prime);
        samples.insert(samples.end(), s.begin(), s.end());
    }
    const SplitDataset ds =
        split(balance(samples, cfg.dataset_seed), cfg.fractions, cfg.dataset_seed);
    out.extractor = FeatureExtractor::fit(ds.train);
    out.model = train_logistic(ds, out.extractor, cfg.train_epochs,
                               cfg.train_learning_rate, &out.loss_curve);
    out.predictor = std::make_shared<LogisticPredictor>(out.model, out.extractor);
    LogisticPredictor eval_pred(out.model, out.extractor);
    out.test_metrics = evaluate(eval_pred, ds.test);
    return out;
}

int cmd_simulate(const CommonArgs& args) {
    const ExperimentConfig cfg = load_effective_config(args);
    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);

    const LinkTrace trace = generate_trace(cfg.scenario);
    export_trace(trace, (out / "trace.dbtr").string());

    bool wants_switching = false;
    for (auto m : cfg.policy_modes)
        if (m == PolicyMode::SWITCHING) wants_switching = true;

    TrainedPredictor trained;
    if (wants_switching)
        trained = train_pipeline(cfg, cfg.policy_horizon, cfg.codec_gamma);

    nlohmann::ordered_json summary;
    summary["policies"] = nlohmann::ordered_json::object();
    for (auto mode : cfg.policy_modes) {
        PolicyConfig policy;
        policy.mode = mode;
        policy.gamma = cfg.codec_gamma;
        policy.lambda = cfg.codec_lambda;
        policy.window_r = cfg.dataset_r;
        policy.decision_horizon = cfg.policy_horizon;
        policy.decode_seed = cfg.dataset_seed;
        if (mode == PolicyMode::SWITCHING) {
            policy.predictor = trained.predictor;
            policy.prior = trained.prior;
        }
        const RunReport rep = run(trace, cfg.mmwave, cfg.sub6, policy,
                                  cfg.step_duration_s, cfg.scenario.distance_m);
        const std::string name = policy_name(mode);
        atomic_write((out / ("run_" + name + ".csv")).string(), report_to_csv(rep));
        atomic_write((out / ("run_" + name + ".json")).string(), report_to_json(rep));
        nlohmann::ordered_json js;
        js["cumulative_bits"] = rep.cumulative_bits;
        js["mean_ber"] = rep.mean_ber;
        js["prediction_accuracy"] = rep.prediction_accuracy;
        js["total_fog_bits"] = rep.total_fog_bits;
        js["bandwidth_reduction"] = rep.bandwidth_reduction;
        summary["policies"][name] = std::move(js);
    }
    if (wants_switching) {
        summary["predictor"] = {
            {"test_accuracy", trained.test_metrics.accuracy},
            {"test_tpr", trained.test_metrics.tpr},
            {"test_tnr", trained.test_metrics.tnr},
            {"final_training_loss", trained.loss_curve.back()},
        };
    }
    atomic_write((out / "summary.json").string(), summary.dump(2) + "\n");
    atomic_write((out / "config_effective.cfg").string(), cfg.echo());
    return 0;
}

int cmd_train(const CommonArgs& args) {
    const ExperimentConfig cfg = load_effective_config(args);
    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);

    const TrainedPredictor trained =
        train_pipeline(cfg, cfg.dataset_r_prime, cfg.codec_gamma);
    save_model(trained.model, (out / "model.txt").string());
    std::ostringstream curve;
    curve << "epoch,cross_entropy\n";
    curve.precision(17);
    for (std::size_t e = 0; e < trained.loss_curve.size(); ++e)
        curve << e << ',' << trained.loss_curve[e] << '\n';
    atomic_write((out / "loss_curve.csv").string(), curve.str());
    atomic_write((out / "config_effective.cfg").string(), cfg.echo());
    std::printf("test accuracy %.4f (tpr %.4f, tnr %.4f)\n",
                trained.test_metrics.accuracy, trained.test_metrics.tpr,
                trained.test_metrics.tnr);
    return 0;
}

int cmd_codec_eval(const CommonArgs& args) {
    const ExperimentConfig cfg = load_effective_config(args);
    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);

    const LinkTrace trace = generate_trace(cfg.scenario);
    const PriorModel prior = fit_prior(trace.frames);
    std::ostringstream table;
    table << "lambda,gamma,mean_rate_bits,mean_distortion_mse,"
             "compression_ratio,bandwidth_reduction\n";
    table.precision(10);
    for (double lambda : cfg.eval_lambdas) {
        for (double gamma : cfg.eval_gammas) {
            double rate = 0, dist = 0, ratio = 0;
            for (std::size_t t = 0; t < trace.size(); ++t) {
                const RdReport r = rd_report(trace.frames[t], prior, gamma, lambda,
                                             cfg.dataset_seed + t);
                rate += r.rate_bits;
                dist += r.distortion_mse;
                ratio += r.compression_ratio;
            }
            const double n = static_cast<double>(trace.size());
            table << lambda << ',' << gamma << ',' << rate / n << ',' << dist / n
                  << ',' << ratio / n << ',' << 1.0 - ratio / n << '\n';
        }
    }
    atomic_write((out / "codec_eval.csv").string(), table.str());
    atomic_write((out / "config_effective.cfg").string(), cfg.echo());
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const ExperimentConfig cfg = load_effective_config(args);
    ensure_out_dir(args.out_dir);
    const fs::path out(args.out_dir);

    SweepConfig sw;
    sw.scenario = cfg.scenario;
    sw.mmwave = cfg.mmwave;
    sw.sub6 = cfg.sub6;
    sw.counts = cfg.sweep_counts;
    for (int i = 0; i < cfg.sweep_num_seeds; ++i)
        sw.seeds.push_back(cfg.scenario.seed + static_cast<std::uint64_t>(i));
    sw.policies = cfg.policy_modes;
    sw.step_duration_s = cfg.step_duration_s;
    sw.jobs = args.jobs;

    atomic_write((out / "sweep_throughput.csv").string(),
                 sweep_to_csv(sweep_blockages(sw), "cumulative_bits"));
    atomic_write((out / "sweep_ber.csv").string(),
                 sweep_to_csv(sweep_ber(sw), "mean_ber"));
    atomic_write((out / "config_effective.cfg").string(), cfg.echo());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-band blockage-prediction link simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --config/--out/... after the subcommand too

    CommonArgs args;
    app.add_option("--config", args.config_path, "experiment config (key=value)");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--seed", args.seed_override, "override scenario/dataset seeds");
    app.add_option("--jobs", args.jobs, "sweep worker threads")
        ->check(CLI::PositiveNumber);

    auto* simulate = app.add_subcommand("simulate", "trace + per-policy runs");
    auto* train = app.add_subcommand("train", "fit the logistic predictor");
    auto* codec_eval = app.add_subcommand("codec-eval", "rate/distortion table");
    auto* sweep = app.add_subcommand("sweep", "blockage-count sweep tables");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (train->parsed()) return cmd_train(args);
        if (codec_eval->parsed()) return cmd_codec_eval(args);
        if (sweep->parsed()) return cmd_sweep(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    }
    return 1;
}
