// pybind11 surface over the core library: scene generation, link math, the
// latent codec, predictors and the switching simulator.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dualband/channel.hpp"
#include "dualband/codec.hpp"
#include "dualband/config.hpp"
#include "dualband/dataset.hpp"
#include "dualband/errors.hpp"
#include "dualband/predictor.hpp"
#include "dualband/scene.hpp"
#include "dualband/simulator.hpp"

namespace py = pybind11;
using namespace dualband;

PYBIND11_MODULE(_core, m) {
    m.doc() = "dual-band blockage-prediction link simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Frame>(m, "Frame")
        .def(py::init<>())
        .def_readwrite("width", &Frame::width)
        .def_readwrite("height", &Frame::height)
        .def_readwrite("channels", &Frame::channels)
        .def_readwrite("samples", &Frame::samples)
        .def("__eq__", [](const Frame& a, const Frame& b) { return a == b; });

    py::class_<PowerVector>(m, "PowerVector")
        .def(py::init<>())
        .def_readwrite("gains_dbm", &PowerVector::gains_dbm);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("num_steps", &ScenarioConfig::num_steps)
        .def_readwrite("distance_m", &ScenarioConfig::distance_m)
        .def_readwrite("blocker_crossings", &ScenarioConfig::blocker_crossings)
        .def_readwrite("blocker_speed", &ScenarioConfig::blocker_speed)
        .def_readwrite("frame_w", &ScenarioConfig::frame_w)
        .def_readwrite("frame_h", &ScenarioConfig::frame_h)
        .def_readwrite("frame_c", &ScenarioConfig::frame_c)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("blocked_power_drop_db", &ScenarioConfig::blocked_power_drop_db);

    py::class_<LinkTrace>(m, "LinkTrace")
        .def(py::init<>())
        .def_readwrite("frames", &LinkTrace::frames)
        .def_readwrite("powers", &LinkTrace::powers)
        .def_readwrite("blocked", &LinkTrace::blocked)
        .def("__len__", &LinkTrace::size)
        .def("__eq__", [](const LinkTrace& a, const LinkTrace& b) { return a == b; });

    m.def("generate_trace", &generate_trace);
    m.def("export_trace", &export_trace);
    m.def("import_trace", &import_trace);

    py::class_<BandConfig>(m, "BandConfig")
        .def(py::init<>())
        .def_readwrite("name", &BandConfig::name)
        .def_readwrite("carrier_hz", &BandConfig::carrier_hz)
        .def_readwrite("bandwidth_hz", &BandConfig::bandwidth_hz)
        .def_readwrite("tx_power_dbm", &BandConfig::tx_power_dbm)
        .def_readwrite("noise_power_dbm", &BandConfig::noise_power_dbm)
        .def_readwrite("nlos_extra_loss_db", &BandConfig::nlos_extra_loss_db)
        .def_readwrite("antenna_gain_db", &BandConfig::antenna_gain_db);

    py::enum_<LinkMode>(m, "LinkMode").value("LOS", LinkMode::LOS).value("NLOS", LinkMode::NLOS);

    py::class_<ChannelState>(m, "ChannelState")
        .def_readonly("blocked", &ChannelState::blocked)
        .def_readonly("snr_db", &ChannelState::snr_db)
        .def_readonly("h_mode", &ChannelState::h_mode);

    m.def("mmwave_default", &mmwave_default);
    m.def("sub6_default", &sub6_default);
    m.def("fspl_db", &fspl_db);
    m.def("channel_state", &channel_state);
    m.def("shannon_capacity_bps", &shannon_capacity_bps);
    m.def("qpsk_ber", &qpsk_ber);

    py::class_<WindowedSample>(m, "WindowedSample")
        .def(py::init<>())
        .def_readwrite("frames", &WindowedSample::frames)
        .def_readwrite("powers", &WindowedSample::powers)
        .def_readwrite("label", &WindowedSample::label)
        .def_readwrite("origin_index", &WindowedSample::origin_index);

    py::class_<SplitFractions>(m, "SplitFractions")
        .def(py::init<>())
        .def_readwrite("train", &SplitFractions::train)
        .def_readwrite("val", &SplitFractions::val)
        .def_readwrite("test", &SplitFractions::test);

    py::class_<SplitDataset>(m, "SplitDataset")
        .def_readwrite("train", &SplitDataset::train)
        .def_readwrite("val", &SplitDataset::val)
        .def_readwrite("test", &SplitDataset::test);

    m.def("window_and_label", &window_and_label);
    m.def("balance", &balance);
    m.def("split", &split);

    py::class_<PriorModel>(m, "PriorModel")
        .def(py::init<>())
        .def_readwrite("mean", &PriorModel::mean)
        .def_readwrite("scale", &PriorModel::scale);

    py::class_<LatentCode>(m, "LatentCode")
        .def_readwrite("quantized", &LatentCode::quantized)
        .def_readwrite("bitstream", &LatentCode::bitstream)
        .def_readwrite("bit_length", &LatentCode::bit_length)
        .def_readwrite("frame_w", &LatentCode::frame_w)
        .def_readwrite("frame_h", &LatentCode::frame_h)
        .def_readwrite("frame_c", &LatentCode::frame_c);

    py::class_<RdReport>(m, "RdReport")
        .def_readonly("distortion_mse", &RdReport::distortion_mse)
        .def_readonly("rate_bits", &RdReport::rate_bits)
        .def_readonly("lambda_", &RdReport::lambda)
        .def_readonly("compression_ratio", &RdReport::compression_ratio)
        .def("objective", &RdReport::objective)
        .def("bandwidth_reduction", &RdReport::bandwidth_reduction);

    m.def("discrete_prob", &discrete_prob);
    m.def("ideal_entropy_bits", &ideal_entropy_bits);
    m.def("encode", &encode);
    m.def("decode", &decode, py::arg("code"), py::arg("prior"), py::arg("gamma"),
          py::arg("seed") = 0);
    m.def("rd_report", &rd_report, py::arg("frame"), py::arg("prior"),
          py::arg("gamma"), py::arg("lambda"), py::arg("seed") = 0);
    m.def("fit_prior", &fit_prior);

    py::class_<FeatureVector>(m, "FeatureVector")
        .def_readwrite("values", &FeatureVector::values);

    py::class_<FeatureExtractor>(m, "FeatureExtractor")
        .def_static("identity", &FeatureExtractor::identity)
        .def_static("fit", &FeatureExtractor::fit)
        .def("extract", &FeatureExtractor::extract);

    py::class_<LogisticModel>(m, "LogisticModel")
        .def(py::init<>())
        .def_readwrite("weights", &LogisticModel::weights)
        .def_readwrite("bias", &LogisticModel::bias)
        .def_readwrite("threshold", &LogisticModel::threshold)
        .def("probability", &LogisticModel::probability);

    m.def(
        "train_logistic",
        [](const SplitDataset& ds, const FeatureExtractor& fe, int epochs,
           double lr) {
            std::vector<double> curve;
            LogisticModel model = train_logistic(ds, fe, epochs, lr, &curve);
            return py::make_tuple(model, curve);
        },
        py::arg("dataset"), py::arg("extractor"), py::arg("epochs"),
        py::arg("learning_rate"));
    m.def("save_model", &save_model);
    m.def("load_model", &load_model);

    py::class_<Prediction>(m, "Prediction")
        .def_readonly("probability", &Prediction::probability)
        .def_readonly("decision", &Prediction::decision);

    py::class_<BlockagePredictor, std::shared_ptr<BlockagePredictor>>(
        m, "BlockagePredictor")
        .def("predict", &BlockagePredictor::predict);
    py::class_<OraclePredictor, BlockagePredictor,
               std::shared_ptr<OraclePredictor>>(m, "OraclePredictor")
        .def(py::init<>());
    py::class_<ConfusionPredictorConfig>(m, "ConfusionPredictorConfig")
        .def(py::init<>())
        .def_readwrite("true_positive_rate", &ConfusionPredictorConfig::true_positive_rate)
        .def_readwrite("true_negative_rate", &ConfusionPredictorConfig::true_negative_rate)
        .def_readwrite("seed", &ConfusionPredictorConfig::seed);
    py::class_<ConfusionPredictor, BlockagePredictor,
               std::shared_ptr<ConfusionPredictor>>(m, "ConfusionPredictor")
        .def(py::init<const ConfusionPredictorConfig&>());
    py::class_<LogisticPredictor, BlockagePredictor,
               std::shared_ptr<LogisticPredictor>>(m, "LogisticPredictor")
        .def(py::init<LogisticModel, FeatureExtractor>());

    py::class_<EvalMetrics>(m, "EvalMetrics")
        .def_readonly("accuracy", &EvalMetrics::accuracy)
        .def_readonly("tpr", &EvalMetrics::tpr)
        .def_readonly("tnr", &EvalMetrics::tnr)
        .def_readonly("cross_entropy", &EvalMetrics::cross_entropy);

    m.def("evaluate", &evaluate);

    py::enum_<PolicyMode>(m, "PolicyMode")
        .value("MMWAVE_ONLY", PolicyMode::MMWAVE_ONLY)
        .value("SUB6_ONLY", PolicyMode::SUB6_ONLY)
        .value("SWITCHING", PolicyMode::SWITCHING);

    py::class_<PolicyConfig>(m, "PolicyConfig")
        .def(py::init<>())
        .def_readwrite("mode", &PolicyConfig::mode)
        .def_readwrite("predictor", &PolicyConfig::predictor)
        .def_readwrite("gamma", &PolicyConfig::gamma)
        .def_readwrite("lambda_", &PolicyConfig::lambda)
        .def_readwrite("window_r", &PolicyConfig::window_r)
        .def_readwrite("decision_horizon", &PolicyConfig::decision_horizon)
        .def_readwrite("decode_seed", &PolicyConfig::decode_seed);

    py::class_<StepMetrics>(m, "StepMetrics")
        .def_readonly("step", &StepMetrics::step)
        .def_readonly("band", &StepMetrics::band)
        .def_readonly("blocked", &StepMetrics::blocked)
        .def_readonly("predicted", &StepMetrics::predicted)
        .def_readonly("snr_db", &StepMetrics::snr_db)
        .def_readonly("throughput_bps", &StepMetrics::throughput_bps)
        .def_readonly("cumulative_bits", &StepMetrics::cumulative_bits)
        .def_readonly("ber", &StepMetrics::ber)
        .def_readonly("fog_bits", &StepMetrics::fog_bits);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("steps", &RunReport::steps)
        .def_readonly("cumulative_bits", &RunReport::cumulative_bits)
        .def_readonly("mean_ber", &RunReport::mean_ber)
        .def_readonly("prediction_accuracy", &RunReport::prediction_accuracy)
        .def_readonly("total_fog_bits", &RunReport::total_fog_bits)
        .def_readonly("bandwidth_reduction", &RunReport::bandwidth_reduction);

    m.def("run", &run, py::arg("trace"), py::arg("mmwave"), py::arg("sub6"),
          py::arg("policy"), py::arg("step_duration_s") = kDefaultStepDurationS,
          py::arg("distance_m") = 10.6);
    m.def("report_to_csv", &report_to_csv);
    m.def("report_to_json", &report_to_json);
}
