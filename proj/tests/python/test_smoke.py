"""End-to-end smoke checks for the _core extension module."""

import pytest

try:
    from dualband import _core
except ImportError:  # build-tree runs put the extension on PYTHONPATH directly
    import _core


@pytest.fixture(scope="module")
def trace():
    cfg = _core.ScenarioConfig()
    cfg.num_steps = 60
    cfg.blocker_crossings = 5
    cfg.seed = 3
    return _core.generate_trace(cfg)


def test_trace_shape(trace):
    assert len(trace.blocked) == 60
    assert len(trace.frames) == 60
    assert sum(trace.blocked) > 0
    f = trace.frames[0]
    assert (f.width, f.height, f.channels) == (32, 32, 3)
    assert all(0.0 <= v <= 1.0 for v in f.samples)


def test_link_math():
    assert _core.fspl_db(10.6, 28e9) == pytest.approx(81.90, abs=0.02)
    mm = _core.mmwave_default()
    assert _core.shannon_capacity_bps(mm, 0.0) == mm.bandwidth_hz
    assert _core.qpsk_ber(10.0) == pytest.approx(7.827e-4, abs=1e-5)
    with pytest.raises(ValueError):
        _core.fspl_db(-1.0, 28e9)


def test_codec_round_trip(trace):
    prior = _core.fit_prior(trace.frames)
    code = _core.encode(trace.frames[0], prior)
    assert code.bit_length == 8 * len(code.bitstream)
    out = _core.decode(code, prior, 0.0, 0)
    n = len(trace.frames[0].samples)
    mse = sum((a - b) ** 2 for a, b in zip(out.samples, trace.frames[0].samples)) / n
    assert mse <= 0.01
    assert code.bit_length < 8 * n / 2


def test_dataset_and_training(trace):
    samples = _core.window_and_label(trace, 5, 5)
    balanced = _core.balance(samples, 1)
    ds = _core.split(balanced, _core.SplitFractions(), 1)
    fe = _core.FeatureExtractor.fit(ds.train)
    model, curve = _core.train_logistic(ds, fe, 50, 0.1)
    assert len(curve) == 51
    assert curve[-1] <= curve[0]
    pred = _core.LogisticPredictor(model, fe)
    metrics = _core.evaluate(pred, ds.train)
    assert 0.0 <= metrics.accuracy <= 1.0


def test_simulator_run(trace):
    policy = _core.PolicyConfig()
    policy.mode = _core.PolicyMode.SWITCHING
    policy.predictor = _core.OraclePredictor()
    rep = _core.run(trace, _core.mmwave_default(), _core.sub6_default(), policy)
    assert len(rep.steps) == 60
    assert rep.cumulative_bits > 0
    baseline = _core.PolicyConfig()
    rep_mm = _core.run(trace, _core.mmwave_default(), _core.sub6_default(), baseline)
    assert rep.cumulative_bits >= rep_mm.cumulative_bits
    csv = _core.report_to_csv(rep)
    assert csv.startswith("step,band,blocked,predicted,")
