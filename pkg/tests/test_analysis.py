import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenrnn.analysis import (
    CurveBundle,
    average_curves,
    decay_bound,
    direct_recurrence,
    hidden_scatter,
    iir_decompose,
    iir_reconstruct,
    non_increasing_windows,
    recurrent_spectrum,
    write_average_csv,
    write_spectrum_csv,
)
from eigenrnn.data import LabeledSequenceSet, Task, mackey_glass, tomita_dataset
from eigenrnn.errors import ConfigurationError, DecompositionError, DimensionError
from eigenrnn.initializers import parse_kind
from eigenrnn.linalg import Rng
from eigenrnn.nets import AdamConfig, TrainConfig, forward, make_params, train, zero_params

from oracles import linear_recurrence_loop


def stable_system(seed, n=None, d=None, t=None):
    rng = Rng(seed)
    n = n or 1 + int(rng.integers(8))
    d = d or 1 + int(rng.integers(3))
    t = t or 1 + int(rng.integers(50))
    w_h = rng.normal((n, n))
    w_h *= rng.uniform(0.1, 0.99) / np.abs(np.linalg.eigvals(w_h)).max()
    return w_h, rng.normal((n, d)), rng.normal((t, d))


# -- spectra ----------------------------------------------------------------


def test_eigen_initialized_tanh_spectrum():
    p = make_params("tanh", 2, 12, 2, Rng(0), recurrent_init=parse_kind("eigen0.95"))
    snap = recurrent_spectrum(p)
    assert np.allclose(snap.spectra["h"].moduli, 0.95, atol=1e-9)
    assert snap.max_modulus() == pytest.approx(0.95, abs=1e-9)


def test_lstm_has_four_named_spectra():
    snap = recurrent_spectrum(make_params("lstm", 2, 5, 2, Rng(0)))
    assert list(snap.spectra) == ["i", "f", "g", "o"]
    assert list(recurrent_spectrum(make_params("gru", 2, 5, 2, Rng(0))).spectra) == ["r", "z", "n"]


def test_top_unique_and_csv(tmp_path):
    p = make_params("tanh", 2, 16, 2, Rng(3), recurrent_init=parse_kind("xavier_normal"))
    snap = recurrent_spectrum(p, epoch=4)
    top = snap.top_unique(10)["h"]
    # one entry per real eigenvalue or conjugate pair
    values = np.linalg.eigvals(p.recurrent["h"])
    distinct = np.sum(values.imag >= 0)
    assert len(top) == min(10, distinct)
    assert top == sorted(top, reverse=True)
    assert top[0] == pytest.approx(np.abs(values).max(), abs=1e-10)
    write_spectrum_csv([snap], tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "epoch,block,rank,modulus"
    assert len(lines) == 17 and lines[1].startswith("4,h,1,")


# -- IIR equivalence --------------------------------------------------------


def test_zero_transition_is_memoryless():
    rng = Rng(1)
    w_x = rng.normal((3, 2))
    x = rng.normal((6, 2))
    h = iir_reconstruct(np.zeros((3, 3)), w_x, x)
    assert np.allclose(h, x @ w_x.T, atol=1e-14)


def test_diagonal_impulse_response():
    x = np.zeros((8, 2))
    x[0] = 1.0
    h = iir_reconstruct(np.diag([0.5, 0.25]), np.eye(2), x)
    t = np.arange(8)
    assert np.allclose(h[:, 0], 0.5**t, atol=1e-15)
    assert np.allclose(h[:, 1], 0.25**t, atol=1e-15)


def test_random_4x4_matches_linear_rnn_forward():
    w_h, w_x, x = stable_system(99, n=4, d=2, t=20)
    p = zero_params("linear", 2, 4, 1)
    p.recurrent["h"][...] = w_h
    p.inputs["h"][...] = w_x
    rnn = forward(p, x).hidden[:, 0, :]
    assert np.max(np.abs(iir_reconstruct(w_h, w_x, x) - rnn)) <= 1e-8


def test_direct_recurrence_matches_scalar_loop():
    w_h, w_x, x = stable_system(4)
    assert np.allclose(direct_recurrence(w_h, w_x, x), linear_recurrence_loop(w_h, w_x, x), atol=1e-12)


@given(st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_iir_matches_direct_recurrence(seed):
    w_h, w_x, x = stable_system(seed)
    assert np.max(np.abs(iir_reconstruct(w_h, w_x, x) - direct_recurrence(w_h, w_x, x))) <= 1e-8


def test_modes_obey_first_order_filters():
    w_h, w_x, x = stable_system(12, n=5, d=2, t=15)
    dec = iir_decompose(w_h, w_x, x)
    prev = np.zeros_like(dec.modes[0])
    for t in range(len(x)):
        assert np.allclose(dec.modes[t], dec.eigenvalues * prev + dec.drive[t], atol=1e-12)
        prev = dec.modes[t]


def test_batched_inputs_and_steps():
    w_h, w_x, _ = stable_system(2, n=3, d=2)
    x = Rng(5).normal((10, 4, 2))
    h = iir_reconstruct(w_h, w_x, x, steps=6)
    assert h.shape == (6, 4, 3)
    assert np.allclose(h, direct_recurrence(w_h, w_x, x)[:6], atol=1e-10)


def test_defective_transition_rejected():
    with pytest.raises(DecompositionError):
        iir_reconstruct(np.array([[0.5, 1.0], [0.0, 0.5]]), np.eye(2), np.ones((3, 2)))


def test_shape_mismatch_rejected():
    with pytest.raises(DimensionError):
        iir_reconstruct(np.eye(3), np.ones((2, 2)), np.ones((3, 2)))


@given(st.integers(0, 2**31), st.integers(1, 30))
@settings(max_examples=40, deadline=None)
def test_zero_input_decay_bound(seed, steps):
    w_h, _, _ = stable_system(seed)
    n = w_h.shape[0]
    h_start = Rng(seed + 1).normal(n)
    h = h_start.copy()
    for _ in range(steps):
        h = w_h @ h
    assert np.linalg.norm(h) <= decay_bound(w_h, h_start, steps) * (1 + 1e-9) + 1e-12


# -- scatter ----------------------------------------------------------------


def test_zero_model_scatter_at_origin():
    data = tomita_dataset(4, 6, 10, Rng(0))
    sc = hidden_scatter(zero_params("tanh", 2, 5, 2), data)
    assert np.array_equal(sc.points, np.zeros_like(sc.points))
    assert len(sc.points) == data.lengths.sum()


def test_scatter_point_count_cap_and_labels(tmp_path):
    data = tomita_dataset(4, 6, 30, Rng(0))
    p = make_params("lstm", 2, 6, 2, Rng(1))
    sc = hidden_scatter(p, data, sample_cap=20, seed=3)
    again = hidden_scatter(p, data, sample_cap=20, seed=3)
    assert np.array_equal(sc.points, again.points)
    assert 20 <= len(sc.points) <= 20 * 6
    assert set(np.unique(sc.labels)) <= {0, 1}
    sc.to_csv(tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "pc1,pc2,label" and len(lines) == len(sc.points) + 1


def test_regression_scatter_labels():
    sc = hidden_scatter(make_params("gru", 1, 4, 1, Rng(0)), mackey_glass(200, window=20))
    assert np.all(sc.labels == -1)
    assert np.all(np.diff(sc.variances) <= 0)


def test_scatter_rejects_empty_cap():
    data = tomita_dataset(4, 4, 5, Rng(0))
    with pytest.raises(ConfigurationError):
        hidden_scatter(make_params("tanh", 2, 3, 2, Rng(0)), data, sample_cap=0)


def _short_training(init, epochs):
    data = tomita_dataset(4, 10, 100, Rng(0))
    model = make_params("tanh", 2, 16, 2, Rng(1), recurrent_init=parse_kind(init))
    cfg = TrainConfig(adam=AdamConfig(lr=1e-2), epochs=epochs, batch_size=32, seed=0)
    return data, model, train(model, data, cfg)


def test_trained_states_move_away_from_origin():
    data, model, report = _short_training("default", 15)
    before = hidden_scatter(model, data)
    after = hidden_scatter(report.params, data)
    assert after.mean_radius > before.mean_radius


@pytest.mark.parametrize("seed", [1, 2])
def test_eigen_init_spreads_scanline_states_more_after_one_epoch(seed):
    mlxtend = pytest.importorskip("mlxtend.data")
    x, y = mlxtend.mnist_data()
    data = LabeledSequenceSet(list(x[:300].reshape(-1, 28, 28) / 255.0), [int(v) for v in y[:300]], Task.TEN_CLASS)
    cfg = TrainConfig(adam=AdamConfig(lr=1e-4), epochs=1, batch_size=16, seed=seed)
    variance = {}
    for init in ("eigen0.95", "default"):
        model = make_params("tanh", 28, 150, 10, Rng(seed).spawn(0), recurrent_init=parse_kind(init))
        variance[init] = hidden_scatter(train(model, data, cfg).params, data).total_variance
    assert variance["eigen0.95"] > variance["default"]


# -- curves -----------------------------------------------------------------


def test_single_seed_average():
    mean, std = average_curves(CurveBundle([[3.0, 2.0, 1.0]]))
    assert mean.tolist() == [3.0, 2.0, 1.0] and std.tolist() == [0.0, 0.0, 0.0]


def test_two_point_population_std():
    mean, std = average_curves(CurveBundle([[1.0], [3.0]]))
    assert mean.tolist() == [2.0] and std.tolist() == [1.0]


def test_ragged_and_empty_bundles():
    with pytest.raises(DimensionError):
        CurveBundle([[1.0, 2.0], [1.0]])
    with pytest.raises(ConfigurationError):
        CurveBundle([])


def test_average_matches_scalar_loop(tmp_path):
    rng = Rng(8)
    series = [rng.uniform(0, 1, 30).tolist() for _ in range(20)]
    mean, std = average_curves(CurveBundle(series))
    for t in range(30):
        col = [s[t] for s in series]
        m = sum(col) / len(col)
        v = sum((c - m) ** 2 for c in col) / len(col)
        assert abs(mean[t] - m) <= 1e-12 and abs(std[t] - v**0.5) <= 1e-12
    write_average_csv(mean, std, mean, std, tmp_path / "a.csv")
    assert (tmp_path / "a.csv").read_text().startswith("epoch,loss_mean,loss_std,accuracy_mean,accuracy_std\n1,")


def test_non_increasing_windows():
    assert non_increasing_windows(np.linspace(1, 0, 30), 10)
    bumpy = np.linspace(1, 0, 30)
    bumpy[20] = 2.0
    assert not non_increasing_windows(bumpy, 10)
    # a short bump that recovers within the window is allowed
    wiggle = np.linspace(1, 0, 30)
    wiggle[5] += 0.01
    assert non_increasing_windows(wiggle, 10)
