import gzip
import math
import struct
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenrnn.data import (
    LabeledSequenceSet,
    MackeyGlassParams,
    Task,
    decode,
    encode,
    integrate,
    load_mnist_idx,
    mackey_glass,
    parse_idx_images,
    parse_idx_labels,
    to_idx,
    tomita_dataset,
    tomita_membership,
)
from eigenrnn.data.mnist import images_to_idx, labels_to_idx
from eigenrnn.errors import ConfigurationError, DimensionError, FormatError, GenerationError
from eigenrnn.linalg import Rng

from oracles import all_binary_strings, mackey_euler_reference, tomita_regex

# -- Tomita -----------------------------------------------------------------


def test_grammar4_examples():
    assert tomita_membership(4, "11011")
    assert not tomita_membership(4, "10001")
    assert tomita_membership(4, "")


@pytest.mark.parametrize("grammar", range(1, 8))
def test_membership_matches_regex_oracle(grammar):
    counts = Counter()
    for s in all_binary_strings(10):
        got = tomita_membership(grammar, s)
        assert got == tomita_regex(grammar, s), s
        counts[got] += 1
    assert counts[True] > 0 and counts[False] > 0


def test_grammar4_accept_counts_follow_tribonacci():
    # strings without 000 of length L satisfy a(L) = a(L-1) + a(L-2) + a(L-3)
    expect = [1, 2, 4]
    while len(expect) <= 10:
        expect.append(expect[-1] + expect[-2] + expect[-3])
    for length in range(11):
        got = sum(tomita_membership(4, s) for s in all_binary_strings(length, length))
        assert got == expect[length]


def test_membership_errors():
    with pytest.raises(ConfigurationError):
        tomita_membership(8, "01")
    with pytest.raises(ConfigurationError):
        tomita_membership(4, "012")


def test_encode_decode():
    x = encode("0110")
    assert x.tolist() == [[1, 0], [0, 1], [0, 1], [1, 0]]
    assert decode(x) == "0110"


def test_dataset_balanced_and_labelled():
    data = tomita_dataset(4, 12, 50, Rng(0))
    assert len(data) == 100
    assert Counter(data.labels.tolist()) == {0: 50, 1: 50}
    for x, y in zip(data.inputs, data.targets):
        assert tomita_membership(4, decode(x)) == bool(y)
        assert 1 <= len(x) <= 12


def test_dataset_deterministic():
    a = tomita_dataset(4, 10, 30, Rng(5))
    b = tomita_dataset(4, 10, 30, Rng(5))
    assert all(np.array_equal(x, y) for x, y in zip(a.inputs, b.inputs))
    assert a.targets == b.targets


@pytest.mark.parametrize("grammar", range(1, 8))
def test_dataset_labels_for_every_grammar(grammar):
    data = tomita_dataset(grammar, 8, 20, Rng(grammar))
    for x, y in zip(data.inputs, data.targets):
        assert tomita_regex(grammar, decode(x)) == bool(y)


def test_unreachable_class_named():
    # every string of length 1 or 2 avoids "000"
    with pytest.raises(GenerationError, match="rejected"):
        tomita_dataset(4, 2, 5, Rng(0), budget=2000)
    with pytest.raises(ConfigurationError):
        tomita_dataset(4, 5, 0, Rng(0))


def test_rejected_lengths_follow_exhaustive_proportions():
    # rejected draws are kept until their quota fills, so their lengths follow
    # P(L | rejected), proportional to the exhaustive reject fraction at L
    data = tomita_dataset(4, 8, 2000, Rng(2))
    accepted = data.lengths[data.labels == 1]
    assert accepted.min() == 1 and accepted.max() == 8
    rejected = data.lengths[data.labels == 0]
    frac = np.array(
        [1 - sum(tomita_membership(4, s) for s in all_binary_strings(L, L)) / 2**L for L in range(1, 9)]
    )
    expected = frac / frac.sum()
    observed = np.bincount(rejected, minlength=9)[1:] / len(rejected)
    sigma = np.sqrt(expected * (1 - expected) / len(rejected))
    assert np.all(np.abs(observed - expected) <= 4 * sigma + 1e-12)


# -- sequence container -----------------------------------------------------


def test_set_validation():
    with pytest.raises(ConfigurationError):
        LabeledSequenceSet([], [], Task.REGRESSION)
    with pytest.raises(ConfigurationError):
        LabeledSequenceSet([np.zeros((2, 2))], [2], Task.BINARY_ACCEPT)
    with pytest.raises(DimensionError):
        LabeledSequenceSet([np.zeros((2, 2)), np.zeros((2, 3))], [0, 1], Task.BINARY_ACCEPT)


def test_batches_bucket_by_length_and_cover_all():
    data = tomita_dataset(4, 6, 40, Rng(1))
    seen = []
    for idx, x, y in data.batches(16, Rng(3)):
        assert x.shape[1] == len(idx) == len(y) <= 16
        assert len({len(data.inputs[i]) for i in idx}) == 1
        assert x.shape[0] == len(data.inputs[idx[0]])
        seen.extend(idx.tolist())
    assert sorted(seen) == list(range(len(data)))


def test_dataset_csv(tmp_path):
    data = tomita_dataset(4, 5, 3, Rng(0))
    data.to_csv(tmp_path / "d.csv")
    lines = (tmp_path / "d.csv").read_text().splitlines()
    assert lines[0] == "index,label,len"
    assert len(lines) == 7


# -- Mackey-Glass -----------------------------------------------------------


def test_pure_decay_matches_exponential():
    p = MackeyGlassParams(beta=0.0)
    x = integrate(100, p)
    t = np.arange(100)
    assert np.max(np.abs(x - 1.2 * np.exp(-0.1 * t))) < 1e-6


def test_standard_series_range_and_reference():
    x = integrate(1000)
    assert np.all(np.isfinite(x))
    assert x.min() >= 0.2 and x.max() <= 1.6
    ref = mackey_euler_reference(150, substeps=400)
    # the fine-step Euler reference is first order; agreement over the early transient
    assert np.max(np.abs(x[:150] - ref)) < 5e-3


def test_series_deterministic_and_standardized():
    a = mackey_glass(600)
    b = mackey_glass(600)
    assert np.array_equal(a.inputs[0], b.inputs[0])
    z = np.concatenate([a.inputs[0][:, 0], a.targets[0][-1:, 0]])
    assert abs(z.mean()) < 1e-12 and abs(z.std() - 1) < 1e-12
    assert np.array_equal(a.inputs[0][1:], a.targets[0][:-1])


def test_series_not_periodic_or_constant():
    z = mackey_glass(2000).inputs[0][:, 0]
    lag1 = np.corrcoef(z[:-1], z[1:])[0, 1]
    assert lag1 < 1
    assert z.std() > 0


def test_windows():
    data = mackey_glass(101, window=25)
    assert len(data) == 4
    assert all(x.shape == (25, 1) for x in data.inputs)
    with pytest.raises(ConfigurationError):
        mackey_glass(10, window=50)
    with pytest.raises(ConfigurationError):
        integrate(1)


# -- MNIST IDX --------------------------------------------------------------


def _write(tmp_path, images_blob, labels_blob, gz=False):
    ip, lp = tmp_path / "img", tmp_path / "lab"
    if gz:
        ip, lp = ip.with_suffix(".gz"), lp.with_suffix(".gz")
        ip.write_bytes(gzip.compress(images_blob))
        lp.write_bytes(gzip.compress(labels_blob))
    else:
        ip.write_bytes(images_blob)
        lp.write_bytes(labels_blob)
    return ip, lp


def test_handcrafted_blob(tmp_path):
    img = struct.pack(">IIII", 0x803, 1, 2, 2) + bytes([0, 255, 128, 64])
    lab = struct.pack(">II", 0x801, 1) + bytes([7])
    data = load_mnist_idx(*_write(tmp_path, img, lab))
    x = data.inputs[0]
    assert x.shape == (2, 2)
    assert x[0].tolist() == [0.0, 1.0]
    assert np.allclose(x[1], [0.502, 0.251], atol=5e-4)
    assert data.targets == [7]


def test_gzip_files(tmp_path):
    img = images_to_idx(np.zeros((2, 3, 3)))
    lab = labels_to_idx([1, 2])
    assert len(load_mnist_idx(*_write(tmp_path, img, lab, gz=True))) == 2


def test_bad_magic_and_truncation():
    with pytest.raises(FormatError, match="offset 0"):
        parse_idx_labels(struct.pack(">II", 0x803, 1) + b"\x00")
    with pytest.raises(FormatError, match="offset 0"):
        parse_idx_images(struct.pack(">IIII", 0x801, 1, 1, 1) + b"\x00")
    with pytest.raises(FormatError, match="offset 17"):
        parse_idx_images(struct.pack(">IIII", 0x803, 1, 2, 2) + b"\x00")
    with pytest.raises(FormatError):
        parse_idx_labels(b"\x00\x00")
    with pytest.raises(FormatError, match="offset 9"):
        parse_idx_labels(struct.pack(">II", 0x801, 2) + bytes([1, 12]))


def test_count_mismatch(tmp_path):
    img = images_to_idx(np.zeros((3, 2, 2)))
    lab = labels_to_idx([0, 1])
    with pytest.raises(FormatError, match="count mismatch"):
        load_mnist_idx(*_write(tmp_path, img, lab))


@given(st.integers(0, 2**31), st.integers(1, 6), st.integers(1, 5), st.integers(1, 5))
@settings(max_examples=30, deadline=None)
def test_idx_round_trip(seed, count, rows, cols):
    rng = Rng(seed)
    images = rng.integers(256, (count, rows, cols)).astype(np.uint8)
    labels = rng.integers(10, count).astype(np.uint8)
    img_blob, lab_blob = images_to_idx(images), labels_to_idx(labels)
    data = LabeledSequenceSet(
        list(parse_idx_images(img_blob) / 255.0), [int(v) for v in parse_idx_labels(lab_blob)], Task.TEN_CLASS
    )
    assert to_idx(data) == (img_blob, lab_blob)


def test_real_scanline_subset(tmp_path):
    mlxtend = pytest.importorskip("mlxtend.data")
    x, y = mlxtend.mnist_data()
    img = images_to_idx(x[:50].reshape(-1, 28, 28))
    lab = labels_to_idx(y[:50])
    data = load_mnist_idx(*_write(tmp_path, img, lab))
    assert data.inputs[0].shape == (28, 28)
    assert 0.0 <= min(s.min() for s in data.inputs) and max(s.max() for s in data.inputs) <= 1.0
    assert to_idx(data) == (img, lab)
    assert math.isclose(data.inputs[0].sum() * 255, x[0].sum())
