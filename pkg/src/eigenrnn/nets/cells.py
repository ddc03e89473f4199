"""Recurrent cells: parameters, forward pass and exact backpropagation through time.

All cells use the column-vector convention for weights, so the recurrent
block ``W`` of a vanilla RNN is the transition matrix in
``h_t = phi(W h_{t-1} + U x_t + b)``; with batch rows this is computed as
``h @ W.T``. Gate equations:

LSTM (gates i, f, g, o)::

    i, f, o = sigmoid(W_k h + U_k x + b_k),  g = tanh(W_g h + U_g x + b_g)
    c_t = f * c_{t-1} + i * g,               h_t = o * tanh(c_t)

GRU (gates r, z, n; reset applied to the recurrent term of the candidate)::

    r, z = sigmoid(W_k h + U_k x + b_k)
    n = tanh(U_n x + b_n + r * (W_n h))
    h_t = (1 - z) * n + z * h_{t-1}

A linear readout ``y_t = W_y h_t + b_y`` is applied at every step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, DimensionError, NumericError
from ..initializers import InitializerKind, Scheme, init_dense
from ..linalg import Rng, sigmoid


class CellKind(enum.Enum):
    LINEAR = "linear"
    TANH = "tanh"
    RELU = "relu"
    LSTM = "lstm"
    GRU = "gru"

    @classmethod
    def parse(cls, name) -> "CellKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-rnn", "").replace("_rnn", "")
        try:
            return cls(key)
        except ValueError:
            raise ConfigurationError(f"unknown cell kind {name!r}") from None

    @property
    def gates(self) -> tuple[str, ...]:
        if self is CellKind.LSTM:
            return ("i", "f", "g", "o")
        if self is CellKind.GRU:
            return ("r", "z", "n")
        return ("h",)

    @property
    def is_vanilla(self) -> bool:
        return self in (CellKind.LINEAR, CellKind.TANH, CellKind.RELU)


@dataclass
class CellParams:
    """Weights of one recurrent layer plus its linear readout.

    ``recurrent[g]`` is ``n x n``, ``inputs[g]`` is ``n x input_size`` and
    ``biases[g]`` has length ``n`` for every gate ``g`` of the cell kind.
    """

    kind: CellKind
    input_size: int
    hidden_size: int
    output_size: int
    recurrent: dict[str, np.ndarray]
    inputs: dict[str, np.ndarray]
    biases: dict[str, np.ndarray]
    readout_w: np.ndarray
    readout_b: np.ndarray

    def __post_init__(self):
        self.validate()

    def validate(self):
        n, d = self.hidden_size, self.input_size
        for g in self.kind.gates:
            for table, shape in ((self.recurrent, (n, n)), (self.inputs, (n, d)), (self.biases, (n,))):
                if g not in table:
                    raise DimensionError(f"{self.kind.value} cell is missing block {g!r}")
                if table[g].shape != shape:
                    raise DimensionError(f"block {g!r} has shape {table[g].shape}, expected {shape}")
        if self.readout_w.shape != (self.output_size, n) or self.readout_b.shape != (self.output_size,):
            raise DimensionError("readout shape does not match hidden/output sizes")
        for name, arr in self.arrays().items():
            if not np.all(np.isfinite(arr)):
                raise NumericError(f"parameter {name} has non-finite entries")

    def arrays(self) -> dict[str, np.ndarray]:
        """Every trainable array, keyed ``recurrent.<g>``, ``input.<g>``, ``bias.<g>``, ``readout.w``, ``readout.b``.

        The values are the live arrays, so in-place updates change the model.
        """
        out = {}
        for g in self.kind.gates:
            out[f"recurrent.{g}"] = self.recurrent[g]
            out[f"input.{g}"] = self.inputs[g]
            out[f"bias.{g}"] = self.biases[g]
        out["readout.w"] = self.readout_w
        out["readout.b"] = self.readout_b
        return out

    @classmethod
    def from_arrays(cls, kind, arrays: dict[str, np.ndarray]) -> "CellParams":
        kind = CellKind.parse(kind)
        g0 = kind.gates[0]
        n, d = arrays[f"input.{g0}"].shape
        return cls(
            kind=kind,
            input_size=d,
            hidden_size=n,
            output_size=arrays["readout.w"].shape[0],
            recurrent={g: np.array(arrays[f"recurrent.{g}"], dtype=float) for g in kind.gates},
            inputs={g: np.array(arrays[f"input.{g}"], dtype=float) for g in kind.gates},
            biases={g: np.array(arrays[f"bias.{g}"], dtype=float) for g in kind.gates},
            readout_w=np.array(arrays["readout.w"], dtype=float),
            readout_b=np.array(arrays["readout.b"], dtype=float),
        )

    def copy(self) -> "CellParams":
        return CellParams.from_arrays(self.kind, self.arrays())

    def recurrent_blocks(self) -> dict[str, np.ndarray]:
        return dict(self.recurrent)


def make_params(
    kind,
    input_size: int,
    hidden_size: int,
    output_size: int,
    rng: Rng,
    recurrent_init: InitializerKind | None = None,
    input_init: InitializerKind | None = None,
    forget_bias: float = 0.0,
) -> CellParams:
    """Fresh parameters for a cell.

    Each recurrent gate block gets an independent draw from
    ``recurrent_init`` (default uniform when omitted). Input blocks and the
    readout use ``input_init`` (default uniform), biases start at zero,
    except the LSTM forget gate which starts at ``forget_bias``.
    """
    kind = CellKind.parse(kind)
    recurrent_init = recurrent_init or InitializerKind(Scheme.DEFAULT_UNIFORM)
    input_init = input_init or InitializerKind(Scheme.DEFAULT_UNIFORM)
    n = hidden_size
    recurrent, inputs, biases = {}, {}, {}
    # draw order is fixed: recurrent blocks, input blocks, readout
    for g in kind.gates:
        recurrent[g] = init_dense(recurrent_init, n, n, rng)
    for g in kind.gates:
        inputs[g] = init_dense(input_init, n, input_size, rng)
        biases[g] = np.zeros(n)
    if kind is CellKind.LSTM:
        biases["f"][:] = forget_bias
    readout_w = init_dense(input_init, output_size, n, rng)
    return CellParams(kind, input_size, n, output_size, recurrent, inputs, biases, readout_w, np.zeros(output_size))


def zero_params(kind, input_size: int, hidden_size: int, output_size: int) -> CellParams:
    kind = CellKind.parse(kind)
    n = hidden_size
    return CellParams(
        kind,
        input_size,
        n,
        output_size,
        {g: np.zeros((n, n)) for g in kind.gates},
        {g: np.zeros((n, input_size)) for g in kind.gates},
        {g: np.zeros(n) for g in kind.gates},
        np.zeros((output_size, n)),
        np.zeros(output_size),
    )


@dataclass
class TrajectoryRecord:
    """Hidden states ``(T, B, n)`` and readouts ``(T, B, output_size)`` of a forward pass."""

    hidden: np.ndarray
    outputs: np.ndarray
    h0: np.ndarray
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def final(self) -> np.ndarray:
        """Readout at the last step, ``(B, output_size)``."""
        return self.outputs[-1]


def _check_sequence(params: CellParams, sequence) -> np.ndarray:
    x = np.asarray(sequence, dtype=np.float64)
    if x.ndim == 2:
        x = x[:, None, :]
    if x.ndim != 3 or x.shape[2] != params.input_size:
        raise DimensionError(
            f"sequence must be (T, B, {params.input_size}), got {np.shape(sequence)}"
        )
    if x.shape[0] == 0:
        raise DimensionError("sequence has no timesteps")
    return x


def forward(params: CellParams, sequence, h0=None) -> TrajectoryRecord:
    """Run the cell over ``sequence`` (``T x B x input_size``) from ``h0`` (zeros by default)."""
    x = _check_sequence(params, sequence)
    steps, batch, _ = x.shape
    n = params.hidden_size
    if h0 is None:
        h0 = np.zeros((batch, n))
    h0 = np.asarray(h0, dtype=np.float64)
    if h0.shape != (batch, n):
        raise DimensionError(f"h0 must be {(batch, n)}, got {h0.shape}")

    kind = params.kind
    hidden = np.empty((steps, batch, n))
    cache: dict[str, np.ndarray] = {}
    # input projections for all steps at once
    proj = {g: x @ params.inputs[g].T + params.biases[g] for g in kind.gates}
    h = h0
    if kind.is_vanilla:
        w = params.recurrent["h"]
        pre = np.empty_like(hidden)
        for t in range(steps):
            a = proj["h"][t] + h @ w.T
            pre[t] = a
            if kind is CellKind.TANH:
                h = np.tanh(a)
            elif kind is CellKind.RELU:
                h = np.maximum(a, 0.0)
            else:
                h = a
            if not np.all(np.isfinite(h)):
                raise NumericError(f"non-finite hidden state at timestep {t}")
            hidden[t] = h
        cache["pre"] = pre
    elif kind is CellKind.LSTM:
        c = np.zeros((batch, n))
        gates = {g: np.empty_like(hidden) for g in kind.gates}
        cells = np.empty_like(hidden)
        for t in range(steps):
            i = sigmoid(proj["i"][t] + h @ params.recurrent["i"].T)
            f = sigmoid(proj["f"][t] + h @ params.recurrent["f"].T)
            g = np.tanh(proj["g"][t] + h @ params.recurrent["g"].T)
            o = sigmoid(proj["o"][t] + h @ params.recurrent["o"].T)
            c = f * c + i * g
            h = o * np.tanh(c)
            if not np.all(np.isfinite(h)):
                raise NumericError(f"non-finite hidden state at timestep {t}")
            for name, val in zip("ifgo", (i, f, g, o)):
                gates[name][t] = val
            cells[t] = c
            hidden[t] = h
        cache.update(gates)
        cache["cell"] = cells
    else:
        gates = {g: np.empty_like(hidden) for g in kind.gates}
        rec_n = np.empty_like(hidden)
        for t in range(steps):
            r = sigmoid(proj["r"][t] + h @ params.recurrent["r"].T)
            z = sigmoid(proj["z"][t] + h @ params.recurrent["z"].T)
            hn = h @ params.recurrent["n"].T
            cand = np.tanh(proj["n"][t] + r * hn)
            h = (1.0 - z) * cand + z * h
            if not np.all(np.isfinite(h)):
                raise NumericError(f"non-finite hidden state at timestep {t}")
            gates["r"][t], gates["z"][t], gates["n"][t] = r, z, cand
            rec_n[t] = hn
            hidden[t] = h
        cache.update(gates)
        cache["rec_n"] = rec_n

    outputs = hidden @ params.readout_w.T + params.readout_b
    if not np.all(np.isfinite(outputs)):
        raise NumericError("non-finite readout")
    cache["x"] = x
    return TrajectoryRecord(hidden=hidden, outputs=outputs, h0=h0, cache=cache)


def backward_from_outputs(params: CellParams, record: TrajectoryRecord, d_outputs) -> dict[str, np.ndarray]:
    """Gradients of a scalar loss given its gradient w.r.t. every readout ``(T, B, out)``."""
    kind = params.kind
    x = record.cache["x"]
    hidden = record.hidden
    steps = hidden.shape[0]
    d_outputs = np.asarray(d_outputs, dtype=np.float64)

    grads = {name: np.zeros_like(arr) for name, arr in params.arrays().items()}
    grads["readout.w"] = np.einsum("tbo,tbn->on", d_outputs, hidden)
    grads["readout.b"] = d_outputs.sum(axis=(0, 1))
    dh_out = d_outputs @ params.readout_w  # (T, B, n)

    prev = np.concatenate([record.h0[None], hidden[:-1]], axis=0)
    d_pre = {g: np.zeros_like(hidden) for g in kind.gates}
    dh_next = np.zeros_like(record.h0)

    if kind.is_vanilla:
        w = params.recurrent["h"]
        pre = record.cache["pre"]
        for t in range(steps - 1, -1, -1):
            dh = dh_out[t] + dh_next
            if kind is CellKind.TANH:
                da = dh * (1.0 - hidden[t] ** 2)
            elif kind is CellKind.RELU:
                da = dh * (pre[t] > 0.0)
            else:
                da = dh
            d_pre["h"][t] = da
            dh_next = da @ w
    elif kind is CellKind.LSTM:
        i, f, g, o = (record.cache[k] for k in "ifgo")
        cells = record.cache["cell"]
        c_prev = np.concatenate([np.zeros_like(record.h0)[None], cells[:-1]], axis=0)
        dc_next = np.zeros_like(record.h0)
        for t in range(steps - 1, -1, -1):
            dh = dh_out[t] + dh_next
            tc = np.tanh(cells[t])
            do = dh * tc
            dc = dc_next + dh * o[t] * (1.0 - tc ** 2)
            d_pre["i"][t] = dc * g[t] * i[t] * (1.0 - i[t])
            d_pre["f"][t] = dc * c_prev[t] * f[t] * (1.0 - f[t])
            d_pre["g"][t] = dc * i[t] * (1.0 - g[t] ** 2)
            d_pre["o"][t] = do * o[t] * (1.0 - o[t])
            dc_next = dc * f[t]
            dh_next = sum(d_pre[k][t] @ params.recurrent[k] for k in "ifgo")
    else:
        r, z, cand = (record.cache[k] for k in "rzn")
        rec_n = record.cache["rec_n"]
        d_rec_n = np.zeros_like(hidden)
        for t in range(steps - 1, -1, -1):
            dh = dh_out[t] + dh_next
            dn = dh * (1.0 - z[t]) * (1.0 - cand[t] ** 2)
            dz = dh * (prev[t] - cand[t]) * z[t] * (1.0 - z[t])
            dr = dn * rec_n[t] * r[t] * (1.0 - r[t])
            dhn = dn * r[t]
            d_pre["n"][t] = dn
            d_pre["z"][t] = dz
            d_pre["r"][t] = dr
            d_rec_n[t] = dhn
            dh_next = (
                dh * z[t]
                + dhn @ params.recurrent["n"]
                + dr @ params.recurrent["r"]
                + dz @ params.recurrent["z"]
            )
        # the candidate's recurrent weight sees r * (W_n h), not the pre-activation
        grads["recurrent.n"] = np.einsum("tbi,tbj->ij", d_rec_n, prev)

    for g in kind.gates:
        if not (kind is CellKind.GRU and g == "n"):
            grads[f"recurrent.{g}"] = np.einsum("tbi,tbj->ij", d_pre[g], prev)
        grads[f"input.{g}"] = np.einsum("tbi,tbj->ij", d_pre[g], x)
        grads[f"bias.{g}"] = d_pre[g].sum(axis=(0, 1))
    return grads
