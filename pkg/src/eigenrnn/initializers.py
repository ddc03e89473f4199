"""Weight initializers for recurrent networks and their spectrum statistics.

Seven baseline schemes plus the eigen initializer, which builds the
recurrent matrix as ``lam * I`` followed by a chain of random plane
rotations over adjacent coordinates. That product is ``lam`` times an
orthogonal matrix, so every eigenvalue has modulus exactly ``lam``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .linalg import Rng, eigenvalues, symmetric_eigen

DEFAULT_LAMBDA = 0.95


class Scheme(enum.Enum):
    DEFAULT_UNIFORM = "default"
    XAVIER_NORMAL = "xavier_normal"
    XAVIER_UNIFORM = "xavier_uniform"
    KAIMING_NORMAL = "kaiming_normal"
    KAIMING_UNIFORM = "kaiming_uniform"
    IDENTITY = "identity"
    NP_RNN = "np_rnn"
    EIGEN = "eigen"


SQUARE_ONLY = {Scheme.IDENTITY, Scheme.NP_RNN, Scheme.EIGEN}


@dataclass(frozen=True)
class InitializerKind:
    """A scheme plus its parameters.

    ``fan_in``/``fan_out`` are optional overrides; by default they are
    taken from the matrix shape (``fan_in = cols``, ``fan_out = rows``).
    """

    scheme: Scheme
    lam: float = DEFAULT_LAMBDA
    fan_in: int | None = None
    fan_out: int | None = None

    def __post_init__(self):
        if not isinstance(self.scheme, Scheme):
            object.__setattr__(self, "scheme", parse_scheme(self.scheme))
        if self.scheme is Scheme.EIGEN and not 0.0 < self.lam < 1.0:
            raise ConfigurationError(f"eigen initializer needs lambda in (0, 1), got {self.lam}")
        for fan in (self.fan_in, self.fan_out):
            if fan is not None and fan < 1:
                raise ConfigurationError(f"fan counts must be positive, got {fan}")

    @property
    def label(self) -> str:
        if self.scheme is Scheme.EIGEN:
            return f"eigen{self.lam:g}"
        return self.scheme.value


def parse_scheme(name) -> Scheme:
    if isinstance(name, Scheme):
        return name
    key = str(name).strip().lower().replace("-", "_")
    aliases = {"uniform": "default", "default_uniform": "default", "sp_rnn": "np_rnn", "irnn": "identity"}
    key = aliases.get(key, key)
    try:
        return Scheme(key)
    except ValueError:
        raise ConfigurationError(f"unknown initializer {name!r}") from None


def parse_kind(text: str) -> InitializerKind:
    """Parse ``"xavier_normal"``, ``"eigen"`` or ``"eigen0.9"`` style labels."""
    text = text.strip().lower()
    if text.startswith("eigen"):
        rest = text[len("eigen"):].lstrip(":=")
        lam = float(rest) if rest else DEFAULT_LAMBDA
        return InitializerKind(Scheme.EIGEN, lam=lam)
    return InitializerKind(parse_scheme(text))


def init_dense(kind: InitializerKind, rows: int, cols: int, rng: Rng) -> np.ndarray:
    """A ``rows x cols`` matrix drawn from ``kind``.

    Fan-based schemes follow the usual recipes, with ``n = fan_in``:

    - default uniform: U[-1/sqrt(n), 1/sqrt(n)]
    - Xavier normal: N(0, 2/(fan_in + fan_out)); uniform: U[+-sqrt(6/(fan_in + fan_out))]
    - Kaiming normal: N(0, 2/fan_in); uniform: U[+-sqrt(6/fan_in)]

    Identity, np-RNN and eigen delegate to their square-only constructors.
    """
    if rows < 1 or cols < 1:
        raise ConfigurationError(f"shape must be positive, got {rows}x{cols}")
    scheme = kind.scheme
    if scheme in SQUARE_ONLY:
        if rows != cols:
            raise ConfigurationError(f"{scheme.value} initializer needs a square shape, got {rows}x{cols}")
        if scheme is Scheme.IDENTITY:
            return init_identity(rows)
        if scheme is Scheme.NP_RNN:
            return init_np(rows, rng)
        return init_eigen(rows, kind.lam, rng)

    fan_in = kind.fan_in or cols
    fan_out = kind.fan_out or rows
    shape = (rows, cols)
    if scheme is Scheme.DEFAULT_UNIFORM:
        bound = 1.0 / math.sqrt(fan_in)
        return rng.uniform(-bound, bound, shape)
    if scheme is Scheme.XAVIER_NORMAL:
        return rng.normal(shape, std=math.sqrt(2.0 / (fan_in + fan_out)))
    if scheme is Scheme.XAVIER_UNIFORM:
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-bound, bound, shape)
    if scheme is Scheme.KAIMING_NORMAL:
        return rng.normal(shape, std=math.sqrt(2.0 / fan_in))
    if scheme is Scheme.KAIMING_UNIFORM:
        bound = math.sqrt(6.0 / fan_in)
        return rng.uniform(-bound, bound, shape)
    raise ConfigurationError(f"unsupported initializer {scheme}")


def support_bound(kind: InitializerKind, rows: int, cols: int) -> float:
    """Largest magnitude an entry can take (``inf`` for Gaussian schemes)."""
    fan_in = kind.fan_in or cols
    fan_out = kind.fan_out or rows
    return {
        Scheme.DEFAULT_UNIFORM: 1.0 / math.sqrt(fan_in),
        Scheme.XAVIER_UNIFORM: math.sqrt(6.0 / (fan_in + fan_out)),
        Scheme.KAIMING_UNIFORM: math.sqrt(6.0 / fan_in),
        Scheme.IDENTITY: 1.0,
        Scheme.NP_RNN: 1.0,
        Scheme.EIGEN: kind.lam,
    }.get(kind.scheme, math.inf)


def init_identity(n: int) -> np.ndarray:
    if n < 1:
        raise ConfigurationError(f"n must be positive, got {n}")
    return np.eye(n)


def init_np(n: int, rng: Rng) -> np.ndarray:
    """Normalized positive definite recurrent matrix.

    ``R`` has standard normal entries, ``A = R R^T / n + I``, and the result
    is ``A / lambda_max(A)``: symmetric, spectrum real in (0, 1], top value 1.
    """
    if n < 1:
        raise ConfigurationError(f"n must be positive, got {n}")
    r = rng.normal((n, n))
    a = r @ r.T / n
    a = 0.5 * (a + a.T) + np.eye(n)
    top = symmetric_eigen(a)[0][0]
    return a / top


def rotation_angles(n: int, rng: Rng) -> np.ndarray:
    """The ``n - 1`` plane angles, drawn in plane order from U[0, 2 pi)."""
    return rng.uniform(0.0, 2.0 * math.pi, n - 1) if n > 1 else np.zeros(0)


def eigen_from_angles(lam: float, angles) -> np.ndarray:
    """``lam * I`` right-multiplied by rotations in planes (0,1), (1,2), ...

    Rotation ``i`` carries ``[[cos, -sin], [sin, cos]]`` in rows/columns
    ``i, i + 1``.
    """
    n = len(angles) + 1
    w = lam * np.eye(n)
    for i, theta in enumerate(angles):
        c, s = math.cos(theta), math.sin(theta)
        left = w[:, i].copy()
        right = w[:, i + 1].copy()
        w[:, i] = c * left + s * right
        w[:, i + 1] = -s * left + c * right
    return w


def init_eigen(n: int, lam: float = DEFAULT_LAMBDA, rng: Rng | None = None) -> np.ndarray:
    """Eigen initializer: ``lam`` times a product of ``n - 1`` random plane rotations."""
    if n < 1:
        raise ConfigurationError(f"n must be positive, got {n}")
    if not 0.0 < lam < 1.0:
        raise ConfigurationError(f"lambda must lie in (0, 1), got {lam}")
    if n > 1 and rng is None:
        raise ConfigurationError("eigen initializer needs an Rng for n > 1")
    angles = rotation_angles(n, rng) if n > 1 else np.zeros(0)
    return eigen_from_angles(lam, angles)


@dataclass
class SpectrumStats:
    ordered_means: np.ndarray
    ordered_stds: np.ndarray
    trials: int
    dim: int

    def rows(self):
        for rank, (m, s) in enumerate(zip(self.ordered_means, self.ordered_stds), start=1):
            yield rank, float(m), float(s)

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["rank", "mean", "std"])
            for rank, m, s in self.rows():
                writer.writerow([rank, repr(float(m)), repr(float(s))])

    @classmethod
    def from_csv(cls, path, trials: int = 0) -> "SpectrumStats":
        with open(Path(path), newline="") as fh:
            rows = list(csv.DictReader(fh))
        means = np.array([float(r["mean"]) for r in rows])
        stds = np.array([float(r["std"]) for r in rows])
        return cls(means, stds, trials, len(rows))


def spectrum_stats(kind: InitializerKind, n: int, trials: int, rng: Rng) -> SpectrumStats:
    """Positionwise mean and sample std of descending eigenvalue moduli over trials.

    Both members of a conjugate pair are counted, so there are ``n`` ranks.
    """
    if trials < 2:
        raise ConfigurationError(f"need at least 2 trials, got {trials}")
    moduli = np.empty((trials, n))
    for t in range(trials):
        w = init_dense(kind, n, n, rng)
        moduli[t] = np.sort(eigenvalues(w, check=False).moduli)[::-1]
    means = moduli.mean(axis=0)
    stds = moduli.std(axis=0, ddof=1)
    return SpectrumStats(means, stds, trials, n)
