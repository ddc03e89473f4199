"""Experiment configuration files.

Grammar: one ``key = value`` per line, keys in any order; blank lines and
lines starting with ``#`` are ignored, as is anything after `` #`` on a
line. Keys are case-insensitive; each may appear once. Seeds accept
``1-20``, ``1,2,5`` or a mix such as ``1-3,7``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigurationError
from ..initializers import InitializerKind, parse_kind
from ..nets import AdamConfig, CellKind, Loss, TrainConfig

TASKS = ("tomita", "mnist", "mackey")

# defaults with no published value are flagged in run metadata
TASK_DEFAULTS = {
    "tomita": dict(hidden=32, lr=1e-3, epochs=200, batch_size=128, loss="ce"),
    "mnist": dict(hidden=150, lr=1e-4, epochs=20, batch_size=32, loss="ce"),
    "mackey": dict(hidden=8, lr=1e-2, epochs=50, batch_size=16, loss="mse"),
}
NON_PAPER_DEFAULTS = {
    "tomita": ("hidden", "epochs", "batch_size", "max_len", "per_class"),
    "mnist": ("epochs", "batch_size"),
    "mackey": ("epochs", "batch_size", "mackey_length", "mackey_window"),
}


class ConfigError(ConfigurationError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.key = key


def parse_seeds(text: str) -> tuple[int, ...]:
    seeds = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part:
            lo, hi = (int(v) for v in part.split("-", 1))
            if hi < lo:
                raise ValueError(f"empty seed range {part}")
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError("no seeds given")
    return tuple(seeds)


@dataclass
class ExperimentConfig:
    task: str
    cell: CellKind = CellKind.TANH
    init: InitializerKind = field(default_factory=lambda: parse_kind("default"))
    hidden: int = 32
    lr: float = 1e-3
    epochs: int = 200
    batch_size: int = 32
    loss: str = "ce"
    label_smooth: float = 0.0
    seeds: tuple = (0,)
    out: str = "out"
    forget_bias: float = 0.0
    snapshot_epochs: tuple | None = None
    data_seed: int = 0
    # tomita
    grammar: int = 4
    max_len: int = 16
    per_class: int = 500
    # mnist
    mnist_dir: str = ""
    train_limit: int = 0
    test_limit: int = 0
    # mackey
    mackey_length: int = 2000
    mackey_warmup: int = 500
    mackey_window: int = 50
    # scatter
    sample_cap: int = 10_000
    explicit: frozenset = frozenset()

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"task must be one of {TASKS}, got {self.task!r}", key="task")
        if not self.seeds:
            raise ConfigError("seeds must be non-empty", key="seeds")
        if self.hidden < 1:
            raise ConfigError("hidden must be positive", key="hidden")

    def train_config(self, seed: int) -> TrainConfig:
        return TrainConfig(
            adam=AdamConfig(lr=self.lr),
            epochs=self.epochs,
            batch_size=self.batch_size,
            loss=Loss(self.loss, self.label_smooth),
            seed=seed,
            snapshot_epochs=self.snapshot_epochs,
        )

    def non_paper_defaults(self) -> list[str]:
        return [k for k in NON_PAPER_DEFAULTS[self.task] if k not in self.explicit]

    def as_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            if f.name == "explicit":
                continue
            value = getattr(self, f.name)
            if isinstance(value, CellKind):
                value = value.value
            elif isinstance(value, InitializerKind):
                value = value.label
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


def _convert(key: str, raw: str, ftype):
    if key == "cell":
        return CellKind.parse(raw)
    if key == "init":
        return parse_kind(raw)
    if key == "seeds":
        return parse_seeds(raw)
    if key == "snapshot_epochs":
        return tuple(int(v) for v in raw.replace(" ", "").split(",") if v)
    if key == "task" or key == "loss":
        return raw.lower()
    if ftype in ("int", int):
        return int(raw)
    if ftype in ("float", float):
        return float(raw)
    return raw


_FIELDS = {f.name: f.type for f in dataclasses.fields(ExperimentConfig) if f.name != "explicit"}


def parse_config(text: str) -> ExperimentConfig:
    values: dict = {}
    lines: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split(" #", 1)[0].strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, raw = (s.strip() for s in stripped.split("=", 1))
        key = key.lower()
        if key not in _FIELDS:
            raise ConfigError("unknown key", line=lineno, key=key)
        if key in values:
            raise ConfigError(f"duplicate key (first set on line {lines[key]})", line=lineno, key=key)
        try:
            values[key] = _convert(key, raw, _FIELDS[key])
        except (ValueError, ConfigurationError) as exc:
            raise ConfigError(f"bad value {raw!r} ({exc})", line=lineno, key=key) from None
        lines[key] = lineno
    if "task" not in values:
        raise ConfigError("missing required key", key="task")
    task = values["task"]
    if task not in TASKS:
        raise ConfigError(f"task must be one of {TASKS}", line=lines["task"], key="task")
    merged = dict(TASK_DEFAULTS[task])
    merged.update(values)
    merged["explicit"] = frozenset(values)
    try:
        return ExperimentConfig(**merged)
    except ConfigError:
        raise
    except ConfigurationError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)
