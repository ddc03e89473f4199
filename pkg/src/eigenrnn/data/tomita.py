"""The seven Tomita languages over {0, 1} and a balanced sampler."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError, GenerationError
from ..linalg import Rng
from .base import LabeledSequenceSet, Task

# DFA tables: (start, accepting states, transitions[state][symbol]); state -1 is a dead sink
_DFAS = {
    # 1*
    1: (0, {0}, [[-1, 0]]),
    # (10)*
    2: (0, {0}, [[-1, 1], [0, -1]]),
    # no maximal odd run of 1s later followed by a maximal odd run of 0s.
    # 0/1: no odd 1-run finished yet, current 1-run even/odd;
    # 2/3: one has, now in a 0-run of odd/even length; 4: one has, now in a 1-run
    3: (0, {0, 1, 3, 4}, [[0, 1], [2, 0], [3, -1], [2, 4], [2, 4]]),
    # no 000 substring; state = trailing zeros
    4: (0, {0, 1, 2}, [[1, 0], [2, 0], [-1, 0]]),
    # even number of 0s and of 1s; state = 2 * (zeros % 2) + (ones % 2)
    5: (0, {0}, [[2, 1], [3, 0], [0, 3], [1, 2]]),
    # (#0 - #1) divisible by 3; state = difference mod 3
    6: (0, {0}, [[1, 2], [2, 0], [0, 1]]),
    # 0*1*0*1*; state = phase
    7: (0, {0, 1, 2, 3}, [[0, 1], [2, 1], [2, 3], [-1, 3]]),
}


def tomita_membership(grammar: int, s: str) -> bool:
    """Whether ``s`` belongs to Tomita language ``grammar`` (1..7)."""
    if grammar not in _DFAS:
        raise ConfigurationError(f"Tomita grammar must be 1..7, got {grammar}")
    state, accepting, table = _DFAS[grammar]
    for ch in s:
        if ch not in "01":
            raise ConfigurationError(f"string {s!r} is not over the alphabet {{0, 1}}")
        state = table[state][int(ch)]
        if state < 0:
            return False
    return state in accepting


def encode(s: str) -> np.ndarray:
    """One-hot step encoding: ``'0' -> [1, 0]``, ``'1' -> [0, 1]``."""
    x = np.zeros((len(s), 2))
    x[np.arange(len(s)), [int(c) for c in s]] = 1.0
    return x


def decode(x) -> str:
    return "".join(str(int(i)) for i in np.argmax(x, axis=1))


def tomita_dataset(
    grammar: int,
    max_len: int,
    per_class: int,
    rng: Rng,
    budget: int = 200_000,
) -> LabeledSequenceSet:
    """``per_class`` accepted and ``per_class`` rejected strings, shuffled.

    Each draw picks a length uniformly from ``1..max_len`` and then uniform
    bits; draws whose class is already full are discarded.
    """
    if per_class < 1:
        raise ConfigurationError("per_class must be at least 1")
    if max_len < 1:
        raise ConfigurationError("max_len must be at least 1")
    found = {True: [], False: []}
    draws = 0
    while min(len(found[True]), len(found[False])) < per_class:
        if draws >= budget:
            missing = "accepted" if len(found[True]) < per_class else "rejected"
            raise GenerationError(
                f"could not sample {per_class} {missing} strings for grammar {grammar} "
                f"with max_len={max_len} in {budget} draws"
            )
        draws += 1
        length = 1 + int(rng.integers(max_len))
        s = "".join("1" if b else "0" for b in rng.integers(2, size=length))
        label = tomita_membership(grammar, s)
        if len(found[label]) < per_class:
            found[label].append(s)
    strings = found[True] + found[False]
    labels = [1] * per_class + [0] * per_class
    order = rng.permutation(len(strings))
    return LabeledSequenceSet(
        [encode(strings[i]) for i in order],
        [labels[i] for i in order],
        Task.BINARY_ACCEPT,
    )
