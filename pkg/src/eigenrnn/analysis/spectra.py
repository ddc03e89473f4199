"""Spectra of a model's recurrent blocks."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from ..linalg import EigenSpectrum, eigenvalues, unique_moduli
from ..nets.cells import CellParams


@dataclass
class SpectrumSnapshot:
    """Eigenvalues of every recurrent ``n x n`` block at one epoch."""

    epoch: int
    spectra: dict[str, EigenSpectrum]

    def max_modulus(self) -> float:
        return max(s.radius for s in self.spectra.values())

    def top_unique(self, k: int = 10) -> dict[str, list[float]]:
        """Largest ``k`` moduli per block, one entry per conjugate pair."""
        return {name: unique_moduli(s)[:k] for name, s in self.spectra.items()}

    def rows(self):
        for name, spectrum in self.spectra.items():
            for rank, mod in enumerate(spectrum.moduli, start=1):
                yield self.epoch, name, rank, float(mod)


def recurrent_spectrum(params: CellParams, epoch: int = 0) -> SpectrumSnapshot:
    return SpectrumSnapshot(
        epoch, {g: eigenvalues(params.recurrent[g]) for g in params.kind.gates}
    )


def write_spectrum_csv(snapshots, path) -> None:
    """``epoch,block,rank,modulus`` rows for a sequence of snapshots."""
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "block", "rank", "modulus"])
        for snap in snapshots:
            for epoch, name, rank, mod in snap.rows():
                writer.writerow([epoch, name, rank, repr(float(mod))])
