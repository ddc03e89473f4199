"""Measurement tools: recurrent spectra, IIR equivalence, hidden-state PCA, curve averaging."""

from .curves import CurveBundle, average_curves, non_increasing_windows, write_average_csv
from .iir import IirDecomposition, decay_bound, direct_recurrence, iir_decompose, iir_reconstruct
from .scatter import HiddenScatter, collect_hidden_states, hidden_scatter
from .spectra import SpectrumSnapshot, recurrent_spectrum, write_spectrum_csv

__all__ = [
    "CurveBundle",
    "HiddenScatter",
    "IirDecomposition",
    "SpectrumSnapshot",
    "average_curves",
    "collect_hidden_states",
    "decay_bound",
    "direct_recurrence",
    "hidden_scatter",
    "iir_decompose",
    "iir_reconstruct",
    "non_increasing_windows",
    "recurrent_spectrum",
    "write_average_csv",
    "write_spectrum_csv",
]
