"""Optional SVG rendering of scatters and learning curves (requires matplotlib)."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "eigenrnn"
    import matplotlib.pyplot as plt

    return plt


def scatter_svg(points, labels, path, title: str = "hidden states") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    labels = np.asarray(labels)
    for value in np.unique(labels):
        sel = labels == value
        ax.scatter(points[sel, 0], points[sel, 1], s=2, label=str(value) if value >= 0 else None)
    ax.set_xlabel("PC 1")
    ax.set_ylabel("PC 2")
    ax.set_title(title)
    if labels.size and labels.max() >= 0:
        ax.legend(markerscale=4, fontsize="small")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def curve_svg(mean, std, path, ylabel: str = "loss") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    epochs = np.arange(1, len(mean) + 1)
    ax.plot(epochs, mean)
    ax.fill_between(epochs, mean - std, mean + std, alpha=0.3)
    ax.set_xlabel("epoch")
    ax.set_ylabel(ylabel)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
