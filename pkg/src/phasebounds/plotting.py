"""Figure rendering for sweep output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_AXIS_LABELS = {
    "position": "block position l",
    "snr_db": "SNR (dB)",
}


def save_figure(series_list, axis: str, path: str, title: str | None = None):
    """Render bound curves to an image file (format from the extension)."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for series in series_list:
        ax.semilogy(series.x, series.y, marker=".", label=series.label)
    ax.set_xlabel(_AXIS_LABELS.get(axis, axis))
    ax.set_ylabel("bound on phase MSE (rad$^2$)")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
