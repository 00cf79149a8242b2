"""Figures rendered next to the CSV output.

SVG output is byte-stable: the hash salt is pinned, the date stamp is
dropped and text is drawn as paths.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .output import CSVFormatError, read_table  # noqa: E402

STYLE = {
    "svg.hashsalt": "azimodes",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.labelsize": 10,
    "legend.fontsize": 7,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "lines.linewidth": 1.0,
    "figure.figsize": (5.0, 3.6),
}

PLOT_KINDS = ("modes", "kscan", "intensity")


def save(fig, path):
    """Write ``fig`` without timestamps so reruns give identical bytes."""
    fmt = str(path).rsplit(".", 1)[-1].lower()
    metadata = {"Date": None} if fmt == "svg" else None
    with matplotlib.rc_context(STYLE):
        fig.savefig(path, metadata=metadata)
    plt.close(fig)


def plot_mode_curves(phi, curves, labels=None, title=None, levels=None):
    """One line per shifted mode curve.

    ``levels`` (the eigenvalues) adds a dotted reference line per mode.
    """
    with matplotlib.rc_context(STYLE):
        fig, ax = plt.subplots()
        for k, curve in enumerate(curves):
            label = labels[k] if labels else f"mode {k}"
            (line,) = ax.plot(phi, curve, label=label)
            if levels is not None:
                ax.axhline(levels[k], color=line.get_color(), ls=":", lw=0.6)
        ax.set_xlim(-math.pi, math.pi)
        ax.set_xlabel(r"azimuthal angle $\varphi$ (rad)")
        ax.set_ylabel(r"$R_j(1 + 2\pi|R_j||U_j|^2)$")
        if title:
            ax.set_title(title)
        if len(curves) <= 12:
            ax.legend(loc="upper right", ncol=2, frameon=False)
        fig.tight_layout()
    return fig, ax


def plot_kscan(f_THz, K, gains, title=None):
    """Effective mode number against frequency, one line per gain curve."""
    f_THz = np.asarray(f_THz)
    K = np.asarray(K)
    gains = np.asarray(gains)
    with matplotlib.rc_context(STYLE):
        fig, ax = plt.subplots()
        for g in sorted(set(gains.tolist())):
            mask = gains == g
            order = np.argsort(f_THz[mask])
            ax.plot(f_THz[mask][order], K[mask][order], marker=".", ms=3, label=rf"$\tilde\gamma L$ = {g:g}")
        ax.set_xlabel(r"idler frequency $f_i$ (THz)")
        ax.set_ylabel("effective mode number K")
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig, ax


def plot_intensity(phi, total, components=None, labels=None):
    with matplotlib.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(phi, total, color="k", label="total")
        for k, comp in enumerate(components if components is not None else []):
            ax.plot(phi, comp, lw=0.7, label=labels[k] if labels else f"mode {k}")
        ax.set_xlim(-math.pi, math.pi)
        ax.set_xlabel(r"azimuthal angle $\varphi$ (rad)")
        ax.set_ylabel("intensity (arb. units)")
        if components is not None and len(components) <= 12:
            ax.legend(frameon=False, ncol=2)
        fig.tight_layout()
    return fig, ax


def figure_from_csv(path, kind):
    """Build the figure for a CSV written by the ``modes``/``scan``/``intensity`` commands."""
    if kind not in PLOT_KINDS:
        raise ValueError(f"kind must be one of {PLOT_KINDS}, got {kind!r}")
    header, data = read_table(path)

    def need(name):
        if name not in header:
            raise CSVFormatError(f"{path}: row 1: missing column {name!r}")
        return header.index(name)

    if kind == "kscan":
        gain_col = "gain_ref" if "gain_ref" in header else "gainLG"
        return plot_kscan(data[:, need("f_THz")], data[:, need("K")], data[:, need(gain_col)])
    phi = data[:, need("phi_rad")]
    if kind == "modes":
        cols = [k for k, h in enumerate(header) if h != "phi_rad"]
        if not cols:
            raise CSVFormatError(f"{path}: row 1: no curve columns")
        return plot_mode_curves(phi, data[:, cols].T, [header[k] for k in cols])
    cols = [k for k, h in enumerate(header) if h.startswith("mode_")]
    comps = data[:, cols].T if cols else None
    return plot_intensity(phi, data[:, need("total")], comps, [header[k] for k in cols])


def render_csv(in_path, kind, out_path):
    fig, _ = figure_from_csv(in_path, kind)
    save(fig, out_path)
