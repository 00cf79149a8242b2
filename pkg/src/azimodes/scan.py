"""Frequency and gain sweeps over the full pipeline."""

import csv
from dataclasses import dataclass, replace

import numpy as np

from .coupling import build_coupling, normalize_variant, truncation_order
from .decomp import decompose, default_grid, schmidt_number
from .physics import ExperimentConfig, check_frequency, gain_of_frequency, tau_of_frequency
from .scatter import bogolyubov_gains, effective_mode_number, shifted_mode_curves

THZ = 1e12

TRUNCATION_EPS = 1e-12

KSCAN_HEADER = ("f_THz", "gainLG", "tau", "n_max", "K", "schmidt_K", "gain_ref")


@dataclass(frozen=True)
class KScanRow:
    f_THz: float
    gainLG: float
    tau: float
    n_max: int
    K: float
    schmidt_K: float
    gain_ref: float


@dataclass(frozen=True)
class KScanResult:
    chi_variant: str
    gain_model: str
    rows: tuple

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])

    def select(self, gain_ref):
        """Rows of one gain curve, in frequency order."""
        return [r for r in self.rows if r.gain_ref == gain_ref]

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(KSCAN_HEADER)
            for r in self.rows:
                writer.writerow(
                    [
                        format(r.f_THz, ".16e"),
                        format(r.gainLG, ".16e"),
                        format(r.tau, ".16e"),
                        str(r.n_max),
                        format(r.K, ".16e"),
                        format(r.schmidt_K, ".16e"),
                        format(r.gain_ref, ".16e"),
                    ]
                )


def decompose_at(cfg, chi, f_i, eps=TRUNCATION_EPS):
    """Run the frequency-dependent half of the pipeline at ``f_i`` (Hz)."""
    check_frequency(f_i)
    tau = tau_of_frequency(f_i, cfg)
    H = build_coupling(chi, tau, truncation_order(tau, eps))
    return decompose(H)


def _scan_point(args):
    cfg, chi, f_i, gain_list = args
    dec = decompose_at(cfg, chi, f_i)
    schmidt = schmidt_number(dec)
    rows = []
    for g_ref in gain_list:
        gainLG = gain_of_frequency(f_i, replace(cfg, gain_ref=g_ref))
        K = effective_mode_number(bogolyubov_gains(dec, gainLG))
        rows.append(KScanRow(f_i / THZ, gainLG, dec.tau, dec.n_max, K, schmidt, g_ref))
    return rows


def scan_k(cfg, chi, f_list, gain_list, executor=None):
    """Effective mode number over a grid of frequencies (Hz) and gains.

    ``gain_list`` holds ``gain_ref`` values; the gain actually applied at
    each frequency follows ``cfg.gain_model``. Rows are sorted by
    ``(gain_ref, f)`` whatever the evaluation order, so passing an
    ``executor`` (anything with a ``map`` method) never changes the output.
    """
    cfg = cfg or ExperimentConfig()
    chi = normalize_variant(chi)
    f_list = [float(f) for f in f_list]
    gain_list = [float(g) for g in gain_list]
    if not f_list or not gain_list:
        raise ValueError("need at least one frequency and one gain")
    for f in f_list:
        check_frequency(f)
    for g in gain_list:
        if not g > 0:
            raise ValueError(f"gains must be positive (K is undefined at zero gain), got {g!r}")
    mapper = executor.map if executor is not None else map
    jobs = [(cfg, chi, f, gain_list) for f in f_list]
    rows = [row for chunk in mapper(_scan_point, jobs) for row in chunk]
    rows.sort(key=lambda r: (r.gain_ref, r.f_THz))
    return KScanResult(chi_variant=chi, gain_model=cfg.gain_model, rows=tuple(rows))


@dataclass(frozen=True)
class ModeGallery:
    decomposition: object
    phi: np.ndarray
    idler: np.ndarray
    signal: np.ndarray

    @property
    def values(self):
        return self.decomposition.values[: len(self.idler)]

    @property
    def parity(self):
        return self.decomposition.parity[: len(self.idler)]


def mode_gallery(cfg, chi, f_i, J=8, N=None):
    """Leading ``J`` shifted mode curves on both sides at one frequency."""
    cfg = cfg or ExperimentConfig()
    dec = decompose_at(cfg, normalize_variant(chi), f_i)
    J = min(J, len(dec))
    if N is None:
        N = default_grid(dec.n_max)
    phi, idler = shifted_mode_curves(dec, "idler", N, J)
    _, signal = shifted_mode_curves(dec, "signal", N, J)
    return ModeGallery(dec, phi, idler, signal)
