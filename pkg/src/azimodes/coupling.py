r"""Coupling matrices of the azimuthal interaction in the Fourier basis.

Row index ``n`` is the idler Fourier order and column index ``m`` the
signal order with flipped sign, so that ``H[n, m]`` multiplies
:math:`a^{\dagger(i)}_n a^{\dagger(s)}_{-m}`. Both variants only couple
``m = n`` and ``m = n +- 2``, so even and odd orders never mix.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .specfun import scaled_infeld_row

CHI_VARIANTS = ("chi1", "chi2")

MIN_TRUNCATION = 8


@dataclass(frozen=True)
class CouplingMatrix:
    """Dense ``(2 n_max + 1)``-square matrix over orders ``-n_max..n_max``."""

    chi_variant: str
    tau: float
    n_max: int
    entries: np.ndarray

    @property
    def indices(self):
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def size(self):
        return 2 * self.n_max + 1

    def entry(self, n, m):
        """Element by Fourier order rather than array position."""
        return self.entries[n + self.n_max, m + self.n_max]

    def to_csv(self, path):
        """One row per idler order ``n``; header lists the column orders ``m``."""
        idx = self.indices
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n"] + [str(m) for m in idx])
            for n, row in zip(idx, self.entries):
                writer.writerow([str(n)] + [format(x, ".16e") for x in row])


def normalize_variant(chi):
    """Accept ``1``, ``"1"``, ``"chi1"`` and friends."""
    key = str(chi).lower()
    if not key.startswith("chi"):
        key = "chi" + key
    if key not in CHI_VARIANTS:
        raise ValueError(f"unknown susceptibility variant {chi!r}; expected 1 or 2")
    return key


def truncation_order(tau, eps=1e-12):
    """Smallest ``n_max >= 8`` with ``exp(-tau) I_{n_max}(tau) < eps``."""
    tau = float(tau)
    if not (math.isfinite(tau) and tau >= 0):
        raise ValueError(f"tau must be finite and nonnegative, got {tau!r}")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    # Gaussian tail estimate for large tau, plus room for the small-tau regime
    guess = int(math.sqrt(2.0 * tau * math.log(1.0 / eps))) + int(math.log(1.0 / eps)) + 16
    while True:
        row = scaled_infeld_row(tau, guess).values
        below = np.nonzero(row[MIN_TRUNCATION:] < eps)[0]
        if below.size:
            return MIN_TRUNCATION + int(below[0])
        guess *= 2


def _underflow_order(tau):
    """Order beyond which ``exp(-tau) I_n(tau)`` underflows to zero."""
    return math.ceil(math.sqrt(1500.0 * tau)) + 200


def _infeld_by_order(tau, n_max):
    """Scaled values indexed by ``k + n_max + 1`` for ``k = -(n_max+1)..n_max+1``.

    The row is always evaluated to an order set by ``tau`` alone, so a
    larger ``n_max`` leaves every shared entry bit-identical.
    """
    full = scaled_infeld_row(tau, _underflow_order(tau)).values
    row = np.zeros(n_max + 2)
    k = min(n_max + 2, full.size)
    row[:k] = full[:k]
    return np.concatenate([row[:0:-1], row])


def _check(tau, n_max):
    tau = float(tau)
    if not (math.isfinite(tau) and tau >= 0):
        raise ValueError(f"tau must be finite and nonnegative, got {tau!r}")
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be a positive integer, got {n_max!r}")
    return tau, int(n_max)


def build_h1(tau, n_max):
    """Coupling matrix for the ``cos(phi_s) cos(phi_i)`` susceptibility.

    ``H[n, m] = (-1)^n / 2 * e^{-tau} * [(I_{n+1} + I_{n-1}) d(n, m)
    + I_{n+1} d(n+2, m) + I_{n-1} d(n-2, m)]``. The result is exactly
    symmetric because every entry reuses the same Bessel values.
    """
    tau, n_max = _check(tau, n_max)
    vals = _infeld_by_order(tau, n_max)
    size = 2 * n_max + 1
    idx = np.arange(-n_max, n_max + 1)
    sign = np.where(idx % 2 == 0, 0.5, -0.5)
    up = vals[idx + 1 + n_max + 1]  # I_{n+1}
    down = vals[idx - 1 + n_max + 1]  # I_{n-1}
    h = np.zeros((size, size))
    pos = np.arange(size)
    h[pos, pos] = sign * (up + down)
    h[pos[:-2], pos[:-2] + 2] = sign[:-2] * up[:-2]
    h[pos[2:], pos[2:] - 2] = sign[2:] * down[2:]
    h.flags.writeable = False
    return CouplingMatrix("chi1", tau, n_max, h)


def build_h2(tau, n_max):
    """Coupling matrix for the ``(1 + cos^2 phi_i) / 2`` susceptibility.

    ``H[n, m] = (-1)^n e^{-tau} I_m [d(n, m) + d(n+2, m)/6 + d(n-2, m)/6]``;
    not symmetric in general.
    """
    tau, n_max = _check(tau, n_max)
    vals = _infeld_by_order(tau, n_max)
    size = 2 * n_max + 1
    idx = np.arange(-n_max, n_max + 1)
    sign = np.where(idx % 2 == 0, 1.0, -1.0)
    col = vals[idx + n_max + 1]  # I_m, indexed by column position
    h = np.zeros((size, size))
    pos = np.arange(size)
    h[pos, pos] = sign * col
    h[pos[:-2], pos[:-2] + 2] = sign[:-2] * col[2:] / 6.0
    h[pos[2:], pos[2:] - 2] = sign[2:] * col[:-2] / 6.0
    h.flags.writeable = False
    return CouplingMatrix("chi2", tau, n_max, h)


def build_coupling(chi, tau, n_max=None, eps=1e-12):
    """Build either variant; ``n_max`` defaults to :func:`truncation_order`."""
    chi = normalize_variant(chi)
    if n_max is None:
        n_max = truncation_order(tau, eps)
    return build_h1(tau, n_max) if chi == "chi1" else build_h2(tau, n_max)
