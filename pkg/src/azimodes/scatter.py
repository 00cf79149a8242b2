r"""Bogolyubov solution in the eigenmode basis and the observables built on it.

Each eigenmode pair evolves as an independent two-mode squeezer with
``g_j = gainLG * R_j``. Intensities, the effective mode number and the
scattering kernels on an azimuthal grid all follow from ``g_j`` and the
mode functions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .decomp import check_grid, default_grid, mode_functions, phi_grid, synthesis_matrix


@dataclass(frozen=True)
class GainSpectrum:
    g: np.ndarray
    gainLG: float

    def __len__(self):
        return len(self.g)

    @property
    def occupations(self):
        """Mean photon number ``sinh^2 g_j`` per eigenmode."""
        return np.sinh(self.g) ** 2


def bogolyubov_gains(dec, gainLG):
    """Per-mode squeezing parameters ``g_j = gainLG * R_j``."""
    gainLG = float(gainLG)
    if not math.isfinite(gainLG):
        raise ValueError(f"gainLG must be finite, got {gainLG!r}")
    if gainLG < 0:
        raise ValueError(f"gainLG must be nonnegative, got {gainLG!r}")
    values = dec.values if hasattr(dec, "values") else np.asarray(dec, dtype=float)
    g = gainLG * np.asarray(values, dtype=float)
    g.flags.writeable = False
    return GainSpectrum(g=g, gainLG=gainLG)


def _aligned(dec, gains):
    if len(gains) != len(dec):
        raise ValueError(f"gain spectrum has {len(gains)} entries, decomposition has {len(dec)} modes")


@dataclass(frozen=True)
class AngularIntensity:
    """``total`` on ``phi``; ``per_mode`` rows are ``sinh^2 g_j |U_j|^2``."""

    side: str
    phi: np.ndarray
    total: np.ndarray
    per_mode: np.ndarray = None

    def integral(self):
        return float(np.sum(self.total) * 2.0 * math.pi / len(self.phi))


def intensity(dec, gains, side="idler", N=None, per_mode=None):
    """Angular intensity ``sum_j sinh^2(g_j) |U_j(phi)|^2``.

    Parameters
    ----------
    dec : ModeDecomposition
    gains : GainSpectrum
        Must be aligned with ``dec``.
    side : {"idler", "signal"}
    N : int, optional
        Grid size; defaults to a power of two of at least ``4 n_max``.
    per_mode : int or "all", optional
        Also return the components of the leading ``per_mode`` modes.
    """
    _aligned(dec, gains)
    if N is None:
        N = default_grid(dec.n_max)
    U = mode_functions(dec, side, N)
    weights = gains.occupations
    power = np.abs(U) ** 2
    total = weights @ power
    comps = None
    if per_mode is not None:
        J = len(dec) if per_mode == "all" else int(per_mode)
        if not 0 <= J <= len(dec):
            raise ValueError(f"per_mode={per_mode} exceeds the {len(dec)} available modes")
        comps = weights[:J, None] * power[:J]
    return AngularIntensity(side=side, phi=phi_grid(N), total=total, per_mode=comps)


def shifted_mode_curves(dec, side="idler", N=None, J=8):
    """Mode profiles offset by their eigenvalue: ``R_j (1 + 2 pi |R_j| |U_j|^2)``.

    Returns
    -------
    phi : ndarray, shape (N,)
    curves : ndarray, shape (J, N)
    """
    if not 0 <= J <= len(dec):
        raise ValueError(f"J={J} exceeds the {len(dec)} available modes")
    if N is None:
        N = default_grid(dec.n_max)
    R = np.asarray(dec.values[:J])
    U = mode_functions(dec, side, N, modes=slice(0, J))
    curves = R[:, None] * (1.0 + 2.0 * math.pi * np.abs(R)[:, None] * np.abs(U) ** 2)
    return phi_grid(N), curves


def effective_mode_number(gains):
    """``(sum sinh^2 g)^2 / sum sinh^4 g``; undefined for vacuum."""
    g = gains.g if hasattr(gains, "g") else np.asarray(gains, dtype=float)
    s = np.sinh(g) ** 2
    if not np.any(s > 0):
        raise ValueError("effective mode number undefined when all gains vanish")
    s = s / s.max()
    return float(s.sum() ** 2 / np.sum(s * s))


def fourier_occupations(dec, gains, side="idler"):
    """Mean photon number in each Fourier order, ``sum_j sinh^2 g_j W_jn^2``."""
    _aligned(dec, gains)
    coeffs = dec.left if side == "idler" else dec.right
    return gains.occupations @ (np.asarray(coeffs) ** 2)


@dataclass(frozen=True)
class ScatteringKernels:
    """Grid samples of the output-from-input kernels.

    ``ii[k, l] = K_ii(phi_k, phi_l)`` and so on; convolution with a kernel
    uses the quadrature weight ``2 pi / N``. Orders beyond the truncation
    are uncoupled, so they pass through the ``ii``/``ss`` blocks unchanged.
    """

    phi: np.ndarray
    ii: np.ndarray
    is_: np.ndarray
    ss: np.ndarray
    si: np.ndarray

    @property
    def weight(self):
        return 2.0 * math.pi / len(self.phi)

    def identity(self):
        return np.eye(len(self.phi)) / self.weight

    def quasi_unitarity_residual(self, side="idler"):
        """``max |K K^dag - K' K'^dag - Id|`` for the chosen output side."""
        direct, cross = (self.ii, self.is_) if side == "idler" else (self.ss, self.si)
        w = self.weight
        gram = w * (direct @ direct.conj().T - cross @ cross.conj().T)
        return float(np.max(np.abs(gram - self.identity())))

    def moments(self, side="idler"):
        """Vacuum-input ``<a^dag(phi) a(phi')>`` on the grid."""
        cross = self.is_ if side == "idler" else self.si
        return self.weight * (cross @ cross.conj().T)


def scattering_kernels(dec, gains, N=None):
    """Sample the scattering kernels on an ``N``-point grid.

    ``K_ii = sum_j cosh g_j U_j(phi) U_j*(phi')`` and
    ``K_is = -i sum_j sinh g_j U_j(phi) Ut_j*(phi_s)``, where ``Ut`` is the
    signal mode. The signal-output blocks swap the roles of ``U`` and
    ``Ut*``.
    """
    _aligned(dec, gains)
    if N is None:
        N = default_grid(dec.n_max)
    check_grid(N, dec.n_max)
    U = mode_functions(dec, "idler", N)
    Ut = mode_functions(dec, "signal", N)
    ch = np.cosh(gains.g)
    sh = np.sinh(gains.g)
    eye = np.eye(N) * (N / (2.0 * math.pi))
    ii = eye + (U.T * (ch - 1.0)) @ U.conj()
    is_ = -1j * (U.T * sh) @ Ut.conj()
    ss = eye + (Ut.conj().T * (ch - 1.0)) @ Ut
    si = -1j * (Ut.conj().T * sh) @ U
    return ScatteringKernels(phi=phi_grid(N), ii=ii, is_=is_, ss=ss, si=si)


def kernel_fourier_occupations(kernels, n_max, side="idler"):
    """Project grid moments onto Fourier orders ``-n_max..n_max``.

    On the signal side the projection follows the flipped order used for
    the columns of the coupling matrix.
    """
    N = len(kernels.phi)
    E = synthesis_matrix(n_max, N) * kernels.weight
    M = kernels.moments(side)
    if side == "idler":
        proj = E.conj().T @ M @ E
    else:
        proj = E.T @ M @ E.conj()
    return np.real(np.diag(proj))
