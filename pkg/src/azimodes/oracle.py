"""Brute-force cross-checks for the Fourier-domain construction.

Nothing here reuses the analytic path: the coupling operator is sampled
directly in angle space, the Bogolyubov solution is replaced by the matrix
exponential of the linear generator, and Bessel values come from
quadrature or an extended-precision series.
"""

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.linalg import expm

from .coupling import CouplingMatrix, normalize_variant, truncation_order
from .decomp import phi_grid

#: oracle propagation is restricted to modest truncations
MOMENT_NMAX_CAP = 64

# Constant that maps the raw angular kernel onto the normalisation of the
# coupling matrices: H_nm = (1/2pi) iint khat(phi_i, phi_s) e^{i n phi_i - i m phi_s}
# with khat = scale * chi * exp(-tau (1 + cos(phi_i - phi_s))).
KERNEL_SCALE = {"chi1": -1.0 / math.pi, "chi2": 2.0 / (3.0 * math.pi)}


def susceptibility(chi, phi_s, phi_i):
    """Azimuthal factor of the effective susceptibility."""
    chi = normalize_variant(chi)
    if chi == "chi1":
        return np.cos(phi_s) * np.cos(phi_i)
    return 0.5 * (1.0 + np.cos(phi_i) ** 2) + 0.0 * phi_s


@dataclass(frozen=True)
class GridKernel:
    """Weighted samples ``(2 pi / N) * khat(phi_i, phi_s)``; rows are idler angles."""

    chi_variant: str
    tau: float
    N: int
    matrix: np.ndarray

    @property
    def weight(self):
        return 2.0 * math.pi / self.N


def grid_kernel(chi, tau, N):
    chi = normalize_variant(chi)
    phi = phi_grid(N)
    phi_i, phi_s = np.meshgrid(phi, phi, indexing="ij")
    k = KERNEL_SCALE[chi] * susceptibility(chi, phi_s, phi_i) * np.exp(-tau * (1.0 + np.cos(phi_i - phi_s)))
    return GridKernel(chi, float(tau), int(N), (2.0 * math.pi / N) * k)


def _check_grid(tau, N):
    need = 4 * truncation_order(tau, 1e-12)
    if int(N) != N or N < need:
        raise ValueError(f"grid size N={N} too small at tau={tau}; need N >= {need}")


@dataclass(frozen=True)
class KernelSVD:
    values: np.ndarray
    left: np.ndarray
    right: np.ndarray
    N: int

    def mode_density(self, j, side="idler"):
        """``|U_j(phi)|^2`` recovered from the grid singular vector."""
        vec = self.left[j] if side == "idler" else self.right[j]
        return np.abs(vec) ** 2 * self.N / (2.0 * math.pi)


def kernel_svd(chi, tau, N, compute_modes=True):
    """SVD of the sampled angular kernel.

    With the quadrature weight folded in, singular values approximate
    ``|R_j|`` and the singular vectors are ``sqrt(2 pi / N)``-scaled samples
    of the mode functions.
    """
    _check_grid(tau, N)
    G = grid_kernel(chi, tau, N).matrix
    if not compute_modes:
        return KernelSVD(np.linalg.svd(G, compute_uv=False), None, None, int(N))
    u, s, vt = np.linalg.svd(G)
    return KernelSVD(s, u.T, vt, int(N))


def coupling_projection(chi, tau, n_max, N=None):
    """Coupling matrix from a 2-D trapezoid projection of the angular kernel."""
    chi = normalize_variant(chi)
    if N is None:
        N = max(64, 1 << math.ceil(math.log2(4 * (n_max + truncation_order(tau, 1e-16)))))
    G = grid_kernel(chi, tau, N)
    phi = phi_grid(N)
    idx = np.arange(-n_max, n_max + 1)
    E = np.exp(1j * np.outer(idx, phi))
    # (1/2pi) * sum_kl w^2 khat e^{i n phi_k} e^{-i m phi_l}; G carries one w
    P = E @ G.matrix @ E.conj().T * (G.weight / (2.0 * math.pi))
    return CouplingMatrix(chi, float(tau), int(n_max), np.real(P))


def perturbative_intensity(chi, tau, gainLG, N, side="idler"):
    """First-order intensity ``gainLG^2 * int |khat(phi, phi')|^2 dphi'``."""
    G = grid_kernel(chi, tau, N)
    sq = G.matrix**2 / G.weight
    per_angle = sq.sum(axis=1) if side == "idler" else sq.sum(axis=0)
    return gainLG**2 * per_angle


@dataclass(frozen=True)
class Moments:
    """Vacuum-input occupations per Fourier order after propagation."""

    idler: np.ndarray
    signal: np.ndarray


def propagation_generator(h):
    """Generator for ``x = (a_i^dag[n], a_s[-m])``: ``dx/dz = gamma * M x``."""
    h = np.asarray(h, dtype=float)
    rows, cols = h.shape
    M = np.zeros((rows + cols, rows + cols), dtype=complex)
    M[:rows, rows:] = -1j * h
    M[rows:, :rows] = 1j * h.T
    return M


def propagate_moments(H, gainLG):
    """Occupations from the matrix exponential of the coupled evolution.

    ``H`` is a :class:`CouplingMatrix` (``n_max`` capped at 64) or any real
    2-D array.
    """
    if isinstance(H, CouplingMatrix):
        if H.n_max > MOMENT_NMAX_CAP:
            raise ValueError(f"propagation oracle is limited to n_max <= {MOMENT_NMAX_CAP}")
        h = H.entries
    else:
        h = np.atleast_2d(np.asarray(H, dtype=float))
    gainLG = float(gainLG)
    M = propagation_generator(h)
    if not (np.all(np.isfinite(M)) and math.isfinite(gainLG)):
        raise ValueError("non-finite generator")
    rows = h.shape[0]
    P = expm(gainLG * M)
    idler = np.sum(np.abs(P[:rows, rows:]) ** 2, axis=1)
    signal = np.sum(np.abs(P[rows:, :rows]) ** 2, axis=1)
    return Moments(idler=idler, signal=signal)


def _check_bessel_args(n, tau):
    tau = float(tau)
    if not math.isfinite(tau) or tau < 0:
        raise ValueError(f"tau must be finite and nonnegative, got {tau!r}")
    if int(n) != n or n < 0:
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    return int(n), tau


def infeld_quadrature(n, tau, rtol=1e-15):
    """``exp(-tau) * (1/pi) int_0^pi exp(tau cos psi) cos(n psi) dpsi``.

    The periodic integrand is summed with the trapezoid rule, doubling the
    node count until converged. The contour is the circle through the
    saddle point of ``exp(tau (z + 1/z) / 2) z^(-n)``; it reduces to the
    real ``psi`` integral (prescaled by ``exp(-tau)``) for ``n = 0`` and
    keeps relative accuracy for high orders where the real-axis integrand
    cancels to far below its own size.
    """
    n, tau = _check_bessel_args(n, tau)
    if tau == 0.0:
        return 1.0 if n == 0 else 0.0
    r = (n + math.hypot(n, tau)) / tau
    log_r = math.log(r)

    def trapezoid(M):
        theta = 2.0 * math.pi * np.arange(M) / M
        z = np.exp(1j * theta)
        f = 0.5 * tau * (r * z + 1.0 / (r * z)) - n * log_r - 1j * n * theta - tau
        return float(np.mean(np.exp(f)).real)

    M = 32
    prev = trapezoid(M)
    while M < 1 << 18:
        M *= 2
        cur = trapezoid(M)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return cur


def infeld_series(n, tau, digits=40):
    """``exp(-tau) I_n(tau)`` from the power series in extended precision."""
    n, tau = _check_bessel_args(n, tau)
    if tau == 0.0:
        return 1.0 if n == 0 else 0.0
    with mpmath.workdps(digits):
        x = mpmath.mpf(tau) / 2
        term = x**n / mpmath.factorial(n)
        total = term
        x2 = x * x
        k = 0
        eps = mpmath.mpf(10) ** (-digits)
        while True:
            k += 1
            term = term * x2 / (k * (k + n))
            total += term
            if term < eps * total and k > x:
                break
        return float(total * mpmath.exp(-mpmath.mpf(tau)))
