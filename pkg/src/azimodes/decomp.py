"""Signed orthogonal decomposition of a coupling matrix and mode synthesis.

``H = sum_j R_j outer(w_j, v_j)`` with orthonormal rows ``w_j`` (idler)
and ``v_j`` (signal). Even and odd Fourier orders are decomposed
separately, so every mode carries an exact parity label.
"""

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

OVERLAP_TOL = 1e-12

# relative tolerance for treating two |R| values or two coefficients as tied
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ModeDecomposition:
    """Modes sorted by decreasing ``|R_j|``.

    ``left`` and ``right`` hold one coefficient vector per row, indexed by
    Fourier order ``-n_max..n_max``. ``sign_undefined`` flags modes whose
    idler/signal overlap was too small to fix the sign of ``R_j``.
    """

    values: np.ndarray
    left: np.ndarray
    right: np.ndarray
    parity: tuple
    tau: float
    chi_variant: str
    n_max: int
    sign_undefined: np.ndarray = field(default=None)

    @property
    def indices(self):
        return np.arange(-self.n_max, self.n_max + 1)

    def __len__(self):
        return len(self.values)

    def reconstruct(self):
        return (self.left.T * self.values) @ self.right

    def to_csv(self, path, coefficients_path=None):
        """Write the mode table and, optionally, the coefficient matrix."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["j", "R", "parity"])
            for j, (r, p) in enumerate(zip(self.values, self.parity)):
                writer.writerow([j, format(r, ".16e"), p])
        if coefficients_path is not None:
            idx = self.indices
            with open(coefficients_path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["j", "side"] + [str(n) for n in idx])
                for j in range(len(self)):
                    for side, vec in (("idler", self.left[j]), ("signal", self.right[j])):
                        writer.writerow([j, side] + [format(x, ".16e") for x in vec])


def _block_decompose(block, symmetric):
    """Return (signed values, left rows, right rows, undefined-sign mask)."""
    if symmetric:
        vals, vecs = np.linalg.eigh(block)
        rows = vecs.T
        return vals, rows, rows.copy(), np.zeros(len(vals), dtype=bool)
    u, s, vt = np.linalg.svd(block)
    left = u.T
    right = vt
    overlap = np.einsum("ij,ij->i", left, right)
    undefined = np.abs(overlap) < OVERLAP_TOL
    sign = np.where(overlap < 0, -1.0, 1.0)
    sign[undefined] = 1.0
    return s * sign, left, right * sign[:, None], undefined


def _dominant_index(vec):
    mags = np.abs(vec)
    top = mags.max()
    return int(np.nonzero(mags >= top * (1 - _TIE_RTOL))[0][0])


def decompose(H):
    """Signed decomposition ``H = W^T diag(R) V`` of a :class:`CouplingMatrix`.

    The symmetric ``chi1`` matrix uses an eigendecomposition, so ``V = W``
    and ``R`` are its eigenvalues. ``chi2`` uses the SVD with each singular
    value signed by the overlap of its left and right vectors.

    Each ``w_j`` is scaled so its largest coefficient is positive (lowest
    Fourier order wins ties); ``v_j`` follows along so ``R_j`` is unchanged.
    """
    h = np.asarray(H.entries, dtype=float)
    if not np.all(np.isfinite(h)):
        raise ValueError("coupling matrix contains non-finite entries")
    n_max = H.n_max
    size = 2 * n_max + 1
    idx = np.arange(-n_max, n_max + 1)
    symmetric = H.chi_variant == "chi1"

    values, lefts, rights, flags, parity = [], [], [], [], []
    for label in ("even", "odd"):
        pos = np.nonzero((idx % 2 == 0) == (label == "even"))[0]
        vals, left, right, undefined = _block_decompose(h[np.ix_(pos, pos)], symmetric)
        for k in range(len(vals)):
            w = np.zeros(size)
            v = np.zeros(size)
            w[pos] = left[k]
            v[pos] = right[k]
            if w[_dominant_index(w)] < 0:
                w, v = -w, -v
            values.append(vals[k])
            lefts.append(w)
            rights.append(v)
            flags.append(undefined[k])
            parity.append(label)

    values = np.array(values)
    lefts = np.array(lefts)
    rights = np.array(rights)
    mags = np.abs(values)
    scale = mags.max() if mags.max() > 0 else 1.0
    # quantise |R| so that rounding noise cannot reorder tied modes
    key_mag = np.round(mags / scale / _TIE_RTOL)
    keys = [
        (-key_mag[k], parity[k] != "even", abs(idx[_dominant_index(lefts[k])]), idx[_dominant_index(lefts[k])])
        for k in range(len(values))
    ]
    order = sorted(range(len(values)), key=keys.__getitem__)

    flags = np.array(flags)[order]
    # null modes have no meaningful sign; only complain about coupled ones
    loud = flags & (mags[order] > _TIE_RTOL * scale)
    if loud.any():
        warnings.warn(
            f"{int(loud.sum())} mode(s) have vanishing idler/signal overlap; R sign set to +1",
            RuntimeWarning,
            stacklevel=2,
        )
    out = ModeDecomposition(
        values=values[order],
        left=lefts[order],
        right=rights[order],
        parity=tuple(parity[k] for k in order),
        tau=H.tau,
        chi_variant=H.chi_variant,
        n_max=n_max,
        sign_undefined=flags,
    )
    for arr in (out.values, out.left, out.right, out.sign_undefined):
        arr.flags.writeable = False
    return out


def phi_grid(N):
    """Uniform azimuthal grid of ``N`` points on ``[-pi, pi)``."""
    return -math.pi + 2.0 * math.pi * np.arange(N) / N


def check_grid(N, n_max):
    if int(N) != N or N < 4 * n_max:
        raise ValueError(f"grid size N={N} too small for n_max={n_max}; need N >= {4 * n_max}")


def synthesis_matrix(n_max, N):
    """``E[k, n] = exp(i n phi_k) / sqrt(2 pi)`` over the grid."""
    phi = phi_grid(N)
    idx = np.arange(-n_max, n_max + 1)
    return np.exp(1j * np.outer(phi, idx)) / math.sqrt(2.0 * math.pi)


def mode_functions(dec, side="idler", N=None, modes=None):
    """Sampled mode functions, one row per mode.

    ``U_j(phi) = (2 pi)^{-1/2} sum_n exp(i n phi) W_jn`` on the idler side
    and the same sum over ``V_jm`` on the signal side; since the columns of
    ``H`` already carry the flipped signal order, no further flip is needed.
    """
    if N is None:
        N = default_grid(dec.n_max)
    check_grid(N, dec.n_max)
    coeffs = _side_coefficients(dec, side)
    if modes is not None:
        coeffs = coeffs[modes]
    return coeffs @ synthesis_matrix(dec.n_max, N).T


def _side_coefficients(dec, side):
    if side == "idler":
        return dec.left
    if side == "signal":
        return dec.right
    raise ValueError(f"side must be 'idler' or 'signal', got {side!r}")


def default_grid(n_max):
    """Smallest power of two with at least ``4 n_max`` points (64 minimum)."""
    return max(64, 1 << math.ceil(math.log2(4 * n_max)))


@dataclass(frozen=True)
class ModeFunction:
    j: int
    side: str
    phi: np.ndarray
    samples: np.ndarray

    def norm(self):
        return float(np.sum(np.abs(self.samples) ** 2) * 2.0 * math.pi / len(self.samples))


def mode_function(dec, j, side="idler", N=None):
    """Single sampled mode ``U_j`` (idler) or its signal partner."""
    if not 0 <= j < len(dec):
        raise IndexError(f"mode index {j} out of range for {len(dec)} modes")
    if N is None:
        N = default_grid(dec.n_max)
    samples = mode_functions(dec, side, N, modes=[j])[0]
    return ModeFunction(j, side, phi_grid(N), samples)


def schmidt_number(dec):
    """``(sum R^2)^2 / sum R^4``."""
    r = np.abs(np.asarray(dec.values if hasattr(dec, "values") else dec, dtype=float))
    if not np.any(r > 0):
        raise ValueError("Schmidt number undefined for an all-zero spectrum")
    r2 = (r / r.max()) ** 2  # ratio is scale-free; normalising avoids overflow
    return float(r2.sum() ** 2 / np.sum(r2 * r2))
