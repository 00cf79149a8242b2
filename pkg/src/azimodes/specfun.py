r"""Exponentially scaled modified Bessel functions of integer order.

The coupling matrices only ever need :math:`e^{-\tau} I_n(\tau)` and the
argument reaches a few thousand, so the unscaled :math:`I_n` (which
overflows near :math:`\tau \approx 700`) is never formed.

For :math:`\tau > 10^{-3}` the row is produced by Miller's backward
recurrence

.. math::
    I_{n-1}(\tau) = I_{n+1}(\tau) + \frac{2n}{\tau} I_n(\tau)

and normalised with the generating-function identity
:math:`I_0 + 2\sum_{n\ge1} I_n = e^{\tau}`, which delivers the scaled values
directly. Tiny arguments use the power series.
"""

import math
from dataclasses import dataclass

import numpy as np

SERIES_CUTOFF = 1e-3

# backward recurrence is rescaled once the iterate passes this size
_RESCALE_AT = 1e250


@dataclass(frozen=True)
class ScaledInfeldRow:
    """Values ``exp(-tau) * I_n(tau)`` for ``n = 0..n_max``."""

    tau: float
    values: np.ndarray

    @property
    def n_max(self):
        return len(self.values) - 1


def _check_args(tau, n_max):
    tau = float(tau)
    if not math.isfinite(tau):
        raise ValueError(f"tau must be finite, got {tau!r}")
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau!r}")
    if isinstance(n_max, (bool, np.bool_)) or int(n_max) != n_max or n_max < 0:
        raise ValueError(f"order must be a nonnegative integer, got {n_max!r}")
    return tau, int(n_max)


def start_order(tau, n_max):
    """Starting order for the backward recurrence.

    The first term is the usual safety margin above ``n_max``; the second
    keeps the normalisation sum complete, which matters when ``n_max`` is
    small compared with ``sqrt(tau)``.
    """
    margin = max(20, math.ceil(2.0 * math.sqrt(n_max * max(tau, 1.0))))
    tail = math.ceil(math.sqrt(80.0 * tau)) + 20
    return max(n_max + margin, tail)


def _series_row(tau, n_max):
    n = np.arange(n_max + 1, dtype=float)
    half = 0.5 * tau
    x = half * half
    # log(tau) - log(2) stays finite where tau / 2 underflows
    log_half = math.log(tau) - math.log(2.0)
    with np.errstate(under="ignore"):
        lead = np.exp(n * log_half - np.array([math.lgamma(k + 1.0) for k in n]))
    term = np.ones_like(n)
    acc = np.ones_like(n)
    for k in range(1, 30):
        term = term * x / (k * (k + n))
        acc = acc + term
        if np.all(term <= 1e-17 * acc):
            break
    return math.exp(-tau) * lead * acc


def _miller_row(tau, n_max):
    n_start = start_order(tau, n_max)
    values = np.zeros(n_max + 1)
    total = 0.0
    y_next, y = 0.0, 1.0
    two_over_tau = 2.0 / tau
    for n in range(n_start, 0, -1):
        if n <= n_max:
            values[n] = y
        total += 2.0 * y
        y_next, y = y, y_next + n * two_over_tau * y
        if y > _RESCALE_AT:
            y /= _RESCALE_AT
            y_next /= _RESCALE_AT
            total /= _RESCALE_AT
            with np.errstate(under="ignore"):
                values[n:] /= _RESCALE_AT
    values[0] = y
    total += y
    return values / total


def scaled_infeld_row(tau, n_max):
    """Evaluate ``exp(-tau) * I_n(tau)`` for every order ``n = 0..n_max``.

    Parameters
    ----------
    tau : float
        Nonnegative, finite argument.
    n_max : int
        Highest order returned.

    Returns
    -------
    ScaledInfeldRow
        Row of ``n_max + 1`` values in ``[0, 1]``. Orders whose scaled value
        lies below the smallest double underflow to zero.

    Raises
    ------
    ValueError
        If ``tau`` is negative or not finite, or ``n_max`` is not a
        nonnegative integer.
    """
    tau, n_max = _check_args(tau, n_max)
    if tau == 0.0:
        values = np.zeros(n_max + 1)
        values[0] = 1.0
    elif tau <= SERIES_CUTOFF:
        values = _series_row(tau, n_max)
    else:
        values = _miller_row(tau, n_max)
    values.flags.writeable = False
    return ScaledInfeldRow(tau=tau, values=values)


def scaled_infeld(n, tau):
    """Single value ``exp(-tau) * I_n(tau)``."""
    _, n = _check_args(tau, n)
    return float(scaled_infeld_row(tau, n).values[n])
