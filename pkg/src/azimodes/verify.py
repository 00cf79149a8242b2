"""Oracle suite behind ``azimodes verify``.

Each check compares the analytic path with an independent route and
records the worst residual against a fixed tolerance.
"""

import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import oracle
from .coupling import CouplingMatrix, build_coupling
from .decomp import decompose
from .scatter import bogolyubov_gains, fourier_occupations, kernel_fourier_occupations, scattering_kernels
from .specfun import scaled_infeld_row

EPS = np.finfo(float).eps

SVD_GRID = 1024
SVD_MODES = 20


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self):
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


def svd_agreement(analytic, grid, N, modes=SVD_MODES):
    """Worst ``|a - b| / (1e-8 |b| + N eps b_0)`` over the leading modes.

    A value <= 1 means agreement to 1e-8 relative wherever the grid SVD can
    resolve it; its backward error is of order ``N eps b_0``.
    """
    J = min(modes, len(analytic), len(grid))
    a = np.sort(np.abs(analytic))[::-1][:J]
    b = np.asarray(grid)[:J]
    bound = 1e-8 * b + N * EPS * b[0]
    return float(np.max(np.abs(a - b) / bound))


def _perturbed(H, amount):
    if not amount:
        return H
    h = np.array(H.entries)
    c = H.n_max
    h[c, c] += amount
    return CouplingMatrix(H.chi_variant, H.tau, H.n_max, h)


def _bessel_checks(taus):
    out = []
    for tau in taus:
        row = scaled_infeld_row(tau, 50).values
        quad = np.array([oracle.infeld_quadrature(n, tau) for n in range(51)])
        series = np.array([oracle.infeld_series(n, tau) for n in range(51)])
        out.append(Check(f"infeld-quadrature tau={tau:g}", float(np.max(np.abs(quad - row) / row)), 1e-10, "n<=50, relative"))
        out.append(Check(f"infeld-series tau={tau:g}", float(np.max(np.abs(series - row) / row)), 1e-10, "n<=50, relative"))
    return out


def run_checks(level="quick", perturb=0.0):
    """Run the oracle suite.

    ``perturb`` adds a constant to the central coupling entry before
    decomposition; it exists to prove the suite catches a corrupted matrix.
    """
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    taus = [0.0, 0.5, 4.0, 40.0]
    checks = _bessel_checks([0.5, 4.0, 40.0] + ([400.0] if level == "full" else []))

    for chi in ("chi1", "chi2"):
        for tau in taus:
            H = build_coupling(chi, tau)
            proj = oracle.coupling_projection(chi, tau, H.n_max)
            checks.append(
                Check(f"coupling-projection {chi} tau={tau:g}", float(np.max(np.abs(proj.entries - H.entries))), 1e-10, "absolute")
            )
            dec = decompose(_perturbed(H, perturb))
            recon = float(np.max(np.abs(dec.reconstruct() - H.entries)))
            checks.append(Check(f"reconstruction {chi} tau={tau:g}", recon, 1e-10, "absolute"))
            ortho = max(
                float(np.max(np.abs(dec.left @ dec.left.T - np.eye(len(dec))))),
                float(np.max(np.abs(dec.right @ dec.right.T - np.eye(len(dec))))),
            )
            checks.append(Check(f"orthonormality {chi} tau={tau:g}", ortho, 1e-10))
            grid = oracle.kernel_svd(chi, tau, SVD_GRID, compute_modes=False)
            checks.append(
                Check(
                    f"grid-svd {chi} tau={tau:g}",
                    svd_agreement(dec.values, grid.values, SVD_GRID),
                    1.0,
                    "top 20, 1e-8 relative (normalised)",
                )
            )

    if level == "full":
        for chi in ("chi1", "chi2"):
            H = build_coupling(chi, 4.0)
            dec = decompose(_perturbed(H, perturb))
            for gainLG in (0.1, 1.0, 2.0):
                gains = bogolyubov_gains(dec, gainLG)
                ref = oracle.propagate_moments(H, gainLG)
                analytic = max(
                    float(np.max(np.abs(fourier_occupations(dec, gains, "idler") - ref.idler))),
                    float(np.max(np.abs(fourier_occupations(dec, gains, "signal") - ref.signal))),
                )
                checks.append(Check(f"moments-expm {chi} gain={gainLG:g}", analytic, 1e-10, "absolute"))
                kern = scattering_kernels(dec, gains, 512)
                from_kernels = max(
                    float(np.max(np.abs(kernel_fourier_occupations(kern, dec.n_max, "idler") - ref.idler))),
                    float(np.max(np.abs(kernel_fourier_occupations(kern, dec.n_max, "signal") - ref.signal))),
                )
                checks.append(Check(f"kernel-moments {chi} gain={gainLG:g}", from_kernels, 1e-10, "absolute"))
                if gainLG == 1.0:
                    qu = max(kern.quasi_unitarity_residual("idler"), kern.quasi_unitarity_residual("signal"))
                    checks.append(Check(f"quasi-unitarity {chi} N=512", qu, 1e-8))
    return checks


def report_text(checks):
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  {'residual':>10}  {'tolerance':>9}  status"]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{c.name:<{width}}  {c.residual:10.3e}  {c.tolerance:9.1e}  {status}")
    failed = [c.name for c in checks if not c.passed]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    return "\n".join(lines)


def report_json(checks, level, elapsed):
    payload = {
        "level": level,
        "elapsed_s": elapsed,
        "passed": all(c.passed for c in checks),
        "checks": [dict(asdict(c), passed=c.passed) for c in checks],
    }
    return json.dumps(payload, indent=2)


def timed_run(level="quick", perturb=0.0):
    start = time.perf_counter()
    checks = run_checks(level, perturb)
    return checks, time.perf_counter() - start
