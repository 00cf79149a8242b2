"""Azimuthal eigenmodes of strongly non-degenerate parametric down-conversion."""

__version__ = "0.1.0"

from .coupling import CouplingMatrix, build_coupling, build_h1, build_h2, truncation_order
from .decomp import ModeDecomposition, decompose, mode_function, mode_functions, schmidt_number
from .physics import ExperimentConfig, gain_of_frequency, load_config, tau_of_frequency
from .scan import mode_gallery, scan_k
from .scatter import (
    bogolyubov_gains,
    effective_mode_number,
    intensity,
    scattering_kernels,
    shifted_mode_curves,
)
from .specfun import scaled_infeld, scaled_infeld_row

__all__ = [
    "CouplingMatrix",
    "ExperimentConfig",
    "ModeDecomposition",
    "bogolyubov_gains",
    "build_coupling",
    "build_h1",
    "build_h2",
    "decompose",
    "effective_mode_number",
    "gain_of_frequency",
    "intensity",
    "load_config",
    "mode_function",
    "mode_functions",
    "mode_gallery",
    "scaled_infeld",
    "scaled_infeld_row",
    "scan_k",
    "scattering_kernels",
    "schmidt_number",
    "shifted_mode_curves",
    "tau_of_frequency",
    "truncation_order",
]
