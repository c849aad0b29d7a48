"""Phase-space quasiprobability distributions for spin systems under noise.

Core entry points: decompose / evaluate for the W, P, Q, F distributions,
channel evolutions (dephasing, damping families, collective models), the
dissipative Dicke solver, and the nonclassical-volume measure.
"""

__version__ = "0.1.0"

from .angular import HalfInt, SphericalPoint, clebsch_gordan, wigner_3j, wigner_d_matrix
from .multipole import DensityMatrix, MultipoleCoeffs, decompose, multipole_operator, reconstruct
from .qd_eval import QDKind, evaluate, evaluate_grid, kernel_weight
from .measures import QuadratureSpec, negativity_scan, nonclassical_volume
from .fixtures import ScenarioConfig, ScenarioError, atomic_coherent_state, named_state

__all__ = [
    "__version__",
    "HalfInt",
    "SphericalPoint",
    "clebsch_gordan",
    "wigner_3j",
    "wigner_d_matrix",
    "DensityMatrix",
    "MultipoleCoeffs",
    "decompose",
    "reconstruct",
    "multipole_operator",
    "QDKind",
    "evaluate",
    "evaluate_grid",
    "kernel_weight",
    "QuadratureSpec",
    "negativity_scan",
    "nonclassical_volume",
    "ScenarioConfig",
    "ScenarioError",
    "atomic_coherent_state",
    "named_state",
]
