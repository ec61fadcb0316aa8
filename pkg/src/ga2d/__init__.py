"""Single-excitation simulator for giant atoms on a 2D lattice of coupled cavities."""

__version__ = "0.1.0"

from .atoms import (
    AtomKernels,
    CouplingPoint,
    GiantAtomSpec,
    SystemConfig,
    apply_atom_propagator,
    effective_coupling,
    effective_two_level_propagator,
    merge_coupling_points,
)
from .errors import QuadratureSingularityError, ValidationError
from .lattice import (
    LatticeSpec,
    MomentumGrid,
    apply_bath_propagator,
    dispersion,
    group_velocity,
)
from .state import SystemState

__all__ = [
    "AtomKernels",
    "CouplingPoint",
    "GiantAtomSpec",
    "LatticeSpec",
    "MomentumGrid",
    "QuadratureSingularityError",
    "SystemConfig",
    "SystemState",
    "ValidationError",
    "apply_atom_propagator",
    "apply_bath_propagator",
    "dispersion",
    "effective_coupling",
    "effective_two_level_propagator",
    "group_velocity",
    "merge_coupling_points",
    "__version__",
]
