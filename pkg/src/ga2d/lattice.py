"""Square-lattice bath: dispersion, momentum grid, and the exact bath propagator.

The bath is an N x N grid of single-mode cavities with nearest-neighbor
hopping J and periodic boundaries, written in the frame rotating at the
cavity resonance.  Its dispersion,

    omega(k) = -2 J (cos kx + cos ky),

spans the band [-4J, 4J].  At the band center (omega = 0) the group velocity
is parallel to (1, 1) or (1, -1), so excitations propagate only along the
lattice diagonals; this anisotropy is what all the interference effects in
the rest of the package are built on.

The bath propagator exp(-i H_B dt) is diagonal in momentum space, so it is
applied exactly: FFT, multiply each mode by exp(-i omega(k) dt), inverse FFT.
The transform pair is unitary (field amplitudes in momentum space are
phi_k = (1/N) sum_n psi_n e^{+i k.n}), hence norms are preserved without any
rescaling.  Everything is complex128; phase errors would otherwise accumulate
over the 1e4-1e5 steps of a typical run.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .errors import ValidationError
from .state import SystemState

V_MAX_FACTOR = 2.0 * np.sqrt(2.0)  # max |grad omega| in units of J


def fft_workers() -> int:
    """Worker count for the FFT hot path, capped by the GA2D_THREADS env var."""
    try:
        return max(1, int(os.environ.get("GA2D_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class LatticeSpec:
    """N x N cavity lattice with hopping rate J (hbar = 1, energies in J)."""

    N: int
    J: float

    def __post_init__(self):
        if not isinstance(self.N, int) or isinstance(self.N, bool):
            raise ValidationError("lattice.N: must be an integer")
        if self.N < 4:
            raise ValidationError(f"lattice.N: must be >= 4, got {self.N}")
        if not self.J > 0:
            raise ValidationError(f"lattice.J: must be > 0, got {self.J}")

    @property
    def sites(self) -> int:
        return self.N * self.N


def dispersion(k, J: float):
    """Band energy omega(k) = -2J (cos kx + cos ky) for k = (kx, ky)."""
    k = np.asarray(k, dtype=float)
    return -2.0 * J * (np.cos(k[..., 0]) + np.cos(k[..., 1]))


def group_velocity(k, J: float):
    """Gradient of the dispersion, 2J (sin kx, sin ky)."""
    k = np.asarray(k, dtype=float)
    return 2.0 * J * np.stack([np.sin(k[..., 0]), np.sin(k[..., 1])], axis=-1)


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """The N^2 lattice modes in FFT frequency ordering.

    Owns the real-space <-> momentum-space mapping so no other module needs
    to care about transform conventions or mode ordering.
    """

    lattice: LatticeSpec
    k: np.ndarray       # (N,) mode wave numbers in [-pi, pi), fftfreq order
    omega: np.ndarray   # (N, N) mode energies, omega[i, j] = dispersion((k[i], k[j]))

    @classmethod
    def for_lattice(cls, lattice: LatticeSpec) -> "MomentumGrid":
        k = 2.0 * np.pi * scipy.fft.fftfreq(lattice.N)
        kx, ky = np.meshgrid(k, k, indexing="ij")
        omega = -2.0 * lattice.J * (np.cos(kx) + np.cos(ky))
        return cls(lattice=lattice, k=k, omega=omega)

    def to_momentum(self, field_grid: np.ndarray) -> np.ndarray:
        """Unitary transform of an (N, N) real-space field to momentum space."""
        return scipy.fft.ifft2(field_grid, norm="ortho", workers=fft_workers())

    def to_real(self, phi_grid: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`to_momentum`."""
        return scipy.fft.fft2(phi_grid, norm="ortho", workers=fft_workers())

    def phases(self, dt: float) -> np.ndarray:
        """Per-mode propagator phases exp(-i omega(k) dt)."""
        return np.exp(-1j * self.omega * dt)


def propagate_field(field_grid: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """Hot-path bath step: one forward/backward FFT pair around a phase multiply.

    Identical to to_real(phases * to_momentum(...)) because omega(-k) = omega(k);
    the unnormalized fft2/ifft2 pair saves two scaling passes per step.
    """
    w = fft_workers()
    return scipy.fft.ifft2(phases * scipy.fft.fft2(field_grid, workers=w), workers=w)


def apply_bath_propagator(state: SystemState, grid: MomentumGrid, dt: float) -> SystemState:
    """Apply exp(-i H_B dt) exactly; atomic amplitudes are untouched."""
    N = grid.lattice.N
    if state.field_amplitudes.size != N * N:
        raise ValidationError(
            f"state/lattice dimension mismatch: field has {state.field_amplitudes.size} "
            f"amplitudes, lattice has {N * N} cavities")
    field = propagate_field(state.field_amplitudes.reshape(N, N), grid.phases(dt))
    return SystemState(state.atom_amplitudes.copy(), field.ravel())
