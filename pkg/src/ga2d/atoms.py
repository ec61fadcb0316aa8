"""Giant atoms and the combined atom+interaction propagator U_A.

Each atom couples to the bath at several cavities with real strengths g_p
(signs allowed).  Although the atom talks to P cavities, U_A factorizes atom
by atom: only the field component along the normalized coupling vector
v_p = g_p / G (with G = sqrt(sum g_p^2)) couples to the atom, through the
effective two-level Hamiltonian

    H_eff = [[Delta, G], [G, 0]].

Applying U_A(dt) = exp(-i (H_A + H_int) dt) therefore reduces, per atom, to a
2x2 unitary acting on (atom amplitude, field-along-v) plus a rank-1 update of
the coupled cavities; the orthogonal field complement is untouched.  Cost is
O(M + sum_i P_i), independent of the lattice size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .lattice import LatticeSpec
from .state import SystemState

Position = tuple[int, int]


@dataclass(frozen=True)
class CouplingPoint:
    """One attachment point of an atom: a cavity coordinate and a real strength."""

    position: Position
    strength: float

    def __post_init__(self):
        x, y = self.position
        if x != int(x) or y != int(y):
            raise ValidationError(f"coupling point position must be integer, got {self.position}")
        object.__setattr__(self, "position", (int(x), int(y)))
        if self.strength == 0.0:
            raise ValidationError(f"coupling point at {self.position} has zero strength")


@dataclass(frozen=True)
class GiantAtomSpec:
    """A two-level atom with detuning Delta from the band center and P >= 1 points."""

    detuning: float
    points: tuple[CouplingPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) < 1:
            raise ValidationError("atom must have at least one coupling point")
        positions = [p.position for p in self.points]
        if len(set(positions)) != len(positions):
            raise ValidationError(
                "atom has two coupling points at the same cavity; "
                "run merge_coupling_points before construction")

    @property
    def P(self) -> int:
        return len(self.points)

    def positions(self) -> list[Position]:
        return [p.position for p in self.points]

    def strengths(self) -> np.ndarray:
        return np.array([p.strength for p in self.points], dtype=float)


@dataclass(frozen=True)
class SystemConfig:
    """Lattice plus atoms; validated so that no cavity couples to two atoms."""

    lattice: LatticeSpec
    atoms: tuple[GiantAtomSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        N = self.lattice.N
        seen: dict[Position, int] = {}
        for i, atom in enumerate(self.atoms):
            for p in atom.points:
                x, y = p.position
                if not (0 <= x < N and 0 <= y < N):
                    raise ValidationError(
                        f"atoms[{i}]: coupling point {p.position} outside lattice [0, {N - 1}]^2")
                if p.position in seen:
                    raise ValidationError(
                        f"cavity coupled to multiple atoms: {p.position} "
                        f"(atoms {seen[p.position]} and {i})")
                seen[p.position] = i

    @property
    def M(self) -> int:
        return len(self.atoms)

    @property
    def state_size(self) -> int:
        return self.M + self.lattice.sites


def merge_coupling_points(points) -> list[CouplingPoint]:
    """Collapse points sharing a position into one with the summed strength.

    Points whose strengths cancel exactly are removed, which makes superposing
    two overlapping layouts (with positive or negative strengths) legal.
    """
    order: list[Position] = []
    total: dict[Position, float] = {}
    for p in points:
        if p.position not in total:
            order.append(p.position)
            total[p.position] = 0.0
        total[p.position] += p.strength
    return [CouplingPoint(pos, total[pos]) for pos in order if total[pos] != 0.0]


def effective_coupling(atom: GiantAtomSpec) -> float:
    """Effective strength G = sqrt(sum_p g_p^2) of the atom's coupling vector."""
    return float(np.sqrt(np.sum(atom.strengths() ** 2)))


def effective_two_level_propagator(atom: GiantAtomSpec, dt: float) -> np.ndarray:
    """exp(-i H_eff dt) for H_eff = [[Delta, G], [G, 0]], in closed form."""
    if not np.isfinite(dt):
        raise ValidationError("dt must be finite")
    delta = atom.detuning
    G = effective_coupling(atom)
    half = 0.5 * delta
    omega = np.hypot(half, G)  # > 0 because G > 0
    phase = np.exp(-1j * half * dt)
    c = np.cos(omega * dt)
    s = np.sin(omega * dt) / omega
    u11 = phase * (c - 1j * half * s)
    u12 = phase * (-1j * G * s)
    u22 = phase * (c + 1j * half * s)
    return np.array([[u11, u12], [u12, u22]], dtype=np.complex128)


class AtomKernels:
    """Per-atom index and weight tables for the rank-1 U_A update.

    Precomputed once per config; ``apply`` then runs in O(M + sum P_i) and is
    reused by both the public propagator and the evolver's inner loop.  Atoms
    touch disjoint cavities (config invariant), so the per-atom updates
    commute and their order is irrelevant.
    """

    def __init__(self, config: SystemConfig):
        N = config.lattice.N
        self.config = config
        self.flat_indices: list[np.ndarray] = []
        self.weights: list[np.ndarray] = []
        for atom in config.atoms:
            pos = np.array(atom.positions(), dtype=np.int64)
            g = atom.strengths()
            self.flat_indices.append(pos[:, 0] * N + pos[:, 1])
            self.weights.append(g / np.sqrt(np.sum(g ** 2)))

    def propagator_elements(self, dt: float) -> list[tuple[complex, complex, complex]]:
        out = []
        for atom in self.config.atoms:
            u = effective_two_level_propagator(atom, dt)
            out.append((u[0, 0], u[0, 1], u[1, 1]))
        return out

    def apply(self, atom_amplitudes: np.ndarray, field_flat: np.ndarray,
              elements: list[tuple[complex, complex, complex]]) -> None:
        """In-place U_A application on raw amplitude arrays."""
        for i, (idx, v) in enumerate(zip(self.flat_indices, self.weights)):
            u11, u12, u22 = elements[i]
            c = atom_amplitudes[i]
            s = np.dot(v, field_flat[idx])  # field overlap with the coupling vector
            atom_amplitudes[i] = u11 * c + u12 * s
            field_flat[idx] += v * (u12 * c + (u22 - 1.0) * s)


def apply_atom_propagator(state: SystemState, config: SystemConfig, dt: float) -> SystemState:
    """Apply U_A(dt) = exp(-i (H_A + H_int) dt); uncoupled cavities are untouched."""
    if state.atom_amplitudes.size != config.M:
        raise ValidationError(
            f"state has {state.atom_amplitudes.size} atom amplitudes, config has {config.M} atoms")
    if state.field_amplitudes.size != config.lattice.sites:
        raise ValidationError(
            f"state/lattice dimension mismatch: field has {state.field_amplitudes.size} "
            f"amplitudes, lattice has {config.lattice.sites} cavities")
    out = state.copy()
    kernels = AtomKernels(config)
    kernels.apply(out.atom_amplitudes, out.field_amplitudes, kernels.propagator_elements(dt))
    return out
