"""Single-excitation state vector: M atomic amplitudes plus N^2 field amplitudes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SystemState:
    """Complex amplitudes in the single-excitation manifold.

    ``atom_amplitudes[i]`` is the amplitude of atom i being excited (bath in
    vacuum); ``field_amplitudes[x * N + y]`` is the amplitude of a photon at
    cavity (x, y) with all atoms in the ground state.
    """

    atom_amplitudes: np.ndarray
    field_amplitudes: np.ndarray

    def __post_init__(self):
        self.atom_amplitudes = np.asarray(self.atom_amplitudes, dtype=np.complex128)
        self.field_amplitudes = np.asarray(self.field_amplitudes, dtype=np.complex128)
        if self.atom_amplitudes.ndim != 1 or self.field_amplitudes.ndim != 1:
            raise ValueError("amplitudes must be 1D vectors")

    @classmethod
    def normalized(cls, atom_amplitudes, field_amplitudes) -> "SystemState":
        state = cls(np.array(atom_amplitudes, dtype=np.complex128),
                    np.array(field_amplitudes, dtype=np.complex128))
        nrm = state.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize a zero state")
        state.atom_amplitudes /= nrm
        state.field_amplitudes /= nrm
        return state

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.atom_amplitudes) ** 2)
                             + np.sum(np.abs(self.field_amplitudes) ** 2)))

    def atom_populations(self) -> np.ndarray:
        return np.abs(self.atom_amplitudes) ** 2

    def bath_norm(self) -> float:
        return float(np.sum(np.abs(self.field_amplitudes) ** 2))

    def copy(self) -> "SystemState":
        return SystemState(self.atom_amplitudes.copy(), self.field_amplitudes.copy())

    def as_vector(self) -> np.ndarray:
        """Concatenated (atoms-first) vector, the layout used by the dense oracle."""
        return np.concatenate([self.atom_amplitudes, self.field_amplitudes])
