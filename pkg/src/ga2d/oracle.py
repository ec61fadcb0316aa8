"""Dense, assumption-free reference: exact diagonalization of the full Hamiltonian.

Used only to validate the fast kernels on small lattices (N <= 40); no
attention is paid to performance beyond caching the eigendecomposition so a
list of output times costs a single factorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atoms import SystemConfig
from .errors import ValidationError
from .state import SystemState

MAX_DENSE_N = 40


@dataclass(eq=False)
class DenseHamiltonian:
    """Full (M + N^2) x (M + N^2) Hermitian matrix in the single-excitation basis.

    Layout: atoms first, then cavities flattened as x * N + y.  The atomic
    block is diag(Delta_i), the coupling block holds the g_ip, and the bath
    block is periodic nearest-neighbor hopping -J.
    """

    config: SystemConfig
    matrix: np.ndarray

    def __post_init__(self):
        self._eigh: tuple[np.ndarray, np.ndarray] | None = None

    def eigendecomposition(self) -> tuple[np.ndarray, np.ndarray]:
        if self._eigh is None:
            vals, vecs = np.linalg.eigh(self.matrix)
            self._eigh = (vals, vecs)
        return self._eigh


def _check_size(config: SystemConfig) -> None:
    if config.lattice.N > MAX_DENSE_N:
        raise ValidationError(
            f"lattice too large for the dense oracle: N={config.lattice.N} > {MAX_DENSE_N}")


def build_dense(config: SystemConfig) -> DenseHamiltonian:
    """Assemble the full Hamiltonian matrix (memory-guarded to N <= 40)."""
    _check_size(config)
    N = config.lattice.N
    J = config.lattice.J
    M = config.M
    size = M + N * N
    H = np.zeros((size, size), dtype=np.complex128)

    def site(x: int, y: int) -> int:
        return M + (x % N) * N + (y % N)

    for x in range(N):
        for y in range(N):
            a = site(x, y)
            for b in (site(x + 1, y), site(x, y + 1)):
                H[a, b] += -J
                H[b, a] += -J

    for i, atom in enumerate(config.atoms):
        H[i, i] = atom.detuning
        for p in atom.points:
            b = site(*p.position)
            H[i, b] += p.strength
            H[b, i] += p.strength
    return DenseHamiltonian(config=config, matrix=H)


def exact_evolve(config: SystemConfig, initial: SystemState, times,
                 dense: DenseHamiltonian | None = None) -> list[SystemState]:
    """Evolve exactly via eigendecomposition, returning one state per requested time."""
    _check_size(config)
    if dense is None:
        dense = build_dense(config)
    vals, vecs = dense.eigendecomposition()
    coeffs = vecs.conj().T @ initial.as_vector()
    M = config.M
    out = []
    for t in times:
        vec = vecs @ (np.exp(-1j * vals * t) * coeffs)
        out.append(SystemState(vec[:M], vec[M:]))
    return out


def hamiltonian_apply(config: SystemConfig, state: SystemState) -> SystemState:
    """H |state> via the local hopping stencil; no matrix is built.

    Independent of both the split-operator kernels and the bound-state linear
    solve, which makes it a cheap residual check for candidate eigenstates.
    """
    N = config.lattice.N
    J = config.lattice.J
    f = state.field_amplitudes.reshape(N, N)
    out_f = -J * (np.roll(f, 1, axis=0) + np.roll(f, -1, axis=0)
                  + np.roll(f, 1, axis=1) + np.roll(f, -1, axis=1))
    out_a = np.empty(config.M, dtype=np.complex128)
    for i, atom in enumerate(config.atoms):
        acc = atom.detuning * state.atom_amplitudes[i]
        for p in atom.points:
            x, y = p.position
            acc += p.strength * f[x, y]
            out_f[x, y] += p.strength * state.atom_amplitudes[i]
        out_a[i] = acc
    return SystemState(out_a, out_f.ravel())
