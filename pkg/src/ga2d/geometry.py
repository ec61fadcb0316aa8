"""Coupling-point geometry: subradiance, BIC supports, DFI pairing, presets.

At the band center, emission travels only along the (1, 1) and (1, -1)
diagonals, so whether a layout radiates is decided by the coupling structure
factor

    F(k) = sum_p g_p exp(-i k . n_p)

on the zero-energy contour k_x +- k_y = +-pi.  A layout is perfectly
subradiant when F vanishes on the whole contour.  Four equal points at the
corners of a diagonal rectangle with odd side lengths are the minimal case;
superpositions of such rectangles (including merged points with summed,
possibly negative, strengths) inherit the property.

A perfectly subradiant atom hosts a bound state in the continuum (BIC): a
zero-energy eigenstate whose photonic part is a standing wave with
alternating sign on the cavities enclosed by the coupling points.  It is
found here as the null vector of the zero-energy linear system restricted to
the sites inside the convex hull of the coupling points; that construction
needs no closed form and covers merged and unequal-strength layouts.

Two subradiant atoms interact without decohering (DFI) when each has some,
but not all, of its coupling points sitting on populated BIC cavities of the
other; the preset catalog collects single-atom, pair, chain, triad, and grid
arrangements built from these rules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atoms import CouplingPoint, GiantAtomSpec, SystemConfig, merge_coupling_points
from .errors import ValidationError
from .lattice import LatticeSpec
from .oracle import hamiltonian_apply
from .state import SystemState

Position = tuple[int, int]

SUBRADIANCE_TOL = 1e-10
SUBRADIANCE_SAMPLES = 512


# ---------------------------------------------------------------------------
# diagonal frame
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagonalFrame:
    """Lattice coordinates rotated onto the (1, 1) / (1, -1) diagonals.

    u_plus = x + y and u_minus = x - y; a single hop along a diagonal changes
    the matching coordinate by 2, so diagonal separations in lattice steps are
    half the u-coordinate differences.
    """

    u_plus: int
    u_minus: int

    @classmethod
    def from_position(cls, position: Position) -> "DiagonalFrame":
        x, y = position
        return cls(u_plus=x + y, u_minus=x - y)

    def to_position(self) -> Position:
        if (self.u_plus + self.u_minus) % 2 != 0:
            raise ValidationError(
                f"diagonal coordinates ({self.u_plus}, {self.u_minus}) do not map to a lattice site")
        return ((self.u_plus + self.u_minus) // 2, (self.u_plus - self.u_minus) // 2)


# ---------------------------------------------------------------------------
# rectangle layouts
# ---------------------------------------------------------------------------

def rectangle_points(center: Position, n_plus: int, n_minus: int, g: float) -> list[CouplingPoint]:
    """Four equal-strength points at the corners of a diagonal rectangle.

    The sides measure (2 n_plus + 1) steps along (1, 1) and (2 n_minus + 1)
    steps along (1, -1); odd side lengths make the layout perfectly subradiant.
    """
    if n_plus < 0 or n_minus < 0:
        raise ValidationError("rectangle extents must be >= 0")
    a = 2 * n_plus + 1
    b = 2 * n_minus + 1
    cx, cy = center
    hs = (a + b) // 2
    hd = (a - b) // 2
    corners = [(cx + hs, cy + hd), (cx + hd, cy + hs), (cx - hs, cy - hd), (cx - hd, cy - hs)]
    return [CouplingPoint(pos, g) for pos in corners]


def rectangle_atom(center: Position, n_plus: int, n_minus: int, g: float,
                   detuning: float = 0.0) -> GiantAtomSpec:
    return GiantAtomSpec(detuning, tuple(rectangle_points(center, n_plus, n_minus, g)))


@dataclass(frozen=True)
class RectangleInfo:
    """A recognized 4-point equal-strength diagonal rectangle."""

    center_u: tuple[int, int]   # (u_plus, u_minus) of the center
    side_plus: int              # side length in steps along (1, 1)
    side_minus: int             # side length in steps along (1, -1)
    strength: float

    @property
    def sides_odd(self) -> bool:
        return self.side_plus % 2 == 1 and self.side_minus % 2 == 1

    @property
    def n_plus(self) -> int:
        return (self.side_plus - 1) // 2

    @property
    def n_minus(self) -> int:
        return (self.side_minus - 1) // 2


def as_rectangle(atom: GiantAtomSpec) -> RectangleInfo | None:
    """Recognize a 4-point equal-strength diagonal rectangle, else None."""
    if atom.P != 4:
        return None
    strengths = atom.strengths()
    if not np.all(strengths == strengths[0]):
        return None
    us = [(x + y, x - y) for x, y in atom.positions()]
    up = sorted({u for u, _ in us})
    um = sorted({v for _, v in us})
    if len(up) != 2 or len(um) != 2:
        return None
    if set(us) != {(p, m) for p in up for m in um}:
        return None
    if (up[1] - up[0]) % 2 != 0 or (um[1] - um[0]) % 2 != 0:
        return None
    return RectangleInfo(
        center_u=((up[0] + up[1]) // 2, (um[0] + um[1]) // 2),
        side_plus=(up[1] - up[0]) // 2,
        side_minus=(um[1] - um[0]) // 2,
        strength=float(strengths[0]),
    )


# ---------------------------------------------------------------------------
# subradiance predicate
# ---------------------------------------------------------------------------

def structure_factor(atom: GiantAtomSpec, kx: np.ndarray, ky: np.ndarray) -> np.ndarray:
    """F(k) = sum_p g_p exp(-i k . n_p) evaluated at the given wave vectors."""
    F = np.zeros(np.broadcast(kx, ky).shape, dtype=np.complex128)
    for p in atom.points:
        x, y = p.position
        F += p.strength * np.exp(-1j * (kx * x + ky * y))
    return F


def is_perfectly_subradiant(atom: GiantAtomSpec, samples: int = SUBRADIANCE_SAMPLES,
                            tol: float = SUBRADIANCE_TOL) -> bool:
    """True iff the structure factor vanishes on the whole zero-energy contour.

    For 4-point equal-strength rectangles the exact parity rule (both diagonal
    sides odd) is used as a fast path; the spectral test covers everything
    else, including merged points and negative strengths.
    """
    if atom.detuning != 0.0:
        raise ValidationError("subradiance predicate is defined at zero detuning only")
    if samples < 128:
        raise ValidationError("subradiance sampling needs samples >= 128")
    rect = as_rectangle(atom)
    if rect is not None:
        return rect.sides_odd
    # Offset samples so symmetric layouts cannot conspire with special points.
    kx = -np.pi + 2.0 * np.pi * (np.arange(samples) + 0.37) / samples
    scale = float(np.sum(np.abs(atom.strengths())))
    for ky in (np.pi - kx, -np.pi - kx, kx - np.pi, kx + np.pi):
        if np.max(np.abs(structure_factor(atom, kx, ky))) >= tol * scale:
            return False
    return True


# ---------------------------------------------------------------------------
# zero-energy bound state (BIC) from the restricted null-space solve
# ---------------------------------------------------------------------------

def _cross(o: Position, a: Position, b: Position) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _convex_hull(points: list[Position]) -> list[Position]:
    """Strict convex hull (counterclockwise) of integer points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Position] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Position] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _interior_sites(points: list[Position]) -> list[Position]:
    """Lattice sites strictly inside the convex hull of the given points."""
    hull = _convex_hull(points)
    if len(hull) < 3:
        return []
    xs = [p[0] for p in hull]
    ys = [p[1] for p in hull]
    out = []
    n = len(hull)
    for x in range(min(xs) + 1, max(xs)):
        for y in range(min(ys) + 1, max(ys)):
            q = (x, y)
            if all(_cross(hull[i], hull[(i + 1) % n], q) > 0 for i in range(n)):
                out.append(q)
    return out


_NEIGHBOR_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def zero_energy_bound_state(atom: GiantAtomSpec, J: float = 1.0,
                            singular_tol: float = 1e-10) -> tuple[float, dict[Position, float]]:
    """Solve H |psi> = 0 for |psi> = alpha |e> + sum_n beta_n |n> with the field
    restricted to the sites enclosed by the coupling points.

    The homogeneous system collects every component of H|psi> that could be
    nonzero (enclosed sites, their neighbors, the coupling points, and the
    atom itself), so any null vector is a genuine zero-energy eigenstate of
    the full lattice Hamiltonian.  Returns (alpha, {site: beta}) normalized to
    unit norm with alpha > 0; raises if no null vector exists.
    """
    strengths = {p.position: p.strength for p in atom.points}
    candidates = [q for q in _interior_sites(list(strengths)) if q not in strengths]
    if not candidates:
        raise ValidationError(
            "restricted solve has no zero eigenvalue: no cavities enclosed by the coupling points")
    candidates.sort()
    col = {q: 1 + i for i, q in enumerate(candidates)}

    row_sites: set[Position] = set(candidates) | set(strengths)
    for (x, y) in candidates:
        for dx, dy in _NEIGHBOR_STEPS:
            row_sites.add((x + dx, y + dy))

    A = np.zeros((len(row_sites) + 1, 1 + len(candidates)))
    for r, m in enumerate(sorted(row_sites)):
        if m in strengths:
            A[r, 0] += strengths[m]
        for dx, dy in _NEIGHBOR_STEPS:
            nb = (m[0] + dx, m[1] + dy)
            if nb in col:
                A[r, col[nb]] -= J
    r = len(row_sites)
    A[r, 0] = atom.detuning
    for pos, g in strengths.items():
        if pos in col:
            A[r, col[pos]] += g

    _, sing, vt = np.linalg.svd(A)
    scale = max(J, float(np.max(np.abs(atom.strengths()))))
    if sing[-1] > singular_tol * scale:
        raise ValidationError(
            f"restricted solve has no zero eigenvalue within tolerance "
            f"(smallest singular value {sing[-1]:.3e})")
    v = vt[-1]
    if abs(v[0]) < 1e-8:
        raise ValidationError("zero-energy solution carries no atomic weight")
    v = v * np.sign(v[0])
    v = v / np.linalg.norm(v)
    weights = {q: float(v[col[q]]) for q in candidates}
    _check_bound_state_residual(atom, J, float(v[0]), weights)
    return float(v[0]), weights


def _check_bound_state_residual(atom: GiantAtomSpec, J: float, alpha: float,
                                weights: dict[Position, float]) -> None:
    """Embed the candidate on a small lattice and apply H through the oracle stencil."""
    support = list(weights) + atom.positions()
    xs = [p[0] for p in support]
    ys = [p[1] for p in support]
    margin = 3
    N = max(max(xs) - min(xs), max(ys) - min(ys)) + 2 * margin + 1
    N = max(N, 4)
    ox, oy = margin - min(xs), margin - min(ys)
    shifted = GiantAtomSpec(atom.detuning, tuple(
        CouplingPoint((p.position[0] + ox, p.position[1] + oy), p.strength) for p in atom.points))
    config = SystemConfig(LatticeSpec(N, J), (shifted,))
    field = np.zeros(N * N, dtype=np.complex128)
    for (x, y), w in weights.items():
        field[(x + ox) * N + (y + oy)] = w
    state = SystemState(np.array([alpha], dtype=np.complex128), field)
    residual = hamiltonian_apply(config, state).norm()
    tol = 1e-8 * max(1.0, J, float(np.max(np.abs(atom.strengths()))))
    if residual > tol:
        raise ValidationError(
            f"bound-state residual {residual:.3e} exceeds tolerance (bad support set)")


# ---------------------------------------------------------------------------
# BIC support
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BicSupport:
    """Photonic peaks of a bound state in the continuum.

    ``peaks`` maps cavity positions to signed weights normalized so the
    largest magnitude is 1; nearest peaks along a diagonal alternate in sign.
    For a single 4-point rectangle the weights are exactly +-1; for
    superposed layouts they are the summed signed contributions.
    """

    peaks: dict[Position, float]

    def positions(self) -> list[Position]:
        return sorted(self.peaks)


def bic_support(atom: GiantAtomSpec) -> BicSupport:
    """Populated cavities of the atom's BIC, from the restricted null solve."""
    if not is_perfectly_subradiant(atom):
        raise ValidationError("atom is not perfectly subradiant; it hosts no BIC")
    _, weights = zero_energy_bound_state(atom)
    w_max = max(abs(w) for w in weights.values())
    peaks = {q: w / w_max for q, w in weights.items() if abs(w) > 1e-9 * w_max}
    first = min(peaks)
    if peaks[first] < 0:
        peaks = {q: -w for q, w in peaks.items()}
    return BicSupport(peaks={q: peaks[q] for q in sorted(peaks)})


# ---------------------------------------------------------------------------
# decoherence-free interaction pairs
# ---------------------------------------------------------------------------

def _u_bbox(positions) -> tuple[int, int, int, int]:
    us = [DiagonalFrame.from_position(p) for p in positions]
    return (min(u.u_plus for u in us), max(u.u_plus for u in us),
            min(u.u_minus for u in us), max(u.u_minus for u in us))


def _all_inside(atom: GiantAtomSpec, support: BicSupport) -> bool:
    """All coupling points within the diagonal bounding box of the support."""
    lo_p, hi_p, lo_m, hi_m = _u_bbox(support.positions())
    for pos in atom.positions():
        u = DiagonalFrame.from_position(pos)
        if not (lo_p <= u.u_plus <= hi_p and lo_m <= u.u_minus <= hi_m):
            return False
    return True


def dfi_pairs(config: SystemConfig) -> list[tuple[int, int]]:
    """Atom index pairs that interact without decohering.

    Pair (i, j) qualifies iff each atom has at least one coupling point on a
    populated BIC cavity of the other, and neither atom lies entirely inside
    the other's BIC support (the braided, rather than nested, arrangement).
    """
    for i, atom in enumerate(config.atoms):
        if atom.detuning != 0.0 or not is_perfectly_subradiant(atom):
            raise ValidationError(f"non-subradiant atom present: atom {i}")
    supports = [bic_support(atom) for atom in config.atoms]
    point_sets = [set(atom.positions()) for atom in config.atoms]
    pairs = []
    for i in range(config.M):
        for j in range(i + 1, config.M):
            touch_ij = bool(point_sets[i] & set(supports[j].peaks))
            touch_ji = bool(point_sets[j] & set(supports[i].peaks))
            if not (touch_ij and touch_ji):
                continue
            if _all_inside(config.atoms[i], supports[j]) or _all_inside(config.atoms[j], supports[i]):
                continue
            pairs.append((i, j))
    return pairs


# ---------------------------------------------------------------------------
# preset catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PresetDefinition:
    """A named arrangement plus the run defaults used when it is dumped to a file."""

    name: str
    N: int
    J: float
    atoms: tuple[GiantAtomSpec, ...]
    dt: float
    t_max: float
    record_stride: int
    snapshot_times: tuple[float, ...]
    initial_atom: int
    notes: str

    def config(self) -> SystemConfig:
        return SystemConfig(LatticeSpec(self.N, self.J), self.atoms)


def _merged_atom(point_lists, detuning: float = 0.0) -> GiantAtomSpec:
    pts: list[CouplingPoint] = []
    for lst in point_lists:
        pts.extend(lst)
    return GiantAtomSpec(detuning, tuple(merge_coupling_points(pts)))


def _shift(center: Position, delta: Position) -> Position:
    return (center[0] + delta[0], center[1] + delta[1])


_DEFAULT_G = 0.2
_G_NOTE = "coupling strength g = 0.2 J is a package default, not part of the layout definition"

# Offset between two 4-point rectangles (side 3 x 1) that braids them: each
# gets one corner on a populated BIC cavity of the other.
_BRAID_STEP = (2, 3)

CHAIN7_ADJACENCY = tuple((i, i + 1) for i in range(6))
GRID9_ADJACENCY = tuple(sorted(
    [(r * 3 + c, r * 3 + c + 1) for r in range(3) for c in range(2)]
    + [(r * 3 + c, (r + 1) * 3 + c) for r in range(2) for c in range(3)]))


def _build_presets() -> dict[str, PresetDefinition]:
    defs = {}

    def add(name, N, atoms, t_max, notes, snapshot_times=None, stride=10, initial_atom=0):
        defs[name] = PresetDefinition(
            name=name, N=N, J=1.0, atoms=tuple(atoms), dt=0.01, t_max=t_max,
            record_stride=stride,
            snapshot_times=tuple(snapshot_times if snapshot_times is not None else (1.0, t_max)),
            initial_atom=initial_atom, notes=notes)

    g = _DEFAULT_G

    c = (50, 50)
    add("single4_1x1", 100, [rectangle_atom(c, 0, 0, g)], 40.0,
        f"single 4-point atom around one cavity; {_G_NOTE}")
    add("single4_3x1", 100, [rectangle_atom(c, 1, 0, g)], 40.0,
        f"single 4-point atom, 3 x 1 diagonal rectangle; {_G_NOTE}")

    c = (100, 100)
    add("single8_constructive", 200,
        [_merged_atom([rectangle_points(c, 1, 0, g), rectangle_points(c, 0, 1, g)])], 80.0,
        f"8-point atom, two concentric subsets with constructive BIC overlap; {_G_NOTE}")
    add("single8_destructive", 200,
        [_merged_atom([rectangle_points(c, 1, 0, g), rectangle_points(c, 0, 0, g)])], 80.0,
        f"8-point atom, two concentric subsets with destructive BIC overlap; {_G_NOTE}")
    add("single8_none", 200,
        [_merged_atom([rectangle_points(c, 1, 0, g),
                       rectangle_points(_shift(c, (5, 1)), 0, 1, g)])], 80.0,
        f"8-point atom, two offset subsets with disjoint BIC peaks; {_G_NOTE}")

    c = (50, 50)
    add("merged6", 100,
        [_merged_atom([rectangle_points(c, 0, 0, 0.1),
                       rectangle_points(_shift(c, (1, 1)), 0, 0, 0.2)])], 40.0,
        "6-point atom from two overlapping rectangles (g1 = 0.1 J, g2 = 0.2 J, "
        "shared points couple at g1 + g2); strengths are package defaults")
    add("merged7", 100,
        [_merged_atom([rectangle_points(c, 1, 0, 0.1),
                       rectangle_points(_shift(c, (3, 1)), 0, 0, 0.2)])], 40.0,
        "7-point atom from two rectangles sharing one corner (g1 = 0.1 J, g2 = 0.2 J, "
        "shared point couples at g1 + g2); strengths are package defaults")

    c = (100, 100)
    add("pair_braided", 200,
        [rectangle_atom(c, 1, 0, g), rectangle_atom(_shift(c, _BRAID_STEP), 1, 0, g)], 200.0,
        f"two braided 4-point atoms exchanging an excitation without decay; {_G_NOTE}")
    add("pair_separate", 200,
        [rectangle_atom(c, 1, 0, g), rectangle_atom(_shift(c, (10, 0)), 1, 0, g)], 200.0,
        f"two separated 4-point atoms, no interaction; {_G_NOTE}")
    add("pair_nested", 200,
        [rectangle_atom(c, 2, 2, g), rectangle_atom(c, 0, 0, g)], 200.0,
        f"small atom nested inside a larger one, no interaction; {_G_NOTE}")

    c = (100, 100)
    loose = [rectangle_atom(_shift(c, (2 * i - 6, 3 * i - 9)), 1, 0, g) for i in range(7)]
    add("chain7_loose", 200, loose, 400.0,
        f"seven atoms, loosely braided chain with nearest-neighbor DFI only; {_G_NOTE}",
        stride=20)
    tight = [rectangle_atom(_shift(c, (i - 3, 0)), 1, 0, g) for i in range(7)]
    add("chain7_tight", 200, tight, 400.0,
        f"seven atoms, tightly braided chain with nearest-neighbor DFI only; {_G_NOTE}",
        stride=20)

    c = (125, 125)
    arm_a = [_shift(c, (-12, 0)), _shift(c, (8, 6)), _shift(c, (0, -10))]
    triad = []
    for i in range(3):
        own = rectangle_points(arm_a[i], 1, 0, g)
        reach = rectangle_points(_shift(arm_a[(i + 2) % 3], _BRAID_STEP), 1, 0, g)
        triad.append(GiantAtomSpec(0.0, tuple(own + reach)))
    add("triad_all_to_all", 250, triad, 250.0,
        f"three 8-point atoms with pairwise DFI between all of them; {_G_NOTE}",
        stride=20)

    c = (100, 100)
    grid = [rectangle_atom(_shift(c, (5 * (col - 1), 5 * (row - 1))), 1, 1, g)
            for row in range(3) for col in range(3)]
    add("grid9", 200, grid, 250.0,
        f"nine 4-point atoms on a 3 x 3 grid, DFI along rows and columns; {_G_NOTE}",
        stride=20)

    return defs


PRESETS: dict[str, PresetDefinition] = _build_presets()


def preset_definition(name: str) -> PresetDefinition:
    if name not in PRESETS:
        raise ValidationError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")
    return PRESETS[name]


def preset(name: str) -> SystemConfig:
    """A validated configuration from the named catalog entry."""
    return preset_definition(name).config()
