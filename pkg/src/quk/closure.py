"""Projective canonical forms and brute-force BFS closure of finitely generated unitary groups."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .paulicliff import check_unitary

DECIMALS = 8
TIE_TOL = 1e-6
MATCH_TOL = 1e-7
DEFAULT_CAP = 20_000


@dataclass(frozen=True)
class ProjectiveCanonicalForm:
    dim: int
    entries: np.ndarray = field(repr=False, compare=False)
    key: bytes = field(repr=False)


def _phase_fixed(U: np.ndarray) -> np.ndarray:
    flat = U.ravel()
    mag = np.abs(flat)
    # near-ties from rounding must resolve to the same entry for projectively equal inputs
    k = int(np.flatnonzero(mag >= mag.max() - TIE_TOL)[0])
    return U * (np.conj(flat[k]) / mag[k])


def canonicalize(U: np.ndarray) -> ProjectiveCanonicalForm:
    """Remove the global phase (largest entry made real positive) and round to a hashable key."""
    U = np.asarray(U, dtype=complex)
    fixed = _phase_fixed(U)
    rounded = np.round(fixed, DECIMALS) + (0.0 + 0.0j)  # folds -0.0 into 0.0
    return ProjectiveCanonicalForm(U.shape[0], fixed, rounded.tobytes())


class ProjectiveSet:
    """Insert-only set of unitaries modulo global phase; hash collisions fall back to an entrywise check."""

    def __init__(self, match_tol: float = MATCH_TOL):
        self.match_tol = match_tol
        self._buckets: dict[bytes, list[np.ndarray]] = {}
        self._count = 0

    def __len__(self) -> int:
        return self._count

    def __contains__(self, U) -> bool:
        cf = canonicalize(U)
        return self._find(cf) is not None

    def _find(self, cf: ProjectiveCanonicalForm):
        for rep in self._buckets.get(cf.key, ()):
            if np.max(np.abs(rep - cf.entries)) <= self.match_tol:
                return rep
        return None

    def add(self, U) -> bool:
        """Insert U; returns False when an equal element (up to phase) is already present."""
        cf = canonicalize(U)
        if self._find(cf) is not None:
            return False
        self._buckets.setdefault(cf.key, []).append(cf.entries)
        self._count += 1
        return True

    def keys(self) -> set[bytes]:
        return set(self._buckets)


@dataclass
class ClosureResult:
    elements: list[np.ndarray] = field(repr=False)
    complete: bool
    cap: int

    @property
    def count(self) -> int:
        return len(self.elements)

    def keys(self) -> set[bytes]:
        return {canonicalize(e).key for e in self.elements}

    def to_dict(self) -> dict:
        return {"complete": self.complete, "count": self.count, "cap": self.cap}


def projective_closure(generators, cap: int = DEFAULT_CAP) -> ClosureResult:
    """BFS over products with generators and their inverses, deduplicated modulo phase.

    complete=False means the cap was hit; that suggests but never proves infiniteness.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    gens = [check_unitary(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    symbols = []
    for g in gens:
        symbols.append(g)
        symbols.append(g.conj().T)
    seen = ProjectiveSet()
    identity = np.eye(n, dtype=complex)
    seen.add(identity)
    elements = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for W in frontier:
            for S in symbols:
                V = W @ S
                if seen.add(V):
                    elements.append(V)
                    nxt.append(V)
                    if len(elements) > cap:
                        return ClosureResult(elements, False, cap)
        frontier = nxt
    return ClosureResult(elements, True, cap)
