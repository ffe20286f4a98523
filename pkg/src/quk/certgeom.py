"""Spectral span, projective distance to the identity, and searching for infiniteness certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .closure import ProjectiveSet
from .paulicliff import check_unitary

EPS_MARGIN = 1e-9
EPS_SCALAR = 1e-9
CERT_RADIUS = 0.5


@dataclass
class SpectralReport:
    eigenphases: list[float]
    span: float
    proj_distance: float
    centering_phase: float

    def to_dict(self) -> dict:
        return {
            "eigenphases": self.eigenphases,
            "span": self.span,
            "proj_distance": self.proj_distance,
            "centering_phase": self.centering_phase,
        }


def spectral_report(U: np.ndarray) -> SpectralReport:
    """Eigenphases (in turns), minimal covering arc length and the projective distance 2 sin(pi l / 2)."""
    U = check_unitary(U, tol=1e-8)
    ev = np.linalg.eigvals(U)
    phases = np.sort(np.mod(np.angle(ev) / (2 * np.pi), 1.0))
    phases[phases > 1.0 - 1e-12] = 0.0  # a turn of 1 - eps is the phase 0
    phases = np.sort(phases)
    if len(phases) == 1:
        return SpectralReport([float(phases[0])], 0.0, 0.0, float(phases[0]))
    gaps = np.diff(np.append(phases, phases[0] + 1.0))
    i = int(np.argmax(gaps))
    span = max(0.0, 1.0 - float(gaps[i]))
    start = phases[(i + 1) % len(phases)]
    center = float(np.mod(start + span / 2, 1.0))
    return SpectralReport([float(p) for p in phases], span, 2 * math.sin(math.pi * span / 2), center)


def proj_distance(U: np.ndarray) -> float:
    return spectral_report(U).proj_distance


def proj_distance_bruteforce(U: np.ndarray, grid: int = 1024, refine: int = 60) -> float:
    """min over phi of ||e^{i phi} U - I||_op by grid search plus golden-section refinement."""
    U = np.asarray(U, dtype=complex)
    eye = np.eye(U.shape[0])

    def f(phi):
        return float(np.linalg.norm(np.exp(1j * phi) * U - eye, 2))

    phis = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    vals = [f(p) for p in phis]
    k = int(np.argmin(vals))
    lo, hi = phis[k] - 2 * np.pi / grid, phis[k] + 2 * np.pi / grid
    g = (math.sqrt(5) - 1) / 2
    a, b = hi - g * (hi - lo), lo + g * (hi - lo)
    fa, fb = f(a), f(b)
    for _ in range(refine):
        if fa < fb:
            hi, b, fb = b, a, fa
            a = hi - g * (hi - lo)
            fa = f(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + g * (hi - lo)
            fb = f(b)
    return min(fa, fb, vals[k])


@dataclass
class InfinitenessCertificate:
    element: np.ndarray = field(repr=False)
    word: list[tuple[int, bool]]
    proj_distance: float
    eigenphases: list[float] = field(default_factory=list)

    def word_labels(self) -> list[str]:
        return [f"g{i}^-1" if inv else f"g{i}" for i, inv in self.word]

    def to_dict(self) -> dict:
        return {"word": self.word_labels(), "proj_distance": self.proj_distance, "eigenphases": self.eigenphases}


def certificate_check(U: np.ndarray, word=None, margin: float = EPS_MARGIN) -> Optional[InfinitenessCertificate]:
    """A certificate iff 0 < dist_proj(U, I) < 1/2, with guard bands on both ends."""
    rep = spectral_report(U)
    if EPS_SCALAR < rep.proj_distance < CERT_RADIUS - margin:
        return InfinitenessCertificate(np.asarray(U, dtype=complex), list(word or []), rep.proj_distance, rep.eigenphases)
    return None


def ts_universality_bound(d: int) -> float:
    """Smallest real s above which T_s on dimension d lies within projective distance 1/2 of I."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return math.pi * (d - 1) / (2 * math.asin(0.25))


@dataclass
class SearchStats:
    max_depth: int = 0
    elements: int = 0
    exhausted: bool = False


def certificate_search(d: int, generators, max_word_len: int = 8, max_elements: int = 50_000,
                       stats: Optional[SearchStats] = None) -> Optional[InfinitenessCertificate]:
    """Breadth-first search over words in the generators and their inverses.

    Words are extended on the right and visited in (length, lexicographic) order over the symbols
    g0, g0^-1, g1, g1^-1, ..., so the first certificate found is a shortest one with a
    deterministic tie-break. Returns None when the budgets run out or the group is exhausted.
    """
    if max_word_len < 1 or max_elements < 1:
        raise ValueError("budgets must be positive")
    gens = [check_unitary(g) for g in generators]
    for g in gens:
        if g.shape != (d, d):
            raise ValueError(f"generator of shape {g.shape} does not act on dimension {d}")
    stats = stats if stats is not None else SearchStats()
    symbols = []
    for i, g in enumerate(gens):
        symbols.append(((i, False), g))
        symbols.append(((i, True), g.conj().T))
    seen = ProjectiveSet()
    seen.add(np.eye(d))
    frontier: list[tuple[list, np.ndarray]] = [([], np.eye(d, dtype=complex))]
    for depth in range(1, max_word_len + 1):
        stats.max_depth = depth
        nxt = []
        for word, W in frontier:
            for sym, S in symbols:
                V = W @ S
                if not seen.add(V):
                    continue
                stats.elements = len(seen)
                cert = certificate_check(V, word + [sym])
                if cert is not None:
                    return cert
                if len(seen) >= max_elements:
                    return None
                nxt.append((word + [sym], V))
        if not nxt:
            stats.exhausted = True
            return None
        frontier = nxt
    return None
