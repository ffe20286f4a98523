"""Adjoint action on sl(d, C) in the Pauli basis, commutant dimension, and SL(2, Z/d) orbit structure."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arith import SL2_CAP, sl2_array
from .errors import BudgetExceededError, CommutantAmbiguityError
from .paulicliff import check_unitary, clifford_membership

SIGMA_TOL = 1e-7
MAX_SYSTEM_ENTRIES = 60_000_000


def pauli_labels(d: int) -> list[tuple[int, int]]:
    """Column order of every AdjointMatrix: (a, b) != (0, 0), lexicographic."""
    return [(a, b) for a in range(d) for b in range(d) if (a, b) != (0, 0)]


@dataclass
class AdjointMatrix:
    source_dim: int
    entries: np.ndarray

    @property
    def dim_alg(self) -> int:
        return self.entries.shape[0]

    @property
    def labels(self) -> list[tuple[int, int]]:
        return pauli_labels(self.source_dim)


def pauli_coefficients(d: int, C: np.ndarray) -> np.ndarray:
    """Coefficients c_(a,b) of C = sum c_(a,b) X^a Z^b, as a (d, d) array indexed [a, b]."""
    j = np.arange(d)
    # the a-th cyclic subdiagonal C[j+a, j] carries the X^a part; its DFT over j yields the Z powers
    diag = C[(j[None, :] + j[:, None]) % d, j[None, :]]
    return np.fft.fft(diag, axis=1) / d


def _adjoint_entries(d: int, U: np.ndarray) -> np.ndarray:
    labels = pauli_labels(d)
    j = np.arange(d)
    Ud = U.conj().T
    cols = []
    for a, b in labels:
        # U X^a Z^b U^dag = (U[:, j+a] * w^{bj}) @ U^dag
        phases = np.exp(2j * np.pi * b * j / d)
        C = (U[:, (j + a) % d] * phases) @ Ud
        coef = pauli_coefficients(d, C)
        cols.append(coef.ravel()[1:])
    return np.array(cols).T


def adjoint_in_pauli_basis(d: int, U: np.ndarray) -> AdjointMatrix:
    """Matrix of V -> U V U^dag on span{V_u : u != 0}; entry (u', u) is the V_u' coefficient."""
    U = check_unitary(U)
    if U.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {U.shape}")
    return AdjointMatrix(d, _adjoint_entries(d, U))


def _generic_hermitian(mats: list[np.ndarray], rng: np.random.Generator) -> np.ndarray:
    """A random Hermitian element of the algebra generated by the given unitaries (words up to length 2)."""
    n = mats[0].shape[0]
    words = list(mats) + [m.conj().T for m in mats]
    words += [a @ b for a in mats for b in mats]
    W = np.zeros((n, n), dtype=complex)
    for w in words:
        W += complex(rng.normal(), rng.normal()) * w
    return W + W.conj().T


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group sorted real eigenvalues whose consecutive gaps are below tol (merging is always safe)."""
    groups, start = [], 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            groups.append(np.arange(start, i))
            start = i
    return groups


@dataclass
class CommutantResult:
    dimension: int
    singular_values: np.ndarray
    basis: list[np.ndarray] = field(repr=False)


def commutant(mats: list[np.ndarray], sigma_tol: float = SIGMA_TOL, seed: int = 0) -> CommutantResult:
    """Null space of M -> (A_i M - M A_i)_i for unitary A_i.

    Any commuting M commutes with a Hermitian element of the generated algebra, so M is block
    diagonal on its eigenspaces; the system is solved on that ansatz only. Clustering eigenvalues
    coarsely can only enlarge the ansatz, never lose solutions.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    rng = np.random.default_rng(seed)
    evals, V = np.linalg.eigh(_generic_hermitian(mats, rng))
    scale = max(1.0, float(np.max(np.abs(evals))))
    blocks = _cluster(evals, 1e-6 * scale)
    unknowns = [(s, t) for blk in blocks for s in blk for t in blk]
    r = len(unknowns)
    if n * n * len(mats) * r > MAX_SYSTEM_ENTRIES:
        raise BudgetExceededError(
            f"commutant system of {n * n * len(mats)} x {r} exceeds {MAX_SYSTEM_ENTRIES} entries")
    Bs = [V.conj().T @ A @ V for A in mats]
    rows = []
    for B in Bs:
        # image of E_st = e_s e_t^T under C -> B C - C B: column t gets B[:, s], row s gets -B[t, :]
        L = np.zeros((n, n, r), dtype=complex)
        for k, (s, t) in enumerate(unknowns):
            L[:, t, k] += B[:, s]
            L[s, :, k] -= B[t, :]
        rows.append(L.reshape(n * n, r))
    system = np.vstack(rows)
    _, sv, vh = np.linalg.svd(system, full_matrices=False)
    band = (sv > sigma_tol / 10) & (sv < sigma_tol * 10)
    if np.any(band):
        raise CommutantAmbiguityError(np.sort(sv), sigma_tol)
    null = vh[sv < sigma_tol].conj()
    basis = []
    for vec in null:
        C = np.zeros((n, n), dtype=complex)
        for k, (s, t) in enumerate(unknowns):
            C[s, t] = vec[k]
        basis.append(V @ C @ V.conj().T)
    dim = len(basis)
    return CommutantResult(max(dim, 1), np.sort(sv), basis)


def adjoint_matrices(d: int, gates) -> list[np.ndarray]:
    gates = list(gates)
    if not gates:
        raise ValueError("gate list is empty")
    return [adjoint_in_pauli_basis(d, g).entries for g in gates]


def commutant_dimension(d: int, gates, sigma_tol: float = SIGMA_TOL) -> int:
    """dim of the commutant of the adjoint action; 1 iff the generated group acts irreducibly on sl(d)."""
    return commutant(adjoint_matrices(d, gates), sigma_tol).dimension


@dataclass
class Orbit:
    invariant: int
    members: list[tuple[int, int]]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class OrbitTable:
    d: int
    orbits: list[Orbit]
    gcd_complete: Optional[bool] = None

    def to_dict(self) -> dict:
        return {"d": self.d, "orbits": [{"invariant": o.invariant, "size": o.size} for o in self.orbits]}


def orbit_decomposition(d: int, cap: int = SL2_CAP) -> OrbitTable:
    """Orbits of the enumerated SL(2, Z/d) on Z_d^2 minus 0, ordered by gcd invariant."""
    mats = sl2_array(d, cap).reshape(-1, 2, 2)
    seen: set[tuple[int, int]] = set()
    orbits = []
    for u in pauli_labels(d):
        if u in seen:
            continue
        img = (mats @ np.array(u)) % d
        members = sorted({(int(x), int(y)) for x, y in img})
        seen.update(members)
        inv = {math.gcd(math.gcd(x, y), d) for x, y in members}
        orbits.append(Orbit(min(inv), members))
        if len(inv) != 1:
            raise AssertionError(f"gcd invariant not constant on orbit of {u} (d={d})")
    orbits.sort(key=lambda o: (o.invariant, o.members[0]))
    invariants = [o.invariant for o in orbits]
    return OrbitTable(d, orbits, gcd_complete=len(set(invariants)) == len(invariants))


def adjoint_report(d: int, gates=None) -> dict:
    """Report JSON: commutant dimension for the gates (Clifford generators by default) plus SL(2) orbits."""
    from .paulicliff import clifford_generators

    gates = clifford_generators(d) if gates is None else gates
    table = orbit_decomposition(d)
    return {"d": d, "commutant_dim": commutant_dimension(d, gates), "orbits": table.to_dict()["orbits"]}


@dataclass
class InvariantSubspace:
    dim: int
    pauli_indices: Optional[list[tuple[int, int]]]
    basis: np.ndarray = field(repr=False)


def _index_orbits(d: int, gates) -> Optional[list[list[tuple[int, int]]]]:
    """Orbits of the index permutations u -> Psi(g) u, or None if some gate is not Clifford."""
    images = []
    for g in gates:
        w = clifford_membership(d, g)
        if not w.member:
            return None
        images.append(w.sl2_image)
    seen: set = set()
    out = []
    for u in pauli_labels(d):
        if u in seen:
            continue
        orbit, stack = {u}, [u]
        while stack:
            x = stack.pop()
            for m in images:
                y = m.apply(x)
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        seen |= orbit
        out.append(sorted(orbit))
    return out


def invariant_subspace_report(d: int, gates, sigma_tol: float = SIGMA_TOL, seed: int = 0) -> list[InvariantSubspace]:
    """Invariant subspaces of the adjoint action of the gates.

    Clifford gates: Pauli index orbits, merged whenever the commutant intertwines two of them,
    so each block is a sum of whole isotypic components spanned by Pauli basis vectors.
    Other gates: eigenspaces of a random Hermitian commutant element.
    """
    gates = list(gates)
    adj = adjoint_matrices(d, gates)
    comm = commutant(adj, sigma_tol, seed)
    labels = pauli_labels(d)
    n = len(labels)
    orbits = _index_orbits(d, gates)
    if orbits is not None:
        pos = {u: i for i, u in enumerate(labels)}
        parent = list(range(len(orbits)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        where = np.empty(n, dtype=int)
        for k, orb in enumerate(orbits):
            where[[pos[u] for u in orb]] = k
        for M in comm.basis:
            rows, cols = np.nonzero(np.abs(M) > 1e-8)
            for r_, c_ in zip(rows, cols):
                a, b = find(where[r_]), find(where[c_])
                if a != b:
                    parent[a] = b
        merged: dict[int, list] = {}
        for k, orb in enumerate(orbits):
            merged.setdefault(find(k), []).extend(orb)
        out = []
        for members in merged.values():
            members = sorted(members)
            basis = np.eye(n)[:, [pos[u] for u in members]]
            out.append(InvariantSubspace(len(members), members, basis))
        out.sort(key=lambda s: (-s.dim, s.pauli_indices[0]))
        return out
    rng = np.random.default_rng(seed + 1)
    K = sum(complex(rng.normal(), rng.normal()) * M for M in comm.basis)
    K = K + K.conj().T
    evals, vecs = np.linalg.eigh(K)
    scale = max(1.0, float(np.max(np.abs(evals))))
    out = [InvariantSubspace(len(g), None, vecs[:, g]) for g in _cluster(evals, 1e-6 * scale)]
    out.sort(key=lambda s: -s.dim)
    return out
