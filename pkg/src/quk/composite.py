"""Composite dimensions: intra-qudit CNOTs, induced magic, Bezout synthesis, local-structure tests,
the trichotomy classification and the end-to-end density certification pipeline."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .adjointrep import SIGMA_TOL, commutant_dimension
from .arith import bezout, crt_index_map_multi, factorize
from .certgeom import InfinitenessCertificate, SearchStats, certificate_search, ts_universality_bound
from .closure import DEFAULT_CAP, projective_closure
from .errors import BudgetExceededError, CommutantAmbiguityError, ConsistencyError
from .paulicliff import check_unitary, pauli_v, pauli_z, permutation_matrix, phase_order
from .diagonalgates import t_s

RANK_TOL = 1e-9
ALGEBRA_TOL = 1e-8


def cn_gate(p: int, q: int) -> np.ndarray:
    """CN|x>|y> = |x>|y + x mod q> on C^p (x) C^q, row-major index x*q + y."""
    if p < 2 or q < 2:
        raise ValueError(f"cn_gate needs p, q >= 2, got ({p}, {q})")
    x, y = np.divmod(np.arange(p * q), q)
    M = np.zeros((p * q, p * q), dtype=complex)
    M[x * q + (y + x) % q, x * q + y] = 1
    return M


def swap_gate(k: int) -> np.ndarray:
    i, j = np.divmod(np.arange(k * k), k)
    M = np.zeros((k * k, k * k), dtype=complex)
    M[j * k + i, i * k + j] = 1
    return M


def _split(d: int, p: int, q: int) -> list[int]:
    if p < 2 or q < 2:
        raise ValueError(f"factors must be >= 2, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise ValueError(f"factors {p} and {q} are not coprime")
    if d % (p * q):
        raise ValueError(f"{p}*{q} does not divide d={d}")
    rest = d // (p * q)
    if math.gcd(p * q, rest) != 1:
        raise ValueError(f"{p}*{q} is not a coprime factor of d={d}")
    return [p, q] if rest == 1 else [p, q, rest]


def intra_qudit_cn(d: int, p: int, q: int) -> np.ndarray:
    """CN between the coprime CRT factors p and q of a single dimension-d qudit.

    For d = p*q this is Pi^dag CN_{p,q} Pi; when d has further coprime factors the gate acts as
    the identity on the remaining factor.
    """
    moduli = _split(d, p, q)
    local = cn_gate(p, q)
    if len(moduli) == 3:
        local = np.kron(local, np.eye(moduli[2]))
    Pi = permutation_matrix(crt_index_map_multi(moduli))
    return Pi.T @ local @ Pi


def cn_chain(d: int) -> list[tuple[int, int]]:
    """(d_k, d_k+1) pairs of adjacent prime-power factors of d."""
    pp = factorize(d).prime_powers
    return list(zip(pp[:-1], pp[1:]))


@dataclass
class InducedMagic:
    lhs: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    max_abs_deviation: float


def induced_magic_check(p: int, q: int) -> InducedMagic:
    """Compare CN (I_p (x) Z_q^dag) CN^dag with T_q (on dimension p) (x) Z_q^dag."""
    cn = cn_gate(p, q)
    zd = pauli_z(q).conj().T
    lhs = cn @ np.kron(np.eye(p), zd) @ cn.conj().T
    rhs = np.kron(t_s(p, q), zd)
    return InducedMagic(lhs, rhs, float(np.max(np.abs(lhs - rhs))))


def bezout_t_synthesis(p: int, q: int) -> np.ndarray:
    """T_q^a T_p^b on dimension p with a p + b q = 1; equals T_{pq}."""
    if p < 2 or q < 2:
        raise ValueError(f"need p, q >= 2, got ({p}, {q})")
    a, b = bezout(p, q)
    return np.linalg.matrix_power(t_s(p, q), a) @ np.linalg.matrix_power(t_s(p, p), b)


def realign(V: np.ndarray, k: int, l: int) -> np.ndarray:
    """Realignment V[(i1 i2), (j1 j2)] -> R[(i1 j1), (i2 j2)]; V = A (x) B iff rank R = 1."""
    V = np.asarray(V, dtype=complex)
    if V.shape != (k * l, k * l):
        raise ValueError(f"expected a {k * l}x{k * l} operator, got {V.shape}")
    return V.reshape(k, l, k, l).transpose(0, 2, 1, 3).reshape(k * k, l * l)


def operator_schmidt_rank(V: np.ndarray, k: int, l: int, tol: float = RANK_TOL) -> int:
    sv = np.linalg.svd(realign(V, k, l), compute_uv=False)
    return int(np.sum(sv > tol * sv[0])) if sv[0] > 0 else 0


@dataclass
class LocalDecomposition:
    p1: np.ndarray
    p2: np.ndarray
    m: np.ndarray
    scalar: np.ndarray


def partial_traces(M: np.ndarray, k: int, l: int) -> tuple[np.ndarray, np.ndarray]:
    T = np.asarray(M, dtype=complex).reshape(k, l, k, l)
    return np.einsum("ajbj->ab", T), np.einsum("iaib->ab", T)


def decompose_local_correlation(M: np.ndarray, k: int, l: int) -> LocalDecomposition:
    """Split M into scalar, sl(k) (x) I, I (x) sl(l) and sl(k) (x) sl(l) parts."""
    M = np.asarray(M, dtype=complex)
    if M.shape != (k * l, k * l):
        raise ValueError(f"expected a {k * l}x{k * l} operator, got {M.shape}")
    tr1, tr2 = partial_traces(M, k, l)
    scalar = np.trace(M) / (k * l) * np.eye(k * l)
    p1 = np.kron(tr1 / l, np.eye(l)) - scalar
    p2 = np.kron(np.eye(k), tr2 / k) - scalar
    return LocalDecomposition(p1, p2, M - p1 - p2 - scalar, scalar)


class NormalizerClass(str, Enum):
    IN_PRODUCT = "InProduct"
    PRODUCT_TIMES_SWAP = "ProductTimesSwap"
    OUTSIDE = "Outside"


def _algebra_route(V: np.ndarray, k: int, l: int) -> NormalizerClass:
    """Conjugate a basis of p1 (+) p2 and see where it lands."""
    Vd = V.conj().T
    p1_basis = [np.kron(pauli_v(k, (a, b)), np.eye(l)) for a in range(k) for b in range(k) if (a, b) != (0, 0)]
    p2_basis = [np.kron(np.eye(k), pauli_v(l, (a, b))) for a in range(l) for b in range(l) if (a, b) != (0, 0)]
    stay, swap = True, k == l
    for group, own in ((p1_basis, "p1"), (p2_basis, "p2")):
        for B in group:
            parts = decompose_local_correlation(V @ B @ Vd, k, l)
            size = np.linalg.norm(B)
            if np.linalg.norm(parts.m) > ALGEBRA_TOL * size:
                return NormalizerClass.OUTSIDE
            same = parts.p1 if own == "p1" else parts.p2
            other = parts.p2 if own == "p1" else parts.p1
            if np.linalg.norm(other) > ALGEBRA_TOL * size:
                stay = False
            if np.linalg.norm(same) > ALGEBRA_TOL * size:
                swap = False
    if stay:
        return NormalizerClass.IN_PRODUCT
    if swap:
        return NormalizerClass.PRODUCT_TIMES_SWAP
    # mixes p1 and p2 without leaving the local algebra: impossible for a unitary
    raise ConsistencyError("local algebra preserved but neither fixed nor swapped")


def normalizer_membership(V: np.ndarray, k: int, l: int) -> NormalizerClass:
    """Place V relative to the normalizer of SU(k) (x) SU(l), by Schmidt rank and by the algebra test."""
    V = check_unitary(V)
    if operator_schmidt_rank(V, k, l) == 1:
        by_rank = NormalizerClass.IN_PRODUCT
    elif k == l and operator_schmidt_rank(swap_gate(k) @ V, k, l) == 1:
        by_rank = NormalizerClass.PRODUCT_TIMES_SWAP
    else:
        by_rank = NormalizerClass.OUTSIDE
    by_algebra = _algebra_route(V, k, l)
    if by_rank != by_algebra:
        raise ConsistencyError(f"Schmidt-rank route gives {by_rank.value}, algebra route gives {by_algebra.value}")
    return by_rank


def brylinski_check(V: np.ndarray, d: int) -> bool:
    """V is entangling: neither U1 (x) U2 nor (U1 (x) U2) SWAP."""
    V = np.asarray(V, dtype=complex)
    if V.shape != (d * d, d * d):
        raise ValueError(f"expected a {d * d}x{d * d} operator, got {V.shape}")
    return operator_schmidt_rank(V, d, d) > 1 and operator_schmidt_rank(swap_gate(d) @ V, d, d) > 1


class CaseTag(str, Enum):
    PRIME = "PrimeI"
    PRIME_POWER = "PrimePowerII"
    COPRIME = "CoprimeIII"


@dataclass
class TrichotomyVerdict:
    d: int
    case_tag: CaseTag
    parameters: dict
    recommended_gates: list[str]
    bound: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "case": self.case_tag.value,
            "parameters": self.parameters,
            "recommended_gates": self.recommended_gates,
            "bound": self.bound,
        }


def smallest_admissible_s(d: int, modulus: int) -> int:
    """Smallest integer s above the T_s bound for dimension d with s not dividing modulus."""
    s = math.floor(ts_universality_bound(d)) + 1
    while modulus % s == 0:
        s += 1
    return s


def trichotomy_classify(d: int) -> TrichotomyVerdict:
    fz = factorize(d)
    clifford = ["X", "H", "P"]
    if fz.is_prime:
        p = fz.factors[0][0]
        s = smallest_admissible_s(p, phase_order(p))
        return TrichotomyVerdict(d, CaseTag.PRIME, {"p": p, "recommended_s": s}, clifford + [f"Ts({s})"],
                                 ts_universality_bound(p))
    if fz.is_prime_power:
        p, m = fz.factors[0]
        s = smallest_admissible_s(d, d)
        return TrichotomyVerdict(d, CaseTag.PRIME_POWER, {"p": p, "m": m, "recommended_s": s},
                                 clifford + [f"Ts({s})"], ts_universality_bound(d))
    factors = fz.prime_powers
    chain = [f"intraCN({a},{b})" for a, b in cn_chain(d)]
    return TrichotomyVerdict(d, CaseTag.COPRIME, {"factors": factors}, clifford + chain)


class Status(str, Enum):
    DENSE = "Dense"
    FINITE = "Finite"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Budgets:
    max_word_len: int = 8
    max_search_elements: int = 50_000
    closure_cap: int = DEFAULT_CAP

    def __post_init__(self):
        if min(self.max_word_len, self.max_search_elements, self.closure_cap) < 1:
            raise ValueError("budgets must be positive")


@dataclass
class DensityVerdict:
    d: int
    status: Status
    irreducible: Optional[bool]
    certificate: Optional[InfinitenessCertificate] = None
    finite_order: Optional[int] = None
    commutant_dim: Optional[int] = None
    budgets: dict = field(default_factory=dict)
    diagnostic: Optional[str] = None

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "status": self.status.value,
            "irreducible": self.irreducible,
            "commutant_dim": self.commutant_dim,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "finite_order": self.finite_order,
            "budgets": self.budgets,
        }
        if self.finite_order is not None:
            out["order_kind"] = "projective; empirical closure enumeration"
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def density_certify(d: int, generators, budgets: Optional[Budgets] = None,
                    sigma_tol: float = SIGMA_TOL) -> DensityVerdict:
    """Irreducibility via the commutant, then a certificate search, then closure enumeration."""
    budgets = budgets or Budgets()
    gens = [check_unitary(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    for g in gens:
        if g.shape != (d, d):
            raise ValueError(f"generator of shape {g.shape} does not act on dimension {d}")
    used = {
        "max_word_len": budgets.max_word_len,
        "max_search_elements": budgets.max_search_elements,
        "closure_cap": budgets.closure_cap,
    }
    diagnostic = None
    try:
        cdim = commutant_dimension(d, gens, sigma_tol)
        irreducible = cdim == 1
    except (CommutantAmbiguityError, BudgetExceededError) as exc:
        cdim, irreducible, diagnostic = None, None, str(exc)
    if irreducible:
        stats = SearchStats()
        cert = certificate_search(d, gens, budgets.max_word_len, budgets.max_search_elements, stats)
        used["search_depth"] = stats.max_depth
        used["search_elements"] = stats.elements
        if cert is not None:
            return DensityVerdict(d, Status.DENSE, True, cert, commutant_dim=cdim, budgets=used)
    closure = projective_closure(gens, budgets.closure_cap)
    used["closure_count"] = closure.count
    if closure.complete:
        return DensityVerdict(d, Status.FINITE, irreducible, finite_order=closure.count, commutant_dim=cdim,
                              budgets=used, diagnostic=diagnostic)
    if diagnostic is None:
        diagnostic = ("closure cap reached without a certificate; raise the budgets" if irreducible
                      else "adjoint action is reducible, so the group is not dense; closure cap reached")
    return DensityVerdict(d, Status.INCONCLUSIVE, irreducible, commutant_dim=cdim, budgets=used,
                          diagnostic=diagnostic)
