"""Generalized Pauli operators, the Clifford generators X, H, P and operational Clifford membership.

Basis convention: X|j> = |j+1>, Z|j> = w^j |j>, w = exp(2 pi i / d), and V_(a,b) = X^a Z^b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arith import SL2Element, crt_index_map, crt_index_map_multi
from .errors import NotUnitaryError

EPS_UNITARY = 1e-9
EPS_MATCH = 1e-9

_QUARTER_TURNS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def root_of_unity(k, n: int) -> np.ndarray:
    """exp(2 pi i k / n) for integer exponents, exact at quarter turns."""
    k = np.mod(np.asarray(k, dtype=np.int64), n)
    out = np.exp(2j * np.pi * k / n)
    quarter = (4 * k) % n == 0
    if np.any(quarter):
        out = np.where(quarter, np.take(_QUARTER_TURNS, (4 * k // n) % 4), out)
    return out


def phase_order(d: int) -> int:
    """K_d: order of the Heisenberg phase group (d for odd d, 2d for even d)."""
    return d if d % 2 else 2 * d


def check_unitary(U: np.ndarray, tol: float = EPS_UNITARY) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {U.shape}")
    dev = float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))) if U.size else 0.0
    if dev > tol:
        raise NotUnitaryError(dev, tol)
    return U


@dataclass(frozen=True)
class PauliIndex:
    """Label of the Heisenberg element phase * X^a Z^b, phase a K_d-th root of unity."""

    d: int
    a: int
    b: int
    phase_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.d)
        object.__setattr__(self, "b", self.b % self.d)
        object.__setattr__(self, "phase_exp", self.phase_exp % phase_order(self.d))

    @property
    def vector(self) -> tuple[int, int]:
        return (self.a, self.b)

    @property
    def phase(self) -> complex:
        return complex(root_of_unity(self.phase_exp, phase_order(self.d)))


def pauli_x(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def pauli_z(d: int) -> np.ndarray:
    return np.diag(root_of_unity(np.arange(d), d))


def pauli_v(d: int, u) -> np.ndarray:
    """phase * X^a Z^b for a PauliIndex, or X^a Z^b for a plain (a, b) pair."""
    if not isinstance(u, PauliIndex):
        u = PauliIndex(d, *u)
    j = np.arange(d)
    M = np.zeros((d, d), dtype=complex)
    M[(j + u.a) % d, j] = root_of_unity(u.b * j, d)
    if u.phase_exp:
        M *= u.phase
    return M


def hadamard(d: int) -> np.ndarray:
    j = np.arange(d)
    return root_of_unity(np.outer(j, j), d) / math.sqrt(d)


def phase_gate(d: int) -> np.ndarray:
    """P|j> = w^{j(j + rho_d)/2}|j>, rho_d = 0 for even d and 1 for odd d; exponent kept over 2d."""
    rho = d % 2
    j = np.arange(d)
    return np.diag(root_of_unity(j * (j + rho), 2 * d))


def clifford_generators(d: int) -> list[np.ndarray]:
    return [pauli_x(d), hadamard(d), phase_gate(d)]


def commutation_phase(d: int, v, u) -> int:
    """Exponent e with V_v V_u V_v^dag = w^e V_u; e = v_b u_a - v_a u_b mod d."""
    va, vb = v.vector if isinstance(v, PauliIndex) else v
    ua, ub = u.vector if isinstance(u, PauliIndex) else u
    return (vb * ua - va * ub) % d


def is_pauli_up_to_phase(d: int, M: np.ndarray, tol: float = EPS_MATCH,
                         unitary_tol: float = EPS_UNITARY) -> Optional[tuple[PauliIndex, complex]]:
    """Recognize M = c * X^a Z^b; returns (index, c) or None."""
    M = check_unitary(M, unitary_tol)
    if M.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {M.shape}")
    big = np.flatnonzero(np.abs(M).ravel() > 1 / (2 * math.sqrt(d)))
    r, j = divmod(int(big[0]), d)
    a = (r - j) % d
    m = M[r, j]
    if d > 1:
        nxt = M[(r + 1) % d, (j + 1) % d]
        if abs(nxt) < 0.5:
            return None
        b = int(round(np.angle(nxt / m) * d / (2 * np.pi))) % d
    else:
        b = 0
    c = m * complex(root_of_unity(-b * j, d))
    c /= abs(c)
    if np.max(np.abs(M - c * pauli_v(d, (a, b)))) > tol:
        return None
    return PauliIndex(d, a, b), complex(c)


@dataclass
class CliffordWitness:
    member: bool
    sl2_image: Optional[SL2Element] = None
    failure_axis: Optional[str] = None
    images: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "member": self.member,
            "sl2_image": self.sl2_image.as_matrix() if self.sl2_image else None,
            "failure_axis": self.failure_axis,
        }


def clifford_membership(d: int, U: np.ndarray, tol: float = EPS_MATCH,
                        unitary_tol: float = EPS_UNITARY) -> CliffordWitness:
    """Decide U H(d) U^dag = H(d) by conjugating X and Z; the image columns give Psi(U)."""
    U = check_unitary(U, unitary_tol)
    if U.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {U.shape}")
    images = {}
    for axis, P in (("X", pauli_x(d)), ("Z", pauli_z(d))):
        hit = is_pauli_up_to_phase(d, U @ P @ U.conj().T, tol, unitary_tol=max(unitary_tol, 1e-8))
        if hit is None:
            return CliffordWitness(False, failure_axis=axis)
        images[axis] = hit
    (ux, _), (uz, _) = images["X"], images["Z"]
    psi = [[ux.a, uz.a], [ux.b, uz.b]]
    try:
        sl2 = SL2Element.from_matrix(psi, d)
    except ValueError:
        # cannot happen for a genuine normalizer element; surfaces numerical garbage instead of hiding it
        return CliffordWitness(False, failure_axis="det")
    return CliffordWitness(True, sl2, images=images)


def permutation_matrix(pi) -> np.ndarray:
    """Matrix with |x> -> |pi[x]>."""
    pi = np.asarray(pi)
    n = len(pi)
    P = np.zeros((n, n), dtype=complex)
    P[pi, np.arange(n)] = 1
    return P


def crt_permutation(d1: int, d2: int) -> np.ndarray:
    return permutation_matrix(crt_index_map(d1, d2))


def crt_conjugate(d1: int, d2: int, U: np.ndarray) -> np.ndarray:
    """Pi U Pi^dag: carry a dimension d1*d2 operator into the C^d1 (x) C^d2 tensor basis."""
    Pi = crt_permutation(d1, d2)
    U = np.asarray(U, dtype=complex)
    if U.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"expected a {d1 * d2}x{d1 * d2} matrix, got {U.shape}")
    return Pi @ U @ Pi.T


def crt_conjugate_multi(moduli, U: np.ndarray) -> np.ndarray:
    Pi = permutation_matrix(crt_index_map_multi(moduli))
    return Pi @ np.asarray(U, dtype=complex) @ Pi.T


def scaled_hadamard(d: int, c: int) -> np.ndarray:
    """Fourier matrix with kernel w^{c j k}; c = 1 is H_d."""
    j = np.arange(d)
    return root_of_unity(c * np.outer(j, j), d) / math.sqrt(d)


def crt_local_factors(d1: int, d2: int) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Local factors of X_d, H_d, P_d under the CRT relabeling (d = d1*d2).

    The kernel w_d^{jk} splits as w_{d1}^{c1 j1 k1} w_{d2}^{c2 j2 k2} with c1 = d2^{-1} mod d1,
    c2 = d1^{-1} mod d2, so the Fourier and phase factors are the local gates with rescaled roots.
    """
    d = d1 * d2
    c1 = pow(d2, -1, d1) if d1 > 1 else 0
    c2 = pow(d1, -1, d2) if d2 > 1 else 0
    # P_d has phases exp(2 pi i q(j) / 2d), q(j) = j(j + rho_d); split 1/(2d) over coprime parts
    # (2*d1, d2) when d1 is the even factor, (d1, 2*d2) otherwise.
    rho = d % 2
    if d1 % 2 == 0:
        m1, m2 = 2 * d1, d2
    else:
        m1, m2 = d1, 2 * d2
    e1 = pow(m2, -1, m1) if m1 > 1 else 0
    e2 = pow(m1, -1, m2) if m2 > 1 else 0
    j1, j2 = np.arange(d1), np.arange(d2)
    # q(j) mod m_i depends only on j mod d_i (checked in tests)
    p1 = np.diag(root_of_unity(e1 * (j1 * (j1 + rho)), m1))
    p2 = np.diag(root_of_unity(e2 * (j2 * (j2 + rho)), m2))
    return {
        "X": (pauli_x(d1), pauli_x(d2)),
        "H": (scaled_hadamard(d1, c1), scaled_hadamard(d2, c2)),
        "P": (p1, p2),
    }


def projective_deviation(A: np.ndarray, B: np.ndarray) -> float:
    """min over global phases of max|A - e^{i phi} B|, using the phase fixed by the largest entry of B."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    k = int(np.argmax(np.abs(B)))
    ratio = A.ravel()[k] / B.ravel()[k] if abs(B.ravel()[k]) > 0 else 1.0
    if abs(ratio) > 0:
        ratio /= abs(ratio)
    return float(np.max(np.abs(A - ratio * B)))
