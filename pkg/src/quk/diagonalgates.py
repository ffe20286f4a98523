"""Diagonal phase gates T_zeta: coboundaries, the bicharacter test, the T_s family and orbit mixing."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import factorize, units
from .errors import ConsistencyError
from .paulicliff import clifford_membership, phase_order, root_of_unity

EPS_DFT = 1e-9
EPS_BICHAR = 1e-9


@dataclass(frozen=True)
class PhaseFunction:
    """zeta: Z_d -> U(1), normalized so zeta(0) = 1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).ravel()
        if v.size < 2:
            raise ValueError("a phase function needs d >= 2 values")
        if np.max(np.abs(np.abs(v) - 1)) > 1e-12:
            raise ValueError("phase function values must have unit modulus")
        if v[0] != 1:
            v = v * np.conj(v[0])
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def d(self) -> int:
        return self.values.size

    @classmethod
    def from_exponents(cls, exponents, n: int) -> "PhaseFunction":
        """zeta(x) = exp(2 pi i e_x / n) from integer exponents."""
        return cls(root_of_unity(np.asarray(exponents), n))

    @classmethod
    def ts(cls, d: int, s: int) -> "PhaseFunction":
        return cls.from_exponents(np.arange(d), s)


@dataclass(frozen=True)
class CoboundaryTable:
    d: int
    delta: np.ndarray


def t_zeta(zeta: PhaseFunction) -> np.ndarray:
    return np.diag(zeta.values)


def t_s(d: int, s: int) -> np.ndarray:
    """diag(exp(2 pi i k / s)), k = 0..d-1. t_s(d, d) is Z_d."""
    if d < 2 or s < 1:
        raise ValueError(f"t_s needs d >= 2 and s >= 1, got d={d}, s={s}")
    return np.diag(root_of_unity(np.arange(d), s))


def coboundary(zeta: PhaseFunction) -> CoboundaryTable:
    """delta(x, y) = zeta(x + y) / (zeta(x) zeta(y)), indices mod d; exactly symmetric."""
    v = zeta.values
    d = v.size
    x = np.arange(d)
    conj = np.conj(v)
    table = v[(x[:, None] + x[None, :]) % d] * np.outer(conj, conj)
    # vectorized products can round differently in (x, y) and (y, x); mirror so symmetry is exact
    lower = np.tril_indices(d, -1)
    table[lower] = table.T[lower]
    return CoboundaryTable(d, table)


def bicharacter_test(table: CoboundaryTable, tol: float = EPS_BICHAR) -> bool:
    """b(x, y + z) = b(x, y) b(x, z) over all d^3 triples."""
    b = table.delta
    d = table.d
    x = np.arange(d)
    lhs = b[:, (x[:, None] + x[None, :]) % d]
    rhs = b[:, :, None] * b[:, None, :]
    return bool(np.max(np.abs(lhs - rhs)) <= tol)


def diagonal_is_clifford(zeta: PhaseFunction) -> bool:
    """Bicharacter test, cross-checked against conjugation of X and Z."""
    algebraic = bicharacter_test(coboundary(zeta))
    operational = clifford_membership(zeta.d, t_zeta(zeta)).member
    if algebraic != operational:
        raise ConsistencyError(
            f"bicharacter test says {algebraic}, conjugation test says {operational} for zeta={zeta.values}")
    return algebraic


def ts_divisibility_criterion(d: int, s: int) -> bool:
    """The divisibility predicate s | K_d for T_s being Clifford (K_d = d odd, 2d even)."""
    if d < 2 or s < 2:
        raise ValueError(f"need d, s >= 2, got d={d}, s={s}")
    return phase_order(d) % s == 0


def ts_discrepancies(d_max: int = 6, s_max: int = 12) -> list[dict]:
    """(d, s) pairs where the s | K_d predicate disagrees with operational membership of T_s."""
    out = []
    for d in range(2, d_max + 1):
        for s in range(2, s_max + 1):
            predicted = ts_divisibility_criterion(d, s)
            actual = clifford_membership(d, t_s(d, s)).member
            if predicted != actual:
                fz = factorize(d)
                out.append({
                    "d": d,
                    "s": s,
                    "predicted_clifford": predicted,
                    "operational_clifford": actual,
                    "even_prime_power": fz.is_prime_power and d % 2 == 0,
                })
    return out


def dft(f: np.ndarray) -> np.ndarray:
    """hat f(y) = d^{-1/2} sum_x f(x) w^{-xy}."""
    f = np.asarray(f, dtype=complex)
    return np.fft.fft(f) / math.sqrt(f.size)


def mixing_divisors(d: int) -> tuple[list[int], bool]:
    """Proper divisors to test and whether d is a prime power (outside that case the test is an extension)."""
    fz = factorize(d)
    if fz.is_prime_power:
        p, m = fz.factors[0]
        return [p**k for k in range(1, m)], True
    return [u for u in range(2, d) if d % u == 0], False


@dataclass
class MixingReport:
    d: int
    per_divisor: dict[int, list[int]]
    prime_power: bool
    s: int | None = None

    @property
    def mixing(self) -> bool:
        return all(self.per_divisor[u] for u in self.per_divisor)

    def to_dict(self) -> dict:
        out = {
            "d": self.d,
            "s": self.s,
            "mixing": self.mixing,
            "per_divisor": [{"u": u, "nonzero_units": self.per_divisor[u]} for u in sorted(self.per_divisor)],
        }
        if not self.prime_power:
            out["scope"] = "extension beyond prime-power dimensions"
        return out


def orbit_mixing_test(zeta: PhaseFunction, d: int | None = None, eps: float = EPS_DFT) -> MixingReport:
    """Units b with a nonzero Fourier coefficient of k -> delta(u, k), for each proper divisor u."""
    d = zeta.d if d is None else d
    if d != zeta.d:
        raise ValueError(f"phase function has length {zeta.d}, expected {d}")
    delta = coboundary(zeta).delta
    divs, prime_power = mixing_divisors(d)
    unit_list = units(d)
    per = {}
    for u in divs:
        coef = dft(delta[u])
        per[u] = [b for b in unit_list if abs(coef[b]) > eps]
    return MixingReport(d, per, prime_power)


def ts_mixing_report(d: int, s: int) -> MixingReport:
    rep = orbit_mixing_test(PhaseFunction.ts(d, s), d)
    rep.s = s
    return rep


def ts_dft_closed_form(d: int, s: int, u: int, n: int) -> complex:
    """Fourier coefficient of k -> delta_{T_s}(u, k) at unit frequency n:
    d^{-1/2} (1 - w^{nu})(1 - lambda_s) / (1 - w^{-n}), lambda_s = exp(-2 pi i d / s).
    """
    if math.gcd(n, d) != 1:
        raise ValueError(f"frequency {n} is not a unit mod {d}")
    if not 0 < u < d:
        raise ValueError(f"u must lie strictly between 0 and d, got {u}")
    w = lambda k: complex(root_of_unity(k, d))
    lam = complex(root_of_unity(-d, s))
    return (1 - w(n * u)) * (1 - lam) / (1 - w(-n)) / math.sqrt(d)


def ts_dft_direct(d: int, s: int, u: int, n: int) -> complex:
    """Direct summation of the same coefficient from the T_s phase function."""
    zeta = PhaseFunction.ts(d, s).values
    k = np.arange(d)
    row = zeta[(u + k) % d] / (zeta[u] * zeta[k])
    return complex(np.sum(row * root_of_unity(-n * k, d)) / math.sqrt(d))
