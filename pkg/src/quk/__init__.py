"""Qudit Clifford structure, diagonal magic gates and numerical universality certificates."""
from .arith import bezout, crt_index_map, enumerate_sl2, factorize
from .certgeom import certificate_search, proj_distance, spectral_report, ts_universality_bound
from .closure import canonicalize, projective_closure
from .composite import Budgets, density_certify, intra_qudit_cn, trichotomy_classify
from .diagonalgates import PhaseFunction, diagonal_is_clifford, t_s
from .paulicliff import clifford_generators, clifford_membership, hadamard, pauli_x, pauli_z, phase_gate

__version__ = "0.1.0"

__all__ = [
    "Budgets",
    "PhaseFunction",
    "bezout",
    "canonicalize",
    "certificate_search",
    "clifford_generators",
    "clifford_membership",
    "crt_index_map",
    "density_certify",
    "diagonal_is_clifford",
    "enumerate_sl2",
    "factorize",
    "hadamard",
    "intra_qudit_cn",
    "pauli_x",
    "pauli_z",
    "phase_gate",
    "proj_distance",
    "projective_closure",
    "spectral_report",
    "t_s",
    "trichotomy_classify",
    "ts_universality_bound",
]
