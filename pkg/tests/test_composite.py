import math

import numpy as np
import pytest

from conftest import haar_unitary
from quk.arith import enumerate_sl2
from quk.composite import (
    Budgets,
    CaseTag,
    NormalizerClass,
    Status,
    bezout_t_synthesis,
    brylinski_check,
    cn_chain,
    cn_gate,
    decompose_local_correlation,
    density_certify,
    induced_magic_check,
    intra_qudit_cn,
    normalizer_membership,
    operator_schmidt_rank,
    swap_gate,
    trichotomy_classify,
)
from quk.certgeom import ts_universality_bound
from quk.diagonalgates import t_s
from quk.paulicliff import clifford_generators, crt_conjugate, hadamard, pauli_x

COPRIME_PAIRS = [(p, q) for p in range(2, 10) for q in range(2, 10) if math.gcd(p, q) == 1]


def test_cn_examples():
    assert np.array_equal(cn_gate(2, 2), [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    e = np.eye(6)
    assert np.array_equal(cn_gate(2, 3) @ e[:, 1 * 3 + 2], e[:, 1 * 3 + 0])


@pytest.mark.parametrize("p, q", [(2, 2), (2, 3), (3, 3), (4, 6)])
def test_cn_order(p, q):
    assert np.allclose(np.linalg.matrix_power(cn_gate(p, q), q), np.eye(p * q))


def _intra_cn_oracle(d, p, q):
    """Act on x via its residues: (x mod p, x mod q) -> (x mod p, x mod q + x mod p)."""
    M = np.zeros((d, d))
    for x in range(d):
        r1, r2 = x % p, (x % q + x % p) % q
        y = next(y for y in range(d) if y % p == r1 and y % q == r2 and y % (d // (p * q) or 1) == x % (d // (p * q)))
        M[y, x] = 1
    return M


@pytest.mark.parametrize("d, p, q", [(6, 2, 3), (6, 3, 2), (12, 4, 3), (20, 4, 5), (30, 2, 3), (30, 5, 6)])
def test_intra_cn_matches_residue_oracle(d, p, q):
    assert np.array_equal(intra_qudit_cn(d, p, q), _intra_cn_oracle(d, p, q))


def test_intra_cn_properties():
    V = intra_qudit_cn(6, 2, 3)
    assert np.array_equal(crt_conjugate(2, 3, V), cn_gate(2, 3))
    assert np.all(V.sum(axis=0) == 1) and np.all(V.sum(axis=1) == 1)
    W = intra_qudit_cn(12, 4, 3)
    assert np.allclose(np.linalg.matrix_power(W, 3), np.eye(12))


@pytest.mark.parametrize("d, p, q", [(6, 2, 2), (8, 2, 4), (7, 2, 3), (12, 2, 3)])
def test_intra_cn_rejects_bad_factors(d, p, q):
    with pytest.raises(ValueError):
        intra_qudit_cn(d, p, q)


def test_cn_chain():
    assert cn_chain(6) == [(2, 3)]
    assert cn_chain(60) == [(4, 3), (3, 5)]
    assert cn_chain(8) == []


@pytest.mark.parametrize("p", range(2, 10))
@pytest.mark.parametrize("q", range(2, 10))
def test_induced_magic_all_pairs(p, q):
    assert induced_magic_check(p, q).max_abs_deviation < 1e-12


@pytest.mark.parametrize("p, q", COPRIME_PAIRS)
def test_bezout_synthesis(p, q):
    assert np.max(np.abs(bezout_t_synthesis(p, q) - t_s(p, p * q))) < 1e-12


def test_bezout_synthesis_examples():
    assert np.allclose(bezout_t_synthesis(2, 3), np.diag([1, np.exp(2j * np.pi / 6)]))
    assert np.allclose(bezout_t_synthesis(3, 4), np.diag(np.exp(2j * np.pi * np.arange(3) / 12)))
    with pytest.raises(ValueError):
        bezout_t_synthesis(3, 1)
    with pytest.raises(ValueError):
        bezout_t_synthesis(4, 6)


def test_schmidt_rank_examples(rng):
    A, B = haar_unitary(2, rng), haar_unitary(3, rng)
    assert operator_schmidt_rank(np.kron(A, B), 2, 3) == 1
    assert operator_schmidt_rank(cn_gate(2, 3), 2, 3) == 2
    assert operator_schmidt_rank(swap_gate(2), 2, 2) == 4


def test_swap_gate():
    S = swap_gate(3)
    A, B = np.diag([1, 2, 3]), np.diag([4, 5, 6])
    assert np.allclose(S @ np.kron(A, B) @ S.T, np.kron(B, A))


@pytest.mark.parametrize("k, l", [(2, 3), (3, 4)])
def test_decomposition_orthogonal_and_exact(k, l):
    rng = np.random.default_rng(k * 10 + l)
    for _ in range(100):
        M = rng.normal(size=(k * l, k * l)) + 1j * rng.normal(size=(k * l, k * l))
        parts = decompose_local_correlation(M, k, l)
        pieces = [parts.p1, parts.p2, parts.m, parts.scalar]
        assert np.max(np.abs(sum(pieces) - M)) < 1e-10
        for i in range(4):
            for j in range(i + 1, 4):
                assert abs(np.vdot(pieces[i], pieces[j])) < 1e-10


def test_decomposition_examples():
    A = np.diag([1.0, -1.0])
    B = np.diag([1.0, 0, -1.0])
    d1 = decompose_local_correlation(np.kron(A, np.eye(3)), 2, 3)
    assert np.allclose(d1.p1, np.kron(A, np.eye(3))) and np.allclose(d1.m, 0)
    d2 = decompose_local_correlation(np.kron(A, B), 2, 3)
    assert np.allclose(d2.m, np.kron(A, B)) and np.allclose(d2.p1, 0) and np.allclose(d2.p2, 0)
    d3 = decompose_local_correlation(np.eye(6), 2, 3)
    assert np.allclose(d3.scalar, np.eye(6)) and np.allclose(d3.p1 + d3.p2 + d3.m, 0)


def test_normalizer_examples(rng):
    assert normalizer_membership(np.kron(hadamard(2), hadamard(3)), 2, 3) is NormalizerClass.IN_PRODUCT
    assert normalizer_membership(swap_gate(2), 2, 2) is NormalizerClass.PRODUCT_TIMES_SWAP
    assert normalizer_membership(cn_gate(2, 3), 2, 3) is NormalizerClass.OUTSIDE


@pytest.mark.parametrize("k, l", [(2, 2), (2, 3), (3, 3)])
def test_normalizer_routes_agree_on_battery(k, l, rng):
    battery = [np.kron(haar_unitary(k, rng), haar_unitary(l, rng)) for _ in range(3)]
    battery += [haar_unitary(k * l, rng) for _ in range(3)]
    battery.append(cn_gate(k, l))
    if k == l:
        battery += [swap_gate(k) @ np.kron(haar_unitary(k, rng), haar_unitary(l, rng)) for _ in range(3)]
    for V in battery:
        normalizer_membership(V, k, l)  # raises on disagreement


def test_brylinski_examples(rng):
    assert brylinski_check(cn_gate(2, 2), 2)
    assert not brylinski_check(np.kron(haar_unitary(3, rng), haar_unitary(3, rng)), 3)
    assert not brylinski_check(swap_gate(3), 3)


@pytest.mark.parametrize("d, case", [(5, CaseTag.PRIME), (7, CaseTag.PRIME), (9, CaseTag.PRIME_POWER),
                                     (36, CaseTag.COPRIME), (6, CaseTag.COPRIME)])
def test_trichotomy_cases(d, case):
    assert trichotomy_classify(d).case_tag is case


def test_trichotomy_parameters():
    v = trichotomy_classify(8)
    assert v.parameters == {"p": 2, "m": 3, "recommended_s": 44}
    assert v.bound == pytest.approx(43.52, abs=0.01)
    assert trichotomy_classify(4).parameters["recommended_s"] == 19
    assert trichotomy_classify(36).parameters == {"factors": [4, 9]}
    assert trichotomy_classify(6).recommended_gates == ["X", "H", "P", "intraCN(2,3)"]


@pytest.mark.parametrize("d", [4, 8, 9, 16, 25, 27, 32, 49, 64, 81])
def test_prime_power_recommendation_admissible(d):
    s = trichotomy_classify(d).parameters["recommended_s"]
    assert s > ts_universality_bound(d) and d % s != 0
    assert all(d % t == 0 for t in range(math.floor(ts_universality_bound(d)) + 1, s))


def test_budgets_validate():
    with pytest.raises(ValueError):
        Budgets(max_word_len=0)


def test_pipeline_qubit_clifford_finite():
    v = density_certify(2, clifford_generators(2))
    assert v.status is Status.FINITE and v.finite_order == 24 and v.irreducible
    out = v.to_dict()
    assert set(out) >= {"d", "status", "irreducible", "certificate", "finite_order", "budgets"}
    assert out["certificate"] is None


def test_pipeline_qubit_clifford_t_dense():
    v = density_certify(2, clifford_generators(2) + [t_s(2, 8)])
    assert v.status is Status.DENSE and v.commutant_dim == 1
    assert v.certificate.proj_distance == pytest.approx(0.3902, abs=1e-4)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_pipeline_clifford_orders(d):
    v = density_certify(d, clifford_generators(d))
    assert v.status is Status.FINITE
    assert v.finite_order == d * d * len(enumerate_sl2(d))
    assert v.irreducible is (d != 4)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_prime_recommendations_are_dense(d):
    s = trichotomy_classify(d).parameters["recommended_s"]
    assert density_certify(d, clifford_generators(d) + [t_s(d, s)]).status is Status.DENSE


def test_prime_power_s24_dense():
    assert density_certify(4, clifford_generators(4) + [t_s(4, 24)]).status is Status.DENSE


def test_reducible_set_is_never_dense():
    v = density_certify(4, [pauli_x(4), t_s(4, 24)], Budgets(closure_cap=500))
    assert v.status is Status.INCONCLUSIVE and v.irreducible is False
    assert "reducible" in v.diagnostic


def test_pipeline_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        density_certify(3, clifford_generators(2))


@pytest.mark.slow
def test_pipeline_d6_coprime_dense():
    v = density_certify(6, clifford_generators(6) + [intra_qudit_cn(6, 2, 3)])
    assert v.status is Status.DENSE
    assert len(v.certificate.word) <= 8
