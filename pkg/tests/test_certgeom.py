import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import haar_unitary
from quk.certgeom import (
    SearchStats,
    certificate_check,
    certificate_search,
    proj_distance,
    proj_distance_bruteforce,
    spectral_report,
    ts_universality_bound,
)
from quk.composite import intra_qudit_cn
from quk.diagonalgates import t_s
from quk.paulicliff import clifford_generators, pauli_z


def test_spectral_examples():
    rep = spectral_report(np.eye(3))
    assert rep.span == 0 and rep.proj_distance == 0
    rep = spectral_report(t_s(2, 8))
    assert rep.span == pytest.approx(1 / 8)
    assert rep.proj_distance == pytest.approx(2 * math.sin(math.pi / 16), abs=1e-12)
    rep = spectral_report(pauli_z(2))
    assert rep.span == pytest.approx(0.5)
    assert rep.proj_distance == pytest.approx(math.sqrt(2))


def test_span_wraps_around_zero():
    U = np.diag(np.exp(2j * np.pi * np.array([0.95, 0.02, 0.05])))
    rep = spectral_report(U)
    assert rep.span == pytest.approx(0.10)
    assert rep.centering_phase == pytest.approx(0.0, abs=1e-12) or rep.centering_phase == pytest.approx(1.0)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_distance_against_phase_grid_oracle(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        U = haar_unitary(d, rng)
        assert abs(proj_distance(U) - proj_distance_bruteforce(U)) < 1e-6


@given(st.integers(2, 6), st.floats(0, 2 * math.pi), st.integers(0, 2**31))
def test_projective_invariance(d, phi, seed):
    U = haar_unitary(d, np.random.default_rng(seed))
    a = spectral_report(U).proj_distance
    b = spectral_report(np.exp(1j * phi) * U).proj_distance
    assert abs(a - b) < 1e-10


@given(st.integers(2, 6), st.integers(0, 2**31))
def test_distance_law_and_span_range(d, seed):
    rep = spectral_report(haar_unitary(d, np.random.default_rng(seed)))
    assert 0 <= rep.span <= 1
    assert rep.proj_distance == pytest.approx(2 * math.sin(math.pi * rep.span / 2), abs=1e-10)
    assert rep.eigenphases == sorted(rep.eigenphases)
    assert all(0 <= p < 1 for p in rep.eigenphases)


@pytest.mark.parametrize("d, s", [(2, 8), (3, 13), (4, 19), (5, 11), (8, 44)])
def test_ts_span(d, s):
    assert spectral_report(t_s(d, s)).span == pytest.approx((d - 1) / s)


def test_certificate_check_examples():
    cert = certificate_check(t_s(2, 8))
    assert cert is not None and cert.proj_distance == pytest.approx(0.390180644, abs=1e-9)
    assert certificate_check(np.exp(0.7j) * np.eye(3)) is None
    assert certificate_check(t_s(2, 6)) is None
    assert spectral_report(t_s(2, 6)).proj_distance == pytest.approx(2 * math.sin(math.pi / 12))


def test_certificate_guard_band():
    # span chosen so the distance sits inside the 1e-9 band below 1/2
    span = 2 * math.asin(0.25 - 2e-10) / math.pi
    U = np.diag([1, np.exp(2j * np.pi * span)])
    assert 0.5 - 1e-9 < proj_distance(U) < 0.5
    assert certificate_check(U) is None


def test_bound_examples_and_monotone():
    assert 18.64 < ts_universality_bound(4) < 18.66
    assert ts_universality_bound(2) == pytest.approx(6.22, abs=0.01)
    vals = [ts_universality_bound(d) for d in range(2, 65)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("d", [2, 3, 4, 8])
def test_bound_is_the_certificate_threshold(d):
    b = ts_universality_bound(d)
    s_above = math.floor(b) + 1
    assert certificate_check(t_s(d, s_above)) is not None
    s_below = math.ceil(b) - 1
    assert certificate_check(t_s(d, s_below)) is None


def test_search_finds_t_gate_at_length_one():
    gens = clifford_generators(2) + [t_s(2, 8)]
    cert = certificate_search(2, gens)
    assert cert.word_labels() == ["g3"]
    assert cert.to_dict()["proj_distance"] == pytest.approx(0.39018064, abs=1e-8)


def test_search_exhausts_finite_group():
    stats = SearchStats()
    assert certificate_search(2, clifford_generators(2), stats=stats) is None
    assert stats.exhausted and stats.elements == 24


def test_search_respects_budget():
    stats = SearchStats()
    gens = clifford_generators(3) + [t_s(3, 5)]
    assert certificate_search(3, gens, max_word_len=8, max_elements=10, stats=stats) is None
    assert stats.elements == 10 and not stats.exhausted


def test_search_inverse_symbols_and_order():
    # T^dag has the same distance; the forward symbol is tried first
    gens = [pauli_z(2), t_s(2, 8).conj().T]
    cert = certificate_search(2, gens)
    assert cert.word == [(1, False)]


@pytest.mark.slow
def test_search_d6_intra_cn():
    gens = clifford_generators(6) + [intra_qudit_cn(6, 2, 3)]
    cert = certificate_search(6, gens)
    assert cert is not None and len(cert.word) <= 8
    assert 1e-9 < cert.proj_distance < 0.5
    # replaying the word reproduces the element
    symbols = {(i, False): g for i, g in enumerate(gens)} | {(i, True): g.conj().T for i, g in enumerate(gens)}
    W = np.eye(6, dtype=complex)
    for sym in cert.word:
        W = W @ symbols[sym]
    assert np.allclose(W, cert.element)


def test_search_rejects_bad_budgets():
    with pytest.raises(ValueError):
        certificate_search(2, clifford_generators(2), max_word_len=0)
