import numpy as np
import pytest
from hypothesis import given, strategies as st

from amelab.codes import is_critical
from amelab.constructions import _u_vectors, build_c2_basis, build_psi6, double_cover
from amelab.tensor_core import Ket, apply_local, random_ket, random_sl2, random_su2
from amelab.vinberg_so8 import (G1Element, NullconeError, commutant_basis, commutes,
                                commutes_with_dagger, grading_check, is_critical_matrix,
                                kempf_ness_descend, matrix_to_state, state_to_matrix)

seeds = st.integers(0, 2 ** 32 - 1)


def _e(i, j):
    m = np.zeros((4, 4))
    m[i, j] = 1
    return m


def test_g1_element_skew():
    g = G1Element(np.arange(16).reshape(4, 4) * 1j)
    assert np.allclose(g.matrix, -g.matrix.T)
    with pytest.raises(ValueError):
        G1Element(np.eye(3))


def test_c2_cartan_images():
    u1, u2, u3, u4 = _u_vectors()
    for state, idx, sign in [(u1 + u2, 0, 2), (u1 - u2, 3, -2), (u3 + u4, 1, -2), (u3 - u4, 2, 2)]:
        a = state_to_matrix(state).a
        assert np.allclose(a, sign * _e(idx, idx))


@given(seeds)
def test_state_matrix_round_trip_and_equivariance(seed):
    rng = np.random.default_rng(seed)
    k = random_ket(4, rng)
    assert matrix_to_state(state_to_matrix(k)).allclose(k, 1e-12)
    us = [random_sl2(rng) for _ in range(4)]
    lhs = state_to_matrix(apply_local(k, us)).a
    rhs = double_cover(us[0], us[1]) @ state_to_matrix(k).a @ double_cover(us[2], us[3]).T
    assert np.allclose(lhs, rhs)


def test_zero_state_maps_to_zero():
    assert not np.any(state_to_matrix(Ket(np.zeros(16), 4)).a)


def test_critical_matrix_examples(rng):
    assert is_critical_matrix(G1Element(np.diag([1, 1j, -1, 2]))).residual == 0
    # rank one |0><1| is a product of two maximally entangled pairs: critical
    assert is_critical_matrix(G1Element(_e(0, 1))).residual == 0
    # every real A is critical; a complex non-normal block is not
    assert is_critical_matrix(G1Element(_e(0, 0) + 1j * _e(0, 1))).residual > 1
    u1 = _u_vectors()[0].normalized()
    rot = apply_local(u1, [random_su2(rng) for _ in range(4)])
    assert is_critical_matrix(state_to_matrix(rot)).residual < 1e-10


@given(seeds)
def test_matrix_residual_is_sqrt_pauli_residual(seed):
    k = random_ket(4, np.random.default_rng(seed))
    r = is_critical_matrix(state_to_matrix(k)).residual
    assert abs(r - np.sqrt(is_critical(k).residual)) < 1e-12


def test_criteria_agree_on_mixed_sample(rng):
    basis = build_c2_basis()
    agree = 0
    for i in range(50):
        if i % 2:
            k = random_ket(4, rng)
        else:
            c = rng.normal(size=4) + 1j * rng.normal(size=4)
            k = apply_local(sum((u * z for u, z in zip(basis, c)), Ket(np.zeros(16), 4)),
                            [random_su2(rng) for _ in range(4)]).normalized()
        a, b = is_critical(k), is_critical_matrix(state_to_matrix(k))
        agree += a.ok == b.ok
        assert a.residual < 1e-16 or a.residual > 1e-15
    assert agree == 50


def test_commutes_examples(rng):
    d1, d2 = G1Element(np.diag([1, 2, 3, 4])), G1Element(np.diag([1j, 0, 5, 1]))
    assert commutes(d1, d2)
    s = rng.normal(size=(4, 4))
    assert commutes(G1Element(np.eye(4)), G1Element(s + s.T))
    assert not commutes(G1Element(np.eye(4)), G1Element(s - s.T + np.eye(4)))
    # A B^T = B^T A = 0 here, so the brackets really vanish
    assert commutes(G1Element(_e(0, 1)), G1Element(_e(1, 0)))
    assert not commutes(G1Element(_e(0, 1)), G1Element(_e(0, 0)))


def test_commutes_matches_bracket(rng):
    for _ in range(10):
        a = G1Element(rng.normal(size=(4, 4)))
        b = G1Element(np.diag(rng.normal(size=4)))
        br = a.matrix @ b.matrix - b.matrix @ a.matrix
        assert commutes(a, b) == bool(np.abs(br).max() < 1e-10)


def test_c2_subspace_is_critical_pairwise():
    mats = [state_to_matrix(u) for u in build_c2_basis()]
    for a in mats:
        for b in mats:
            assert commutes(a, b) and commutes_with_dagger(a, b)


def test_lemma_diagonal_commutant(rng):
    for _ in range(10):
        b = G1Element(np.diag(rng.normal(size=4) + 1j * rng.normal(size=4)))
        basis = commutant_basis(b)
        assert basis
        coef = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        a = G1Element(sum(c * g.a for c, g in zip(coef, basis)))
        assert commutes(a, b, 1e-9)
        assert commutes_with_dagger(a, b, 1e-9)


def test_grading():
    rep = grading_check(samples=20, seed=3)
    assert rep.ok(1e-12), rep


def test_kempf_ness_already_critical():
    u = build_c2_basis()[0]
    out, tr = kempf_ness_descend(u)
    assert tr.iterations == 0 and tr.converged and out.allclose(u)


def test_kempf_ness_descends_perturbed_psi(rng):
    psi = build_psi6()
    k = apply_local(psi, [random_sl2(rng, 0.3) for _ in range(6)])
    out, tr = kempf_ness_descend(k)
    assert tr.converged and tr.residuals[-1] < 1e-8
    assert tr.is_monotone() and tr.norms_sq[-1] <= tr.norms_sq[0]
    assert is_critical(out, 1e-4).ok


def test_kempf_ness_nullcone():
    with pytest.raises(NullconeError):
        kempf_ness_descend(Ket.basis("000000"))
    with pytest.raises(ValueError):
        kempf_ness_descend(Ket(np.zeros(4), 2))
