import numpy as np
import pytest
from hypothesis import given, strategies as st

from amelab.codes import (CodeBasis, CodeError, PauliString, code_distance, is_ame, is_critical,
                          is_r_uniform, knill_laflamme_check, pauli_strings, purify_ascend,
                          rains_descend, singleton_ok, site1_projector)
from amelab.constructions import build_c1_basis, build_c2_basis, build_psi6, build_psi_m, c1_point
from amelab.tensor_core import Ket, apply_local, random_ket, random_su2

seeds = st.integers(0, 2 ** 32 - 1)


@given(seeds, st.text("IXYZ", min_size=1, max_size=4))
def test_pauli_apply_matches_matrix(seed, word):
    k = random_ket(len(word), np.random.default_rng(seed))
    p = PauliString(word)
    assert np.allclose(p.apply(k).amps, p.matrix() @ k.amps)


def test_pauli_strings_count():
    assert len(list(pauli_strings(5, 2))) == 9 * 10
    assert PauliString("IXYZ").weight == 3
    with pytest.raises(ValueError):
        PauliString("IXA")


def test_code_basis_rescaling():
    c = CodeBasis([Ket.basis("00") * 3, Ket.basis("11") * 3])
    assert abs(c.scale - 3) < 1e-12 and abs(c[0].norm() - 1) < 1e-12
    with pytest.raises(CodeError):
        CodeBasis([Ket.basis("00"), Ket.basis("00") + Ket.basis("01")])


def test_uniformity_examples(rng):
    assert is_r_uniform(build_psi6(), 3).ok
    assert not is_r_uniform(Ket.basis("00000"), 1).ok
    us = [random_su2(rng) for _ in range(5)]
    k = apply_local(c1_point(0.6, 0.8j), us)
    assert is_r_uniform(k, 2).ok
    with pytest.raises(ValueError, match="out of range"):
        is_r_uniform(build_psi6(), 4)


def test_criticality_examples(rng):
    for u in build_c2_basis():
        assert is_critical(u).ok
    assert not is_critical(Ket.basis("000")).ok
    k = random_ket(4, rng)
    res = is_critical(k)
    assert not res.ok
    assert is_r_uniform(k, 1).ok is False


def test_knill_laflamme_examples():
    kl = knill_laflamme_check(build_c2_basis(), 2)
    assert kl.is_code and kl.is_pure and kl.worst_violation < 1e-12
    kl = knill_laflamme_check(build_c1_basis(), 3)
    assert kl.is_code and kl.is_pure
    kl = knill_laflamme_check(CodeBasis([Ket.basis("0000"), Ket.basis("1111")]), 2)
    assert not kl.is_pure
    # Z on site 1 has matrix diag(1, -1): not a scalar, so no d=2 code either
    assert not kl.is_code and abs(kl.worst_violation - 1) < 1e-12


def test_code_distance_ladder():
    c0 = CodeBasis([build_psi6()])
    reports = [code_distance(c0)]
    c = c0
    for _ in range(2):
        c = rains_descend(c)
        reports.append(code_distance(c))
    assert [r.params for r in reports] == ["((6,1,4))_2", "((5,2,3))_2", "((4,4,2))_2"]
    assert all(r.is_pure and r.is_mds for r in reports)


def test_descend_output_properties():
    c1 = rains_descend(CodeBasis([build_psi6()]))
    assert c1.K == 2
    assert np.allclose(c1.matrix().conj() @ c1.matrix().T, np.eye(2), atol=1e-9)
    # spans C1
    assert np.abs(c1.projector() - build_c1_basis().projector()).max() < 1e-12
    c2 = rains_descend(c1)
    assert np.abs(c2.projector() - build_c2_basis().projector()).max() < 1e-12
    with pytest.raises(CodeError):
        rains_descend(c2)


def test_descend_psi4():
    c = rains_descend(CodeBasis([build_psi_m(4)]))
    r = code_distance(c)
    assert (r.n, r.K, r.d, r.is_pure) == (7, 2, 3, True)
    kl = knill_laflamme_check(c, 3)
    assert kl.is_code and kl.is_pure


def test_singleton():
    assert singleton_ok(5, 2, 3, 2) == (True, True)
    assert singleton_ok(4, 4, 2, 2) == (True, True)
    assert singleton_ok(4, 1, 3, 2) == (True, True)
    assert singleton_ok(4, 2, 3, 2) == (False, False)
    assert singleton_ok(6, 1, 4, 2) == (True, True)


def test_ascend(rng):
    psi = build_psi6()
    c1 = rains_descend(CodeBasis([psi]))
    up = purify_ascend(c1)
    assert is_r_uniform(up, 3).ok
    assert np.abs(site1_projector(up) - site1_projector(psi)).max() < 1e-9
    assert is_ame(purify_ascend(build_c1_basis())).ok
    us = [random_su2(rng) for _ in range(5)]
    rot = CodeBasis([apply_local(v, us) for v in build_c1_basis()])
    assert is_r_uniform(purify_ascend(rot), 3).ok
    with pytest.raises(CodeError):
        purify_ascend(build_c2_basis())


@given(seeds)
def test_pure_code_iff_uniform_combinations(seed):
    rng = np.random.default_rng(seed)
    c = build_c1_basis()
    coef = rng.normal(size=2) + 1j * rng.normal(size=2)
    k = c[0] * coef[0] + c[1] * coef[1]
    assert is_r_uniform(k, 2).ok
