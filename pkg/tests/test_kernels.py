import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from amelab import _pykernels, kernels

seeds = st.integers(0, 2 ** 32 - 1)


def _backends():
    out = [_pykernels]
    if "cython" in kernels.available_backends():
        from amelab import _ckernels
        out.append(_ckernels)
    return out


def test_backend_selected():
    assert kernels.BACKEND in kernels.available_backends()
    assert kernels.load_backend("python") is _pykernels
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


def _brute_comb(values, slots, coeffs, nindex):
    r = len(coeffs)
    tot = 0
    for digits in itertools.product(range(r), repeat=nindex):
        term = np.prod([coeffs[d] for d in digits])
        for f, sl in enumerate(slots):
            code = 0
            for s in sl:
                code = code * r + digits[s]
            term *= values[f, code]
        tot += term
    return tot


@given(seeds)
def test_comb_sum_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    nindex = 4
    slots = rng.integers(0, nindex, size=(3, 2))
    values = rng.normal(size=(3, 9)) + 1j * rng.normal(size=(3, 9))
    coeffs = np.array([-1, 1, 1], dtype=complex)
    want = _brute_comb(values, slots, coeffs, nindex)
    for b in _backends():
        assert abs(b.comb_sum(values, slots, coeffs, nindex) - want) <= 1e-10 * max(1, abs(want))


@given(seeds)
def test_pauli_block_matches_dense(seed):
    from amelab.codes import PauliString
    rng = np.random.default_rng(seed)
    n, K = 3, 2
    U = rng.normal(size=(K, 2 ** n)) + 1j * rng.normal(size=(K, 2 ** n))
    words = [PauliString("".join(w)) for w in itertools.product("IXYZ", repeat=n)]
    masks = np.array([w.masks() for w in words])
    want = np.array([U.conj() @ w.matrix() @ U.T for w in words])
    for b in _backends():
        got = b.pauli_block(U, masks[:, 0], masks[:, 1], masks[:, 2])
        assert np.abs(got - want).max() < 1e-12


@pytest.mark.parametrize("nsites,degree", [(2, 2), (3, 4), (4, 4), (3, 6), (5, 6)])
def test_balanced_multisets(nsites, degree):
    nb = 2 ** nsites
    want = [m for m in itertools.combinations_with_replacement(range(nb), degree)
            if all(sum((b >> (nsites - 1 - k)) & 1 for b in m) == degree // 2 for k in range(nsites))]
    for b in _backends():
        got = [tuple(r) for r in b.balanced_multisets(nsites, degree)]
        assert got == want
    if (nsites, degree) == (5, 6):
        assert len(want) == 5200


def test_odd_degree_has_no_balanced_multisets():
    for b in _backends():
        assert b.balanced_multisets(3, 3).shape == (0, 3)
