"""Finite matrix groups: closure, Reynolds projection, Molien series, orbit tests."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from amelab.codes import PAULI
from amelab.constructions import TABLE1, build_w_c1_generators
from amelab.polynomial import SparsePoly, monomials

DEDUP_TOL = 1e-8


class GroupError(ValueError):
    pass


class FiniteMatrixGroup:
    """Elements stored as a ``(|G|, d, d)`` array in breadth-first order.

    Two elements are identified when their entrywise distance is below
    ``DEDUP_TOL``; no phase canonicalization is applied.
    """

    def __init__(self, elements: Sequence[np.ndarray], name: str = ""):
        self.elements = np.array(elements, dtype=complex)
        self.elements.setflags(write=False)
        self.name = name
        # hash on rounded entries to look elements up without a linear scan
        self._lookup = {}
        for i, e in enumerate(self.elements):
            self._lookup.setdefault(self._key(e), i)

    @staticmethod
    def _key(m: np.ndarray):
        r = np.round(np.asarray(m, dtype=complex) * 1e5)
        return (r.real + 0.0).tobytes() + (r.imag + 0.0).tobytes()

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def index(self, m: np.ndarray) -> int:
        """Position of ``m`` in the group, or -1."""
        i = self._lookup.get(self._key(m))
        if i is not None and np.abs(self.elements[i] - m).max() < DEDUP_TOL:
            return i
        d = np.abs(self.elements - np.asarray(m)[None]).max(axis=(1, 2))
        j = int(np.argmin(d))
        return j if d[j] < DEDUP_TOL else -1

    def __contains__(self, m) -> bool:
        return self.index(m) >= 0

    def __repr__(self):
        return f"FiniteMatrixGroup({self.name or 'unnamed'}, order={self.order}, dim={self.dim})"


def closure(generators: Iterable[np.ndarray], cap: int = 10000, name: str = "") -> FiniteMatrixGroup:
    """Breadth-first closure of the generators under multiplication."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise GroupError("need at least one generator")
    d = gens[0].shape[0]
    for g in gens:
        if g.shape != (d, d):
            raise GroupError("generators must be square and of equal size")
        if abs(np.linalg.det(g)) < 1e-12:
            raise GroupError("generator is singular")
    elems = [np.eye(d, dtype=complex)]
    seen = {FiniteMatrixGroup._key(elems[0])}
    frontier = list(elems)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                p = a @ g
                key = FiniteMatrixGroup._key(p)
                if key in seen:
                    continue
                seen.add(key)
                elems.append(p)
                nxt.append(p)
                if len(elems) > cap:
                    raise GroupError(f"closure exceeded cap={cap}; group infinite or generators wrong")
        frontier = nxt
    return FiniteMatrixGroup(elems, name)


def so3_image(u: np.ndarray) -> np.ndarray:
    """Adjoint action on span{X, Y, Z}: ``R_ab = tr(s_a U s_b U^dag) / 2``."""
    sig = [PAULI[p] for p in "XYZ"]
    ud = u.conj().T
    r = np.array([[np.trace(sa @ u @ sb @ ud) / 2 for sb in sig] for sa in sig])
    return r.real


def w_c1() -> FiniteMatrixGroup:
    return closure(build_w_c1_generators(), cap=100, name="W(C1)")


def w_c1_so3() -> FiniteMatrixGroup:
    return FiniteMatrixGroup(_dedup([so3_image(u) for u in w_c1()]), "W(C1) in SO3")


def weyl_pb() -> FiniteMatrixGroup:
    """All ``P B``: 4x4 permutation times diagonal signs of determinant 1."""
    elems = []
    for perm in itertools.permutations(range(4)):
        p = np.eye(4)[list(perm)]
        for signs in itertools.product((1, -1), repeat=4):
            if np.prod(signs) == 1:
                elems.append(p @ np.diag(signs))
    return FiniteMatrixGroup(elems, "W(h) = {PB}")


def table1_group() -> FiniteMatrixGroup:
    return closure([u for u, _, _ in TABLE1], cap=1000, name="W(D4)+")


NAMED_GROUPS = {"wc1": w_c1, "so3": w_c1_so3, "weyl-d4": weyl_pb, "table1": table1_group}


def named_group(name: str) -> FiniteMatrixGroup:
    try:
        return NAMED_GROUPS[name]()
    except KeyError:
        raise ValueError(f"unknown group {name!r}; choose from {sorted(NAMED_GROUPS)}")


def _dedup(mats):
    out = []
    for m in mats:
        if not any(np.abs(m - o).max() < DEDUP_TOL for o in out):
            out.append(m)
    return out


def act(w: np.ndarray, p: SparsePoly) -> SparsePoly:
    """``(w . f)(x) = f(w^{-1} x)``."""
    return p.substitute_linear(np.linalg.inv(w))


def reynolds(g: FiniteMatrixGroup, p: SparsePoly) -> SparsePoly:
    if p.nvars != g.dim:
        raise ValueError(f"polynomial has {p.nvars} variables, group acts on {g.dim}")
    acc: dict = {}
    for w in g:
        for e, c in act(w, p).terms.items():
            acc[e] = acc.get(e, 0) + c
    return (SparsePoly(p.nvars, acc) / g.order).chop(1e-12)


def invariance_defect(g: FiniteMatrixGroup, p: SparsePoly) -> float:
    """Max coefficient norm of ``w . p - p`` over the group."""
    return max((act(w, p) - p).max_coeff() for w in g)


@dataclass(frozen=True)
class MolienCoeffs:
    dims: tuple
    max_gap: float

    def __post_init__(self):
        if self.dims[0] != 1 or min(self.dims) < 0:
            raise GroupError(f"not a Molien series: {self.dims}")

    def __getitem__(self, d):
        return self.dims[d]

    def __len__(self):
        return len(self.dims)


def molien(g: FiniteMatrixGroup, max_deg: int, gap_tol: float = 1e-6) -> MolienCoeffs:
    """Invariant dimensions by averaging ``h_d(eigenvalues)`` over the group.

    ``h_d`` is read off ``prod_i 1/(1 - lambda_i t)`` by series
    multiplication.
    """
    acc = np.zeros(max_deg + 1, dtype=complex)
    for w in g:
        series = np.zeros(max_deg + 1, dtype=complex)
        series[0] = 1
        for lam in np.linalg.eigvals(w):
            # multiply by 1/(1 - lam t): prefix recursion s_d += lam s_{d-1}
            for d in range(1, max_deg + 1):
                series[d] += lam * series[d - 1]
        acc += series
    acc /= g.order
    rounded = np.rint(acc.real)
    gap = float(np.abs(acc - rounded).max())
    if gap > gap_tol:
        raise GroupError(f"Molien coefficients not near integers (gap {gap:.3g})")
    return MolienCoeffs(tuple(int(v) for v in rounded), gap)


def finite_orbit_equivalent(g: FiniteMatrixGroup, p, q, tol: float = 1e-8):
    """Search the group for ``w`` with ``||w p - q|| < tol``; return ``(found, w)``."""
    p, q = np.asarray(p, dtype=complex), np.asarray(q, dtype=complex)
    if p.shape != (g.dim,) or q.shape != (g.dim,):
        raise ValueError("vector dimension does not match the group")
    dists = np.linalg.norm(g.elements @ p - q[None], axis=1)
    i = int(np.argmin(dists))
    if dists[i] < tol:
        return True, g.elements[i]
    return False, None


def invariant_basis_search(g: FiniteMatrixGroup, degree: int, tol: float = 1e-9) -> list[SparsePoly]:
    """Reynolds images of all degree-``degree`` monomials, reduced to a basis.

    The basis is the reduced row echelon form of the image coefficients, so
    each element has a leading coefficient 1 on a distinct monomial.
    """
    if degree > g.order:
        raise ValueError(f"degree {degree} exceeds the Noether bound {g.order}")
    basis = monomials(g.dim, degree)
    rows = [reynolds(g, SparsePoly.from_monomial(e)).coefficient_vector(basis) for e in basis]
    rref = _rref(np.array(rows), tol)
    return [SparsePoly(g.dim, dict(zip(basis, r)), chop=1e-12) for r in rref]


def _rref(a: np.ndarray, tol: float) -> list[np.ndarray]:
    a = a.astype(complex).copy()
    out = []
    row = 0
    for col in range(a.shape[1]):
        if row >= a.shape[0]:
            break
        piv = row + int(np.argmax(np.abs(a[row:, col])))
        if abs(a[piv, col]) < tol:
            continue
        a[[row, piv]] = a[[piv, row]]
        a[row] /= a[row, col]
        for r in range(a.shape[0]):
            if r != row:
                a[r] -= a[r, col] * a[row]
        row += 1
    for r in range(row):
        v = a[r]
        v[np.abs(v) < tol] = 0
        out.append(v)
    return out
