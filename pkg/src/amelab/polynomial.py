"""Sparse multivariate polynomials with complex coefficients."""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping

import numpy as np

CHOP = 1e-13


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of all degree-``degree`` monomials, lexicographically descending."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


class SparsePoly:
    """Polynomial stored as ``{exponent tuple: coefficient}``.

    Zero coefficients are never stored. Coefficients below ``CHOP`` relative
    to the largest one are dropped when a polynomial is built from floating
    point arithmetic.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, complex] | None = None,
                 chop: float = 0.0):
        self.nvars = int(nvars)
        clean = {}
        if terms:
            scale = max(abs(c) for c in terms.values())
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != self.nvars or min(e, default=0) < 0:
                    raise ValueError(f"bad exponent {e} for {self.nvars} variables")
                if c != 0 and abs(c) > chop * scale:
                    clean[e] = complex(c)
        self.terms = clean

    @classmethod
    def variable(cls, i: int, nvars: int) -> "SparsePoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1.0})

    @classmethod
    def constant(cls, c, nvars: int) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def from_monomial(cls, exps: Iterable[int], coeff=1.0) -> "SparsePoly":
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    # -- structure -----------------------------------------------------
    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    @property
    def degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps) -> complex:
        return self.terms.get(tuple(exps), 0j)

    def coefficient_vector(self, basis: list[tuple]) -> np.ndarray:
        return np.array([self.terms.get(e, 0j) for e in basis])

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "SparsePoly"):
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(other, self.nvars)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            other = complex(other)
            return SparsePoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / complex(scalar))

    def __pow__(self, k: int):
        out = SparsePoly.constant(1.0, self.nvars)
        for _ in range(int(k)):
            out = out * self
        return out

    def chop(self, tol: float = CHOP) -> "SparsePoly":
        return SparsePoly(self.nvars, self.terms, chop=tol)

    def allclose(self, other: "SparsePoly", tol: float = 1e-10) -> bool:
        """Coefficientwise comparison with absolute tolerance ``tol``."""
        self._check(other)
        return (self - other).max_coeff() <= tol

    # -- evaluation and substitution -------------------------------------
    def exponent_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.terms:
            return np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0, dtype=complex)
        exps = np.array(list(self.terms.keys()), dtype=np.int64)
        coeffs = np.array(list(self.terms.values()), dtype=complex)
        return exps, coeffs

    def __call__(self, *point):
        if len(point) == 1 and np.ndim(point[0]) >= 1:
            point = point[0]
        return self.evaluate(point)

    def evaluate(self, point) -> complex | np.ndarray:
        """Evaluate at one point (shape ``(nvars,)``) or many (``(m, nvars)``)."""
        x = np.asarray(point, dtype=complex)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[1] != self.nvars:
            raise ValueError(f"point has {x.shape[1]} coordinates, need {self.nvars}")
        exps, coeffs = self.exponent_matrix()
        vals = np.prod(x[:, None, :] ** exps[None, :, :], axis=2) @ coeffs
        return complex(vals[0]) if single else vals

    def substitute_linear(self, m) -> "SparsePoly":
        """Return ``g(y) = f(m @ y)``; ``m`` has shape ``(nvars, new_nvars)``."""
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != self.nvars:
            raise ValueError(f"substitution matrix must have {self.nvars} rows")
        new = m.shape[1]
        forms = [SparsePoly(new, {tuple(int(j == k) for j in range(new)): m[i, k]
                                  for k in range(new)}) for i in range(self.nvars)]
        cache: dict = {}

        def power(i, p):
            if (i, p) not in cache:
                cache[(i, p)] = forms[i] ** p
            return cache[(i, p)]

        out: dict = {}
        for e, c in self.terms.items():
            term = SparsePoly.constant(c, new)
            for i, p in enumerate(e):
                if p:
                    term = term * power(i, p)
            for e2, c2 in term.terms.items():
                out[e2] = out.get(e2, 0) + c2
        return SparsePoly(new, out).chop()

    # -- display ---------------------------------------------------------
    def __repr__(self):
        return f"SparsePoly(nvars={self.nvars}, {self.to_string()})"

    def to_string(self, names=None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = ("x", "y") if self.nvars == 2 else [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p)
            cs = _fmt_coeff(c)
            if mono and cs in ("1", "-1"):
                parts.append(mono if cs == "1" else f"-{mono}")
            else:
                parts.append(cs if not mono else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _fmt_coeff(c: complex) -> str:
    re, im = round(c.real, 12), round(c.imag, 12)
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}j"
    return f"({re:g}{im:+g}j)"
