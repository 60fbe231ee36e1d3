"""Invariants separating 5-qubit AME states, and the 12 real quadratics on C^2 (x) C2.

Coordinates on C1 are ``(x, y)`` in the unit basis ``(Phi_0, Phi_1)``.
Comb invariants use the bilinear pairing ``x^T E x`` without conjugation.
"""
from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from amelab import kernels
from amelab.codes import PauliString, is_r_uniform
from amelab.constructions import build_c1_basis, build_phi_ij_basis
from amelab.polynomial import SparsePoly
from amelab.tensor_core import DimensionError, Ket

N_QUBITS = 5
F6_CONVENTION = "unit-Phi-basis/restriction=x^5y-xy^5/v1"
F6_DATA = Path(__file__).parent / "data" / "f6_coefficients.txt"
F6_CACHE_ENV = "AMELAB_F6_CACHE"
DEFAULT_REL_TOL = 1e-7


class NotAMEError(ValueError):
    """Input to the equivalence test is not 2-uniform."""


class F6BuildError(RuntimeError):
    pass


# -- two-variable invariants of W(C1) ------------------------------------------

_I_TERMS = {
    6: {(5, 1): 1, (1, 5): -1},
    8: {(8, 0): 1, (4, 4): 14, (0, 8): 1},
    12: {(12, 0): 1, (8, 4): -33, (4, 8): -33, (0, 12): 1},
}


def I_poly(d: int) -> SparsePoly:
    if d not in _I_TERMS:
        raise ValueError(f"no invariant of degree {d}; choose 6, 8 or 12")
    return SparsePoly(2, _I_TERMS[d])


def eval_I(d: int, x, y) -> complex:
    return I_poly(d)(x, y)


# -- comb invariants --------------------------------------------------------------

@dataclass(frozen=True)
class CombSpec:
    """A degree ``2 * len(words)`` comb.

    Each word has five symbols: ``"Y"`` or an integer naming which summation
    index selects the Pauli ``sigma`` at that site.
    """
    name: str
    index_count: int
    words: tuple
    coeffs: tuple = (-1, 1, 1)
    sigmas: tuple = ("I", "X", "Z")

    @property
    def degree(self) -> int:
        return 2 * len(self.words)

    def slots(self) -> np.ndarray:
        return np.array([[s for s in w if s != "Y"] for w in self.words], dtype=np.int64)

    def y_positions(self) -> list[tuple[int, ...]]:
        return [tuple(p for p, s in enumerate(w) if s == "Y") for w in self.words]


# indices are zero-based: 0 is i_1
G6_5 = CombSpec("G6^(5)", 6, (
    (0, 1, 2, "Y", "Y"),
    (3, 1, 2, "Y", "Y"),
    (3, "Y", "Y", 4, 5),
    (0, "Y", "Y", 4, 5),
))

F12_2 = CombSpec("F12;2^(5)", 9, (
    (0, 1, 2, "Y", "Y"),
    (0, 1, 3, "Y", "Y"),
    (4, "Y", 2, "Y", 5),
    (4, "Y", 3, "Y", 6),
    (7, "Y", "Y", 8, 5),
    (7, "Y", "Y", 8, 6),
))

COMBS = {"g6_5": G6_5, "f12_2": F12_2}


def _bilinear(amps: np.ndarray, word: str) -> complex:
    return complex(amps @ PauliString(word).apply(Ket(amps, N_QUBITS, 2)).amps)


def comb_tables(spec: CombSpec, amps: np.ndarray) -> np.ndarray:
    """``values[f, code]``: factor ``f`` with its sigma slots set by base-3 ``code``."""
    ns = spec.slots().shape[1]
    out = np.zeros((len(spec.words), 3 ** ns), dtype=complex)
    for f, w in enumerate(spec.words):
        for code, choice in enumerate(itertools.product(range(3), repeat=ns)):
            it = iter(choice)
            word = "".join("Y" if s == "Y" else spec.sigmas[next(it)] for s in w)
            out[f, code] = _bilinear(amps, word)
    return out


def eval_comb(spec: CombSpec, k: Ket) -> complex:
    if k.n != N_QUBITS or k.local_dim != 2:
        raise DimensionError("comb invariants are defined on 5 qubits")
    vals = comb_tables(spec, k.amps)
    return kernels.comb_sum(vals, spec.slots(), np.array(spec.coeffs, dtype=complex),
                            spec.index_count)


# -- f6 by derived nullspace --------------------------------------------------------

@dataclass(frozen=True)
class F6Data:
    """``f6(z) = scale * sum_m coeffs[m] prod_{b in m} z_b``."""
    monomials: np.ndarray      # (nterms, 6) bitstring indices, sorted within rows
    coeffs: np.ndarray         # integers
    scale: complex
    nullity: int | None = None
    eigenvalues: tuple | None = None

    @property
    def nterms(self) -> int:
        return len(self.coeffs)

    def __call__(self, z) -> complex | np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != 2 ** N_QUBITS:
            raise DimensionError("f6 takes 32 amplitudes")
        mono = np.prod(z[..., self.monomials], axis=-1)
        return self.scale * (mono @ self.coeffs.astype(complex))

    def poly(self) -> SparsePoly:
        terms = {}
        for m, c in zip(self.monomials, self.coeffs):
            e = [0] * 2 ** N_QUBITS
            for b in m:
                e[b] += 1
            terms[tuple(e)] = self.scale * int(c)
        return SparsePoly(2 ** N_QUBITS, terms)


def derivation_matrix(mons: np.ndarray):
    """Sparse matrix of the raising and lowering derivations on degree-6 monomials.

    Raising at site ``k`` replaces one factor ``z_b`` with bit ``k`` equal to 0
    by ``z_{b | bit}``; lowering does the reverse. Rows index the resulting
    monomials per (site, direction).
    """
    import scipy.sparse as sp

    n = N_QUBITS
    cols = {tuple(m): j for j, m in enumerate(mons)}
    rows: dict = {}
    ri, ci = [], []
    for k in range(n):
        bit = 1 << (n - 1 - k)
        for lower in (False, True):
            for m, j in cols.items():
                for p, b in enumerate(m):
                    if bool(b & bit) != lower:
                        continue
                    nb = b & ~bit if lower else b | bit
                    new = tuple(sorted(m[:p] + (nb,) + m[p + 1:]))
                    ri.append(rows.setdefault((k, lower, new), len(rows)))
                    ci.append(j)
    a = sp.csr_matrix((np.ones(len(ri)), (ri, ci)), shape=(len(rows), len(cols)))
    a.sum_duplicates()
    return a


def _restriction_coeffs(f, basis) -> np.ndarray:
    """Coefficients of ``f(x Phi_0 + y Phi_1)`` on ``x^6, x^5 y, ..., y^6``."""
    ts = np.exp(2j * np.pi * np.arange(7) / 7)
    phi0, phi1 = basis[0].amps, basis[1].amps
    vals = np.array([f(phi0 + t * phi1) for t in ts])
    # f(1, t) = sum_j c_j t^j with c_j the coefficient of x^(6-j) y^j
    return np.fft.fft(vals) / 7


def build_f6(eig_tol: float = 1e-8) -> F6Data:
    """Unique degree-6 SL2^5 invariant, normalized so that its C1 restriction is ``x^5 y - x y^5``.

    Raises
    ------
    F6BuildError
        If the invariant space is not one-dimensional, or the integer null
        vector fails the exact check.
    """
    import scipy.sparse.linalg as spla

    mons = kernels.balanced_multisets(N_QUBITS, 6)
    a = derivation_matrix(mons)
    gram = (a.T @ a).tocsc()
    w, v = spla.eigsh(gram, k=4, sigma=-0.1, which="LM")
    order = np.argsort(w)
    w, v = w[order], v[:, order]
    nullity = int(np.sum(w < eig_tol))
    if nullity != 1:
        raise F6BuildError(f"invariant space has dimension {nullity}, expected 1 (eigenvalues {w})")
    vec = v[:, 0] / v[np.argmax(np.abs(v[:, 0])), 0]
    ints = np.rint(vec.real).astype(np.int64)
    if np.abs(vec - ints).max() > 1e-8:
        raise F6BuildError("null vector is not an integer vector after scaling")
    # exact check in integer arithmetic
    ai = a.astype(np.int64)
    if np.any(ai @ ints):
        raise F6BuildError("integer null vector fails the derivation conditions")
    keep = ints != 0
    raw = F6Data(mons[keep], ints[keep], 1.0)
    c = _restriction_coeffs(raw, build_c1_basis())
    scale = _rational_complex(1 / c[1])
    out = F6Data(mons[keep], ints[keep], scale, nullity, tuple(float(x) for x in w))
    return out


def _rational_complex(z: complex, max_den: int = 1024) -> complex:
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    return complex(float(re), float(im))


def _fmt_fraction(x: float) -> str:
    f = Fraction(x).limit_denominator(1024)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def write_f6_cache(data: F6Data, path: str | os.PathLike) -> None:
    lines = [f"# convention {F6_CONVENTION}",
             f"# scale {_fmt_fraction(data.scale.real)} {_fmt_fraction(data.scale.imag)}",
             f"# terms {data.nterms}"]
    order = sorted(range(data.nterms), key=lambda i: tuple(data.monomials[i]))
    for i in order:
        bits = " ".join(format(int(b), f"0{N_QUBITS}b") for b in data.monomials[i])
        lines.append(f"{bits} {int(data.coeffs[i])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_f6_cache(path: str | os.PathLike) -> F6Data:
    mons, coeffs = [], []
    scale = None
    convention = None
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            parts = line[1:].split()
            if parts[0] == "convention":
                convention = parts[1]
            elif parts[0] == "scale":
                scale = complex(float(Fraction(parts[1])), float(Fraction(parts[2])))
            continue
        if not line.strip():
            continue
        *bits, num = line.split()
        mons.append([int(b, 2) for b in bits])
        coeffs.append(int(Fraction(num)))
    if convention != F6_CONVENTION or scale is None:
        raise F6BuildError(f"{path}: unknown convention {convention!r}")
    return F6Data(np.array(mons, dtype=np.int64), np.array(coeffs, dtype=np.int64), scale)


@functools.lru_cache(maxsize=1)
def f6() -> F6Data:
    """The cached f6: ``$AMELAB_F6_CACHE`` if set, else the packaged table, else a fresh build."""
    env = os.environ.get(F6_CACHE_ENV)
    path = Path(env) if env else F6_DATA
    if path.exists():
        return read_f6_cache(path)
    data = build_f6()
    try:
        write_f6_cache(data, path)
    except OSError:
        pass
    return data


# -- separating set and equivalence ---------------------------------------------------

class InvariantVector(NamedTuple):
    f6: complex
    g6_5: complex
    f12_2: complex
    norm: float

    DEGREES = (6, 8, 12)

    def values(self) -> np.ndarray:
        return np.array([self.f6, self.g6_5, self.f12_2])


def invariant_vector(k: Ket) -> InvariantVector:
    """The three separating invariants on the unit normalization of ``k``."""
    if k.n != N_QUBITS or k.local_dim != 2:
        raise DimensionError("invariant vector is defined on 5 qubits")
    nrm = k.norm()
    if nrm == 0:
        raise ValueError("zero state")
    u = k / nrm
    return InvariantVector(complex(f6()(u.amps)), eval_comb(G6_5, u), eval_comb(F12_2, u), float(nrm))


def relative_gap(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    gaps: tuple
    values1: InvariantVector
    values2: InvariantVector
    uniformity: tuple


def ame5_equivalent(k1: Ket, k2: Ket, tol: float = DEFAULT_REL_TOL,
                    ame_tol: float = 1e-9) -> tuple[bool, EquivalenceReport]:
    """Decide SL2^5 equivalence of two 5-qubit AME states from their invariants.

    Raises
    ------
    NotAMEError
        If either input is not 2-uniform within ``ame_tol``.
    """
    devs = []
    for label, k in (("first", k1), ("second", k2)):
        if k.n != N_QUBITS or k.local_dim != 2:
            raise DimensionError("equivalence test is for 5 qubits")
        res = is_r_uniform(k, 2, ame_tol)
        if not res.ok:
            raise NotAMEError(f"{label} state is not AME (2-uniformity deviation {res.deviation:.3g})")
        devs.append(res.deviation)
    v1, v2 = invariant_vector(k1), invariant_vector(k2)
    gaps = tuple(relative_gap(a, b) for a, b in zip(v1.values(), v2.values()))
    ok = max(gaps) <= tol
    return ok, EquivalenceReport(ok, gaps, v1, v2, tuple(devs))


# -- Table 2 and the gamma / kappa parameterizations ------------------------------------

def eval_table2(z: Sequence[complex]) -> np.ndarray:
    """The 12 real quadratics in ``z_ij = x_ij + i y_ij``, input order ``z_00..z_03, z_10..z_13``."""
    z = np.asarray(z, dtype=complex).reshape(2, 4)
    x, y = z.real, z.imag
    return np.array([
        x[0, 2] * y[0, 1] - x[0, 1] * y[0, 2] + x[1, 2] * y[1, 1] - x[1, 1] * y[1, 2],
        x[0, 3] * y[0, 0] - x[0, 0] * y[0, 3] + x[1, 3] * y[1, 0] - x[1, 0] * y[1, 3],
        x[0, 0] * x[0, 3] + x[1, 0] * x[1, 3] + y[0, 0] * y[0, 3] + y[1, 0] * y[1, 3],
        x[0, 1] * x[0, 2] + x[1, 1] * x[1, 2] + y[0, 1] * y[0, 2] + y[1, 1] * y[1, 2],
        (x[0, 1] ** 2 + x[0, 2] ** 2 - x[1, 0] ** 2 - x[1, 3] ** 2
         + y[0, 1] ** 2 + y[0, 2] ** 2 - y[1, 0] ** 2 - y[1, 3] ** 2),
        (x[0, 0] ** 2 + x[0, 3] ** 2 - x[1, 1] ** 2 - x[1, 2] ** 2
         + y[0, 0] ** 2 + y[0, 3] ** 2 - y[1, 1] ** 2 - y[1, 2] ** 2),
        (x[1, 0] * y[0, 0] + x[1, 1] * y[0, 1] + x[1, 2] * y[0, 2] + x[1, 3] * y[0, 3]
         - x[0, 0] * y[1, 0] - x[0, 1] * y[1, 1] - x[0, 2] * y[1, 2] - x[0, 3] * y[1, 3]),
        (x[0, 2] * y[0, 0] - x[0, 3] * y[0, 1] - x[0, 0] * y[0, 2] + x[0, 1] * y[0, 3]
         + x[1, 2] * y[1, 0] - x[1, 3] * y[1, 1] - x[1, 0] * y[1, 2] + x[1, 1] * y[1, 3]),
        (x[0, 1] * y[0, 0] - x[0, 0] * y[0, 1] - x[0, 3] * y[0, 2] + x[0, 2] * y[0, 3]
         + x[1, 1] * y[1, 0] - x[1, 0] * y[1, 1] - x[1, 3] * y[1, 2] + x[1, 2] * y[1, 3]),
        (x[0, 0] * x[1, 0] + x[0, 1] * x[1, 1] + x[0, 2] * x[1, 2] + x[0, 3] * x[1, 3]
         + y[0, 0] * y[1, 0] + y[0, 1] * y[1, 1] + y[0, 2] * y[1, 2] + y[0, 3] * y[1, 3]),
        (x[0, 0] * x[0, 2] - x[0, 1] * x[0, 3] + x[1, 0] * x[1, 2] - x[1, 1] * x[1, 3]
         + y[0, 0] * y[0, 2] - y[0, 1] * y[0, 3] + y[1, 0] * y[1, 2] - y[1, 1] * y[1, 3]),
        (x[0, 0] * x[0, 1] - x[0, 2] * x[0, 3] + x[1, 0] * x[1, 1] - x[1, 2] * x[1, 3]
         + y[0, 0] * y[0, 1] - y[0, 2] * y[0, 3] + y[1, 0] * y[1, 1] - y[1, 2] * y[1, 3]),
    ])


def gamma_coords(a, b, c, d) -> np.ndarray:
    """``z`` for ``(U(a, b) (x) I^4)(c Phi_0 + d Phi_1)`` in the phi_ij basis.

    With both bases unit-normalized the state ``c2_cross_state(z)`` is
    ``sqrt(2)`` times that image; the quadratics are homogeneous, so only
    the direction matters for them.
    """
    ac, bc = np.conj(a), np.conj(b)
    return np.array([a * c, b * c, a * d, b * d, -bc * c, ac * c, -bc * d, ac * d])


def kappa_coords(a, b, c, d) -> np.ndarray:
    """``gamma`` with ``phi_01`` and ``phi_10`` swapped."""
    ac, bc = np.conj(a), np.conj(b)
    return np.array([a * c, a * d, b * c, b * d, -bc * c, -bc * d, ac * c, ac * d])


def c2_cross_state(z: Sequence[complex]) -> Ket:
    """``sum_i |i> (x) sum_j z_ij phi_j`` with the unit phi_ij basis."""
    z = np.asarray(z, dtype=complex).reshape(2, 4)
    phi = build_phi_ij_basis().matrix()
    return Ket(np.concatenate([z[0] @ phi, z[1] @ phi]), N_QUBITS, 2)
