"""Dense multilinear algebra on pure states.

Sites are labelled ``1..n`` and amplitudes are stored big-endian: site 1 is
the most significant base-``D`` digit of the flat index, so ``|0101>`` is
``amps[0b0101]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when shapes or site labels do not fit together."""


@dataclass(frozen=True, eq=False)
class Ket:
    """An ``n``-site pure state with uniform local dimension."""

    amps: np.ndarray
    n: int
    local_dim: int = 2

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).ravel()
        if self.n < 1 or self.local_dim < 2:
            raise DimensionError(f"bad site count/local dim: n={self.n}, D={self.local_dim}")
        if amps.size != self.local_dim ** self.n:
            raise DimensionError(
                f"expected {self.local_dim ** self.n} amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise DimensionError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_array(cls, amps, local_dim: int = 2) -> "Ket":
        amps = np.asarray(amps, dtype=complex).ravel()
        n = round(np.log(amps.size) / np.log(local_dim))
        return cls(amps, n, local_dim)

    @classmethod
    def basis(cls, digits: str, local_dim: int = 2) -> "Ket":
        """Computational basis ket from a digit string such as ``"0110"``."""
        amps = np.zeros(local_dim ** len(digits), dtype=complex)
        amps[int(digits, local_dim)] = 1.0
        return cls(amps, len(digits), local_dim)

    @property
    def tensor(self) -> np.ndarray:
        return self.amps.reshape((self.local_dim,) * self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "Ket":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return Ket(self.amps / nrm, self.n, self.local_dim)

    def inner(self, other: "Ket") -> complex:
        """``<self|other>``."""
        _check_same_space(self, other)
        return complex(np.vdot(self.amps, other.amps))

    def allclose(self, other: "Ket", tol: float = DEFAULT_TOL) -> bool:
        _check_same_space(self, other)
        return bool(np.max(np.abs(self.amps - other.amps)) <= tol)

    def _like(self, amps) -> "Ket":
        return Ket(amps, self.n, self.local_dim)

    def __add__(self, other: "Ket") -> "Ket":
        _check_same_space(self, other)
        return self._like(self.amps + other.amps)

    def __sub__(self, other: "Ket") -> "Ket":
        _check_same_space(self, other)
        return self._like(self.amps - other.amps)

    def __mul__(self, scalar) -> "Ket":
        return self._like(complex(scalar) * self.amps)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Ket":
        return self._like(self.amps / complex(scalar))

    def __neg__(self) -> "Ket":
        return self._like(-self.amps)

    def __repr__(self):
        return f"Ket(n={self.n}, local_dim={self.local_dim}, norm={self.norm():.6g})"


def _check_same_space(a: Ket, b: Ket) -> None:
    if a.n != b.n or a.local_dim != b.local_dim:
        raise DimensionError(
            f"kets live in different spaces: ({a.n}, {a.local_dim}) vs ({b.n}, {b.local_dim})")


def site_subset(sites: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate 1-based site labels and return them sorted."""
    out = tuple(sorted(int(s) for s in sites))
    if len(set(out)) != len(out):
        raise DimensionError(f"repeated site in {out}")
    if out and (out[0] < 1 or out[-1] > n):
        raise DimensionError(f"sites {out} not within 1..{n}")
    return out


def contract_sites(k: Ket, sites: Iterable[int], bra) -> Ket:
    """Apply a bra on ``sites`` and return the state on the remaining sites.

    ``bra`` holds the components of the bra itself (no conjugation is
    applied), indexed big-endian over the sorted ``sites``.
    """
    sites = site_subset(sites, k.n)
    D = k.local_dim
    bra = np.asarray(bra, dtype=complex).ravel()
    if not sites:
        raise DimensionError("no sites to contract")
    if len(sites) == k.n:
        raise DimensionError("contracting every site leaves an empty complement")
    if bra.size != D ** len(sites):
        raise DimensionError(f"bra has length {bra.size}, expected {D ** len(sites)}")
    axes = [s - 1 for s in sites]
    rest = [a for a in range(k.n) if a not in axes]
    mat = np.transpose(k.tensor, axes + rest).reshape(D ** len(sites), -1)
    return Ket(bra @ mat, len(rest), D)


def reduced_density(k: Ket, keep: Iterable[int]) -> np.ndarray:
    """Density matrix of ``|k><k|`` with every site outside ``keep`` traced out."""
    keep = site_subset(keep, k.n)
    if not keep:
        raise DimensionError("keep set must be nonempty")
    D = k.local_dim
    axes = [s - 1 for s in keep]
    rest = [a for a in range(k.n) if a not in axes]
    mat = np.transpose(k.tensor, axes + rest).reshape(D ** len(keep), -1)
    return mat @ mat.conj().T


def apply_local(k: Ket, ops: Sequence) -> Ket:
    """Apply ``ops[0] (x) ops[1] (x) ... (x) ops[n-1]`` to ``k``."""
    if len(ops) != k.n:
        raise DimensionError(f"need {k.n} local operators, got {len(ops)}")
    D = k.local_dim
    t = k.tensor
    for axis, op in enumerate(ops):
        op = np.asarray(op, dtype=complex)
        if op.shape != (D, D):
            raise DimensionError(f"operator on site {axis + 1} has shape {op.shape}")
        t = np.moveaxis(np.tensordot(op, t, axes=([1], [axis])), 0, axis)
    return Ket(t.ravel(), k.n, D)


def kron(*mats) -> np.ndarray:
    """Kronecker product of any number of matrices, left to right."""
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def nearest_kron_factor(m) -> tuple[np.ndarray, np.ndarray, float]:
    """Best ``A (x) B`` approximation of a 4x4 matrix with 2x2 factors.

    Uses the rank-one truncation of the Van Loan rearrangement. The phase is
    fixed so that the first nonzero entry of ``A`` (row-major) is real
    positive, and a positive real rescaling equalizes ``|det A|`` and
    ``|det B|`` (both become 1 for unitary input).

    Returns
    -------
    A, B : ndarray
    residual : float
        ``||m - A (x) B||_F``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 matrix, got {m.shape}")
    if not np.any(m):
        raise ValueError("zero matrix has no Kronecker factorization")
    # R[(i,j),(k,l)] = m[(i,k),(j,l)]
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = np.sqrt(s[0]) * u[:, 0].reshape(2, 2)
    b = np.sqrt(s[0]) * vh[0].reshape(2, 2)
    flat = a.ravel()
    lead = flat[np.flatnonzero(np.abs(flat) > 1e-12 * np.abs(flat).max())[0]]
    phase = lead / abs(lead)
    a, b = a / phase, b * phase
    da, db = abs(np.linalg.det(a)), abs(np.linalg.det(b))
    if da > 1e-300 and db > 1e-300:
        c = (db / da) ** 0.25
        a, b = a * c, b / c
    residual = float(np.linalg.norm(m - np.kron(a, b)))
    return a, b, residual


def random_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SU(2) in Cayley-Klein form."""
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    a, b = v[0] + 1j * v[1], v[2] + 1j * v[3]
    return np.array([[a, b], [-np.conj(b), np.conj(a)]])


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_sl2(rng: np.random.Generator, scale: float = 0.3) -> np.ndarray:
    """``exp`` of a random traceless 2x2 matrix; condition number grows with ``scale``."""
    from scipy.linalg import expm

    h = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    h -= np.trace(h) / 2 * np.eye(2)
    return expm(h)


def random_ket(n: int, rng: np.random.Generator, local_dim: int = 2) -> Ket:
    dim = local_dim ** n
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Ket(amps / np.linalg.norm(amps), n, local_dim)
