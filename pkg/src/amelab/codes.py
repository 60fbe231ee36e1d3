"""Uniformity, Knill-Laflamme purity and distance, and the Rains code ladder.

Errors are Pauli strings over ``{I, X, Y, Z}``; only qubit codes are
searched.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from amelab import kernels
from amelab.tensor_core import (DEFAULT_TOL, DimensionError, Ket, contract_sites,
                                reduced_density)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
GRAM_TOL = 1e-9
MAX_SEARCH_QUBITS = 8


class CodeError(ValueError):
    """Raised when an input fails a code-theoretic precondition."""


@dataclass(frozen=True)
class PauliString:
    letters: str

    def __post_init__(self):
        if not self.letters or set(self.letters) - set("IXYZ"):
            raise ValueError(f"not a Pauli word: {self.letters!r}")

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def weight(self) -> int:
        return sum(ch != "I" for ch in self.letters)

    def masks(self) -> tuple[int, int, int]:
        """``(x_mask, z_mask, n_Y)`` over the big-endian flat index."""
        x = z = ny = 0
        for pos, ch in enumerate(self.letters):
            bit = 1 << (self.n - 1 - pos)
            if ch in "XY":
                x |= bit
            if ch in "ZY":
                z |= bit
            ny += ch == "Y"
        return x, z, ny

    def matrix(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for ch in self.letters:
            out = np.kron(out, PAULI[ch])
        return out

    def apply(self, k: Ket) -> Ket:
        if k.local_dim != 2 or k.n != self.n:
            raise DimensionError("Pauli string and ket disagree on shape")
        x, z, ny = self.masks()
        b = np.arange(2 ** self.n)
        src = b ^ x
        sign = 1 - 2 * (np.array([bin(v).count("1") for v in (src & z)]) & 1)
        return Ket((1j ** ny) * sign * k.amps[src], k.n, 2)

    def __str__(self):
        return self.letters


def pauli_strings(n: int, weight: int) -> Iterator[PauliString]:
    """All ``3**weight * C(n, weight)`` Pauli strings of exactly this weight."""
    for support in itertools.combinations(range(n), weight):
        for letters in itertools.product("XYZ", repeat=weight):
            word = ["I"] * n
            for pos, ch in zip(support, letters):
                word[pos] = ch
            yield PauliString("".join(word))


def _mask_arrays(strings: Sequence[PauliString]):
    m = np.array([s.masks() for s in strings], dtype=np.int64).reshape(-1, 3)
    return m[:, 0], m[:, 1], m[:, 2]


class CodeBasis:
    """Ordered basis of a code, stored as unit vectors.

    The input vectors must be orthonormal up to one global rescaling; the
    common scale is kept in ``scale``.
    """

    def __init__(self, vectors: Iterable[Ket], tol: float = GRAM_TOL):
        vectors = tuple(vectors)
        if not vectors:
            raise CodeError("a code basis needs at least one vector")
        n, D = vectors[0].n, vectors[0].local_dim
        if any(v.n != n or v.local_dim != D for v in vectors):
            raise DimensionError("basis vectors live in different spaces")
        mat = np.array([v.amps for v in vectors])
        gram = mat.conj() @ mat.T
        c = float(np.mean(np.real(np.diag(gram))))
        if c <= 0:
            raise CodeError("basis vectors vanish")
        dev = np.abs(gram / c - np.eye(len(vectors))).max()
        if dev > tol:
            raise CodeError(f"basis is not orthonormal up to scale (Gram deviation {dev:.3g})")
        self.vectors = tuple(Ket(v.amps / np.sqrt(c), n, D) for v in vectors)
        self.scale = float(np.sqrt(c))

    @property
    def n(self) -> int:
        return self.vectors[0].n

    @property
    def local_dim(self) -> int:
        return self.vectors[0].local_dim

    @property
    def K(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        """``K x D**n`` array with the basis vectors as rows."""
        return np.array([v.amps for v in self.vectors])

    def projector(self) -> np.ndarray:
        m = self.matrix()
        return m.T @ m.conj()

    def __len__(self):
        return self.K

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i) -> Ket:
        return self.vectors[i]

    def __repr__(self):
        return f"CodeBasis(n={self.n}, K={self.K}, D={self.local_dim})"


class UniformityResult(NamedTuple):
    ok: bool
    deviation: float


class CriticalityResult(NamedTuple):
    ok: bool
    residual: float


class KLResult(NamedTuple):
    is_code: bool
    is_pure: bool
    worst_violation: float
    worst_expectation: float


@dataclass(frozen=True)
class CodeReport:
    n: int
    K: int
    D: int
    d: int
    is_pure: bool
    is_mds: bool
    worst_violation: float

    @property
    def params(self) -> str:
        return f"(({self.n},{self.K},{self.d}))_{self.D}"


def is_r_uniform(k: Ket, r: int, tol: float = DEFAULT_TOL) -> UniformityResult:
    """Check that every ``r``-site reduction of the unit state is ``I / D**r``."""
    if not 1 <= r <= k.n // 2:
        raise ValueError(f"r={r} out of range for n={k.n} (need 1 <= r <= {k.n // 2})")
    unit = k.normalized()
    target = np.eye(k.local_dim ** r) / k.local_dim ** r
    dev = 0.0
    for keep in itertools.combinations(range(1, k.n + 1), r):
        dev = max(dev, float(np.abs(reduced_density(unit, keep) - target).max()))
    return UniformityResult(dev <= tol, dev)


def is_ame(k: Ket, tol: float = DEFAULT_TOL) -> UniformityResult:
    return is_r_uniform(k, k.n // 2, tol)


def is_critical(k: Ket, tol: float = 1e-8) -> CriticalityResult:
    """Sum of squared single-site Pauli expectations; critical iff below ``tol**2``."""
    if k.local_dim != 2:
        raise DimensionError("criticality via Pauli expectations needs qubits")
    unit = k.normalized()
    residual = 0.0
    for site in range(1, k.n + 1):
        rho = reduced_density(unit, [site])
        for p in "XYZ":
            residual += abs(np.trace(rho @ PAULI[p])) ** 2
    return CriticalityResult(residual < tol ** 2, residual)


def _require_qubits(c: CodeBasis):
    if c.local_dim != 2:
        raise CodeError("Pauli error basis only implemented for qubits")


def error_matrices(c: CodeBasis, weight: int) -> tuple[list[PauliString], np.ndarray]:
    """All Pauli strings of one weight with their ``K x K`` matrices ``<u_i|E|u_j>``."""
    _require_qubits(c)
    strings = list(pauli_strings(c.n, weight))
    x, z, ny = _mask_arrays(strings)
    return strings, kernels.pauli_block(c.matrix(), x, z, ny)


def _violations(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-matrix distance from a scalar multiple of I, and max |entry|."""
    K = mats.shape[1]
    scal = np.trace(mats, axis1=1, axis2=2) / K
    off = np.abs(mats - scal[:, None, None] * np.eye(K)).max(axis=(1, 2))
    return off, np.abs(mats).max(axis=(1, 2))


def knill_laflamme_check(c: CodeBasis, d: int, tol: float = DEFAULT_TOL) -> KLResult:
    """Test the conditions for all Pauli errors with ``0 < wt(E) < d``.

    ``is_code``: every error matrix is a scalar multiple of the identity.
    ``is_pure``: every error matrix vanishes.
    """
    if d < 2:
        raise ValueError("distance must be at least 2")
    worst_v = worst_e = 0.0
    for w in range(1, min(d - 1, c.n) + 1):
        _, mats = error_matrices(c, w)
        off, mx = _violations(mats)
        worst_v = max(worst_v, float(off.max()))
        worst_e = max(worst_e, float(mx.max()))
    return KLResult(worst_v <= tol, worst_e <= tol, worst_v, worst_e)


def singleton_ok(n: int, K: int, d: int, D: int = 2) -> tuple[bool, bool]:
    """``(log_D K <= n - 2(d-1), equality)`` with exact integer arithmetic."""
    if min(n, K, d, D) < 1:
        raise ValueError("parameters must be positive integers")
    e = n - 2 * (d - 1)
    if e < 0:
        return False, False
    bound = D ** e
    return K <= bound, K == bound


def code_distance(c: CodeBasis, tol: float = DEFAULT_TOL) -> CodeReport:
    """Exhaustive distance search over Pauli strings of increasing weight.

    For ``K == 1`` the scalar condition is vacuous; the distance is then the
    first weight at which some expectation value is nonzero (the pure
    distance), which is the convention behind ``((n,1,d))`` states.
    """
    _require_qubits(c)
    if c.n > MAX_SEARCH_QUBITS:
        raise CodeError(f"exhaustive search capped at {MAX_SEARCH_QUBITS} qubits")
    pure = True
    worst = 0.0
    d = c.n + 1
    for w in range(1, c.n + 1):
        _, mats = error_matrices(c, w)
        off, mx = _violations(mats)
        fails = mx.max() > tol if c.K == 1 else off.max() > tol
        if fails:
            d = w
            break
        worst = max(worst, float(off.max()))
        if mx.max() > tol:
            pure = False
    _, mds = singleton_ok(c.n, c.K, d, c.local_dim)
    return CodeReport(c.n, c.K, c.local_dim, d, pure, mds, worst)


def rains_descend(c: CodeBasis, tol: float = DEFAULT_TOL, verify: bool = True) -> CodeBasis:
    """Contract site 1 of every basis vector: ((n,K,d)) -> ((n-1,DK,d-1)).

    Output order is ``sqrt(D) <j|_1 phi^i`` with ``i`` major, ``j`` minor.
    """
    report = code_distance(c, tol)
    if not report.is_pure or report.d < 3:
        raise CodeError(f"descent needs a pure code with d >= 3, got {report.params}"
                        f" (pure={report.is_pure})")
    D = c.local_dim
    out = []
    for phi in c:
        for j in range(D):
            bra = np.zeros(D)
            bra[j] = 1
            out.append(contract_sites(phi, [1], bra) * np.sqrt(D))
    try:
        new = CodeBasis(out)
    except CodeError as exc:
        raise CodeError(f"descended vectors are not orthonormal: {exc}") from exc
    if verify:
        kl = knill_laflamme_check(new, report.d - 1, tol)
        if not (kl.is_code and kl.is_pure):
            raise CodeError("descended basis fails the Knill-Laflamme conditions")
    return new


def purify_ascend(c: CodeBasis, tol: float = DEFAULT_TOL) -> Ket:
    """``sum_i |i> (x) phi_i / sqrt(D)`` for a K = D code; the result must be AME."""
    D = c.local_dim
    if c.K != D:
        raise CodeError(f"ascent needs exactly D={D} basis vectors, got {c.K}")
    amps = np.concatenate([phi.amps for phi in c]) / np.sqrt(D)
    state = Ket(amps, c.n + 1, D)
    res = is_ame(state, tol)
    if not res.ok:
        raise CodeError(f"purified state is not AME (deviation {res.deviation:.3g})")
    return state


def site1_projector(k: Ket) -> np.ndarray:
    """Projector onto span{<j|_1 k}, the code obtained by one descent step."""
    D = k.local_dim
    vecs = []
    for j in range(D):
        bra = np.zeros(D)
        bra[j] = 1
        vecs.append(contract_sites(k, [1], bra).amps)
    q, _ = np.linalg.qr(np.array(vecs).T)
    return q @ q.conj().T
