"""Four qubits as the odd part of Z2-graded so(8), and norm descent on SL orbits.

A 4-qubit state ``k`` corresponds to the 4x4 matrix ``A = T K T^T`` where
``K`` is ``k`` reshaped to 4x4; the grade-1 element is
``M_A = [[0, A], [-A^T, 0]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from amelab.codes import is_critical
from amelab.constructions import build_T
from amelab.tensor_core import DimensionError, Ket, apply_local, reduced_density


class NullconeError(RuntimeError):
    """The orbit norm collapsed: the state has no critical point in its closure."""


@dataclass(frozen=True, eq=False)
class G1Element:
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.shape != (4, 4):
            raise DimensionError(f"grade-1 block must be 4x4, got {a.shape}")
        object.__setattr__(self, "a", a)

    @property
    def matrix(self) -> np.ndarray:
        z = np.zeros((4, 4), dtype=complex)
        return np.block([[z, self.a], [-self.a.T, z]])

    @property
    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T


def state_to_matrix(k: Ket) -> G1Element:
    if k.n != 4 or k.local_dim != 2:
        raise DimensionError("expected a 4-qubit state")
    T = build_T()
    return G1Element(T @ k.amps.reshape(4, 4) @ T.T)


def matrix_to_state(g: G1Element) -> Ket:
    Td = build_T().conj().T
    return Ket((Td @ g.a @ Td.T).ravel(), 4, 2)


def bracket(m, n) -> np.ndarray:
    return m @ n - n @ m


class CriticalMatrixResult(NamedTuple):
    ok: bool
    residual: float


def is_critical_matrix(g: G1Element, tol: float = 1e-8) -> CriticalMatrixResult:
    """Residual ``||[M, M^dag]||_F``; critical iff it is below ``tol ||A||_F^2``.

    For the matrix of a unit 4-qubit state the residual equals the square
    root of the Pauli residual of ``is_critical``, so both tests agree at
    the same ``tol``.
    """
    m = g.matrix
    residual = float(np.linalg.norm(bracket(m, m.conj().T)))
    scale = float(np.linalg.norm(g.a) ** 2)
    return CriticalMatrixResult(residual < tol * scale or residual == 0.0, residual)


def commutes(g1: G1Element, g2: G1Element, tol: float = 1e-10) -> bool:
    """``[M_A, M_B] = 0``, i.e. ``A B^T`` and ``B^T A`` are both symmetric."""
    ab, ba = g1.a @ g2.a.T, g2.a.T @ g1.a
    return bool(np.abs(ab - ab.T).max() <= tol and np.abs(ba - ba.T).max() <= tol)


def commutes_with_dagger(g1: G1Element, g2: G1Element, tol: float = 1e-10) -> bool:
    """``[M_A, M_B^dag] = 0``."""
    return bool(np.abs(bracket(g1.matrix, g2.dagger)).max() <= tol)


def commutant_basis(g: G1Element, tol: float = 1e-10) -> list[G1Element]:
    """Basis of ``{A : [M_A, M_B] = 0}`` for the given ``B``."""
    cols = []
    for idx in range(16):
        e = np.zeros(16, dtype=complex)
        e[idx] = 1
        cols.append(bracket(G1Element(e.reshape(4, 4)).matrix, g.matrix).ravel())
    lin = np.array(cols).T
    _, s, vh = np.linalg.svd(lin)
    rank = int(np.sum(s > tol * max(s[0], 1.0)))
    return [G1Element(v.conj().reshape(4, 4)) for v in vh[rank:]]


def random_so4_algebra(rng: np.random.Generator) -> np.ndarray:
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return h - h.T


def random_g0(rng: np.random.Generator) -> np.ndarray:
    z = np.zeros((4, 4), dtype=complex)
    return np.block([[random_so4_algebra(rng), z], [z, random_so4_algebra(rng)]])


def random_g1(rng: np.random.Generator) -> np.ndarray:
    return G1Element(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))).matrix


def _grade_residuals(m: np.ndarray) -> tuple[float, float]:
    """Distance from g0 and from g1 (blocks and skew-symmetry)."""
    skew = np.abs(m + m.T).max()
    off = max(np.abs(m[:4, 4:]).max(), np.abs(m[4:, :4]).max())
    diag = max(np.abs(m[:4, :4]).max(), np.abs(m[4:, 4:]).max())
    return float(max(off, skew)), float(max(diag, skew))


@dataclass
class GradingReport:
    g0g0: float
    g0g1: float
    g1g1: float
    killing: float
    samples: int

    @property
    def worst(self) -> float:
        return max(self.g0g0, self.g0g1, self.g1g1, self.killing)

    def ok(self, tol: float = 1e-12) -> bool:
        return self.worst < tol


def grading_check(samples: int = 20, seed: int = 0) -> GradingReport:
    """Sample brackets of random homogeneous elements and the Killing identity.

    Residuals are relative to the size of the bracket involved.
    """
    rng = np.random.default_rng(seed)
    r00 = r01 = r11 = rk = 0.0
    for _ in range(samples):
        e, f = random_g0(rng), random_g0(rng)
        m, n = random_g1(rng), random_g1(rng)
        b = bracket(e, f)
        r00 = max(r00, _grade_residuals(b)[0] / np.abs(b).max())
        b = bracket(e, m)
        r01 = max(r01, _grade_residuals(b)[1] / np.abs(b).max())
        b = bracket(m, n)
        r11 = max(r11, _grade_residuals(b)[0] / np.abs(b).max())
        elems = [random_g0(rng) + random_g1(rng) for _ in range(3)]
        ll, mm, nn = elems
        lhs = np.trace(bracket(ll, mm) @ nn)
        rhs = np.trace(mm @ bracket(nn, ll))
        rk = max(rk, abs(lhs - rhs) / max(abs(lhs), 1.0))
    return GradingReport(float(r00), float(r01), float(r11), float(rk), samples)


@dataclass
class ScalingTrace:
    iterations: int = 0
    norms_sq: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    converged: bool = False

    def is_monotone(self) -> bool:
        return all(b <= a * (1 + 1e-14) for a, b in zip(self.norms_sq, self.norms_sq[1:]))


def _traceless_reductions(v: np.ndarray, n: int) -> list[np.ndarray]:
    unit = Ket(v / np.linalg.norm(v), n, 2)
    out = []
    for site in range(1, n + 1):
        rho = reduced_density(unit, [site])
        out.append(rho - np.trace(rho) / 2 * np.eye(2))
    return out


def kempf_ness_descend(k: Ket, step: float = 0.25, max_iter: int = 2000,
                       tol: float = 1e-8, nullcone_ratio: float = 1e-6,
                       ) -> tuple[Ket, ScalingTrace]:
    """Minimize the norm over the SL2^n orbit by moment-map gradient steps.

    Each step applies ``exp(-s tau_i)`` on every site, where ``tau_i`` is the
    traceless part of that site's reduced density matrix; ``s`` starts at
    ``step`` and is halved until the norm decreases. Stops once the
    criticality residual (sum of squared local Pauli expectations) is below
    ``tol``.

    Raises
    ------
    NullconeError
        If the norm shrinks below ``nullcone_ratio`` times its initial value.
    """
    if k.local_dim != 2:
        raise DimensionError("descent implemented for qubits")
    v = np.array(k.amps)
    norm0 = np.linalg.norm(v)
    if norm0 == 0:
        raise ValueError("zero state")
    trace = ScalingTrace()
    residual = is_critical(Ket(v, k.n)).residual
    trace.norms_sq.append(float(norm0 ** 2))
    trace.residuals.append(residual)
    for _ in range(max_iter):
        if residual < tol:
            trace.converged = True
            break
        taus = _traceless_reductions(v, k.n)
        cur = np.linalg.norm(v)
        s = step
        for _halving in range(60):
            cand = apply_local(Ket(v, k.n), [expm(-s * t) for t in taus]).amps
            if np.linalg.norm(cand) < cur:
                break
            s /= 2
        else:
            break
        v = cand
        nrm = np.linalg.norm(v)
        if nrm < nullcone_ratio * norm0 or nrm < 1e-12:
            raise NullconeError(
                f"norm fell to {nrm / norm0:.3g} of its start after {trace.iterations + 1} steps")
        residual = is_critical(Ket(v, k.n)).residual
        trace.iterations += 1
        trace.norms_sq.append(float(nrm ** 2))
        trace.residuals.append(residual)
        trace.steps.append(s)
    else:
        trace.converged = residual < tol
    return Ket(v, k.n), trace
