"""The named states and codes built from the 6-qubit AME state.

Everything is returned unit-normalized except the raw ququad GHZ vector.
The printed prefactor of the 6-qubit state is ``2 exp(-i pi/4)``, which
gives it norm 4; ``PSI6_PREFACTOR`` and ``PSI6_PRINTED_NORM`` record that.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from amelab.codes import PAULI, CodeBasis
from amelab.tensor_core import DimensionError, Ket, contract_sites, kron

PSI6_PREFACTOR = 2 * np.exp(-1j * np.pi / 4)
PSI6_PRINTED_NORM = 4.0

J = np.array([[0, -1], [1, 0]], dtype=complex)  # -iY

Q = 0.5 * np.array([[1 + 1j, 1 + 1j], [-1 + 1j, 1 - 1j]])

# Table of W(D4)^+ generators U and the printed factors of T^dag U T.
TABLE1 = [
    (np.array([[0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
     0.5 * np.array([[1 - 1j, 1 - 1j], [-1 - 1j, 1 + 1j]]),
     0.5 * np.array([[1 + 1j, -1 - 1j], [1 - 1j, 1 - 1j]])),
    (np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
     np.array([[1j, 0], [0, -1j]]),
     np.array([[0, 1], [-1, 0]], dtype=complex)),
    (np.diag([1, 1, -1, -1]).astype(complex),
     np.array([[0, 1j], [1j, 0]]),
     np.array([[0, 1j], [1j, 0]])),
]


@dataclass(frozen=True)
class NamedState:
    label: str
    payload: Any
    metadata: dict = field(default_factory=dict)


def build_T() -> np.ndarray:
    """The 4x4 unitary whose conjugation maps SL2 x SL2 onto SO4."""
    return np.array([[1, 0, 0, 1],
                     [0, 1j, 1j, 0],
                     [0, -1, 1, 0],
                     [1j, 0, 0, -1j]]) / np.sqrt(2)


def double_cover(a, b) -> np.ndarray:
    """``T (a (x) b) T^dag``; orthogonal for a, b in SL2, real for SU2."""
    T = build_T()
    return T @ np.kron(a, b) @ T.conj().T


def build_ghz4(m: int) -> Ket:
    """``sum_i |i>^m`` on ``m`` ququads, unnormalized (four unit amplitudes)."""
    if m < 1:
        raise ValueError("need at least one ququad")
    amps = np.zeros(4 ** m, dtype=complex)
    for i in range(4):
        amps[sum(i * 4 ** p for p in range(m))] = 1.0
    return Ket(amps, m, 4)


def ququads_to_qubits(k: Ket) -> Ket:
    """Reinterpret ``|2i+j>`` on each ququad as ``|i>|j>`` on two qubits."""
    if k.local_dim != 4:
        raise DimensionError("expected ququads")
    return Ket(k.amps, 2 * k.n, 2)


def build_psi_m(m: int) -> Ket:
    """``(T^dag)^{(x) m} |GHZ(m)>`` as a unit 2m-qubit state; 3-uniform for m >= 3."""
    if m < 3:
        raise ValueError(f"the 3-uniform family starts at m=3, got m={m}")
    Td = build_T().conj().T
    t = build_ghz4(m).tensor
    for axis in range(m):
        t = np.moveaxis(np.tensordot(Td, t, axes=([1], [axis])), 0, axis)
    amps = t.ravel()
    return Ket(amps / np.linalg.norm(amps), 2 * m, 2)


def build_psi6() -> Ket:
    """The 6-qubit AME state with its printed phase, scaled to unit norm."""
    k = build_psi_m(3)
    phase = PSI6_PREFACTOR / abs(PSI6_PREFACTOR)
    return k * phase


def _u_vectors() -> list[Ket]:
    b = Ket.basis
    return [b("0000") + b("1111"), b("0011") + b("1100"),
            b("0101") + b("1010"), b("0110") + b("1001")]


def build_c2_basis() -> CodeBasis:
    """``u_1..u_4``: the +1 eigenspace of XXXX and ZZZZ, unit vectors."""
    return CodeBasis(_u_vectors())


def build_c1_basis() -> CodeBasis:
    """``Phi_0, Phi_1``: unit rescalings of ``<0|_1 Psi`` and ``<1|_1 Psi``."""
    psi = build_psi6()
    return CodeBasis([contract_sites(psi, [1], [1, 0]), contract_sites(psi, [1], [0, 1])])


def build_phi_ij_basis() -> CodeBasis:
    """``phi_00, phi_01, phi_10, phi_11`` from contracting sites 1 and 2 of Psi."""
    psi = build_psi6()
    vecs = []
    for i, j in itertools.product(range(2), repeat=2):
        bra = np.zeros(4)
        bra[2 * i + j] = 1
        vecs.append(contract_sites(psi, [1, 2], bra))
    return CodeBasis(vecs)


def c1_point(x, y) -> Ket:
    """``x Phi_0 + y Phi_1``."""
    phi0, phi1 = build_c1_basis()
    return phi0 * x + phi1 * y


def spin_flip(k: Ket) -> Ket:
    """Antilinear map ``J^{(x) n} conj(k)`` with ``J = -iY``."""
    if k.local_dim != 2:
        raise DimensionError("spin flip is defined for qubits")
    t = np.conj(k.tensor)
    for axis in range(k.n):
        t = np.moveaxis(np.tensordot(J, t, axes=([1], [axis])), 0, axis)
    return Ket(t.ravel(), k.n, 2)


def build_w_c1_generators() -> list[np.ndarray]:
    """``iX, iZ, Q``: generators of the order-24 symmetry group of C1."""
    return [1j * PAULI["X"], 1j * PAULI["Z"], Q.copy()]


def c2_stabilizers() -> list[np.ndarray]:
    """``X^{(x)4}`` and ``Z^{(x)4}``."""
    return [kron(*[PAULI["X"]] * 4), kron(*[PAULI["Z"]] * 4)]


CONSTRUCTORS = {
    "psi6": lambda: NamedState("PSI6", build_psi6(), {
        "printed_prefactor": [PSI6_PREFACTOR.real, PSI6_PREFACTOR.imag],
        "printed_norm": PSI6_PRINTED_NORM}),
    "psi_m": lambda m=3: NamedState(f"PSI_M({m})", build_psi_m(m), {
        "m": m, "printed_norm": 2.0}),
    "ghz4": lambda m=3: NamedState(f"GHZ4({m})", build_ghz4(m), {"m": m, "normalized": False}),
    "c1": lambda: NamedState("C1_BASIS", build_c1_basis(), {"printed_norm": 2 * np.sqrt(2)}),
    "c2": lambda: NamedState("C2_BASIS", build_c2_basis(), {"printed_norm": np.sqrt(2)}),
    "u": lambda: NamedState("U_BASIS", build_c2_basis(), {"printed_norm": np.sqrt(2)}),
    "phi_ij": lambda: NamedState("PHI_IJ_BASIS", build_phi_ij_basis(), {"printed_norm": 2.0}),
}


def construct(name: str, **params) -> NamedState:
    try:
        factory = CONSTRUCTORS[name]
    except KeyError:
        raise ValueError(f"unknown construction {name!r}; choose from {sorted(CONSTRUCTORS)}")
    return factory(**params)
