"""Pure Python/numpy versions of the hot loops in ``_ckernels.pyx``.

Signatures and results match the compiled module exactly; see
``amelab.kernels`` for how one is picked.
"""
import itertools

import numpy as np


def comb_sum(values, slots, coeffs, nindex):
    """Sum of ``prod_k coeffs[i_k] * prod_f values[f, code_f(i)]`` over all index tuples.

    ``values[f]`` is a flat table over the ``s`` index slots used by factor
    ``f`` (radix ``len(coeffs)``, first slot most significant) and
    ``slots[f]`` names which entries of the tuple fill those slots.
    """
    values = np.asarray(values, dtype=complex)
    slots = np.asarray(slots, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=complex)
    r = coeffs.size
    digits = np.array(list(itertools.product(range(r), repeat=nindex)), dtype=np.int64)
    weights = np.prod(coeffs[digits], axis=1)
    place = r ** np.arange(slots.shape[1] - 1, -1, -1)
    total = weights.copy()
    for f in range(slots.shape[0]):
        codes = digits[:, slots[f]] @ place
        total *= values[f, codes]
    return complex(total.sum())


def pauli_block(U, xmask, zmask, ny):
    """Matrix elements ``<u_i| P_s |u_j>`` for a batch of Pauli strings.

    A string is encoded by the bit masks of its X-part and Z-part over the
    flat index and its number of ``Y`` letters, so that
    ``P|c> = i**ny * (-1)**popcount(c & z) |c ^ x>``.

    Returns an array of shape ``(S, K, K)``.
    """
    U = np.ascontiguousarray(U, dtype=complex)
    xmask = np.asarray(xmask, dtype=np.int64)
    zmask = np.asarray(zmask, dtype=np.int64)
    ny = np.asarray(ny, dtype=np.int64)
    N = U.shape[1]
    b = np.arange(N, dtype=np.int64)
    popcnt = np.array([bin(v).count("1") for v in range(N)], dtype=np.int64)
    src = b[None, :] ^ xmask[:, None]
    sign = 1 - 2 * (popcnt[src & zmask[:, None]] & 1)
    phase = (1j ** (ny % 4))[:, None] * sign
    # (P u_j)[b] = phase(b ^ x) u_j[b ^ x]
    pu = phase[:, None, :] * U[:, src].transpose(1, 0, 2)
    return np.einsum("ib,sjb->sij", U.conj(), pu)


def balanced_multisets(nsites, degree):
    """All nondecreasing ``degree``-tuples of ``nsites``-bit strings whose bits
    are balanced: at every site exactly ``degree // 2`` entries have a 0.

    Bit ``nsites - 1 - k`` of each entry is site ``k`` (big-endian).
    """
    if degree % 2:
        return np.zeros((0, degree), dtype=np.int64)
    half = degree // 2
    nb = 1 << nsites
    bits = [[(b >> (nsites - 1 - k)) & 1 for k in range(nsites)] for b in range(nb)]
    out = []
    ones = [0] * nsites
    cur = []

    def rec(start, depth):
        if depth == degree:
            out.append(tuple(cur))
            return
        for b in range(start, nb):
            ok = True
            for k in range(nsites):
                o = ones[k] + bits[b][k]
                if o > half or (depth + 1 - o) > half:
                    ok = False
                    break
            if not ok:
                continue
            for k in range(nsites):
                ones[k] += bits[b][k]
            cur.append(b)
            rec(b, depth + 1)
            cur.pop()
            for k in range(nsites):
                ones[k] -= bits[b][k]

    rec(0, 0)
    return np.array(out, dtype=np.int64).reshape(-1, degree)
