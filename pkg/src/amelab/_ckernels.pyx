# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Must agree with ``_pykernels`` to rounding."""
import numpy as np

cdef extern from *:
    int __builtin_popcountl(unsigned long x) nogil


def comb_sum(values, slots, coeffs, int nindex):
    cdef double complex[:, ::1] vals = np.ascontiguousarray(values, dtype=np.complex128)
    cdef long[:, ::1] sl = np.ascontiguousarray(slots, dtype=np.int64)
    cdef double complex[::1] cf = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef int r = cf.shape[0]
    cdef int nf = sl.shape[0]
    cdef int ns = sl.shape[1]
    cdef long[::1] digit = np.zeros(nindex, dtype=np.int64)
    cdef long total_terms = 1
    cdef long t, code
    cdef int k, f, q
    cdef double complex term, acc = 0
    for k in range(nindex):
        total_terms *= r
    with nogil:
        for t in range(total_terms):
            term = 1
            for k in range(nindex):
                term = term * cf[digit[k]]
            for f in range(nf):
                code = 0
                for q in range(ns):
                    code = code * r + digit[sl[f, q]]
                term = term * vals[f, code]
            acc = acc + term
            # odometer increment, last index fastest
            k = nindex - 1
            while k >= 0:
                digit[k] += 1
                if digit[k] < r:
                    break
                digit[k] = 0
                k -= 1
    return complex(acc)


def pauli_block(U, xmask, zmask, ny):
    cdef double complex[:, ::1] u = np.ascontiguousarray(U, dtype=np.complex128)
    cdef long[::1] xm = np.ascontiguousarray(xmask, dtype=np.int64)
    cdef long[::1] zm = np.ascontiguousarray(zmask, dtype=np.int64)
    cdef long[::1] nys = np.ascontiguousarray(ny, dtype=np.int64)
    cdef Py_ssize_t S = xm.shape[0]
    cdef Py_ssize_t K = u.shape[0]
    cdef Py_ssize_t N = u.shape[1]
    out_arr = np.zeros((S, K, K), dtype=np.complex128)
    cdef double complex[:, :, ::1] out = out_arr
    cdef double complex[:, ::1] uc = np.ascontiguousarray(np.conj(U), dtype=np.complex128)
    cdef double complex ph0, ph
    cdef double complex[4] ipow
    ipow[0] = 1
    ipow[1] = 1j
    ipow[2] = -1
    ipow[3] = -1j
    cdef Py_ssize_t s, b, c, i, j
    with nogil:
        for s in range(S):
            ph0 = ipow[nys[s] % 4]
            for b in range(N):
                c = b ^ xm[s]
                if __builtin_popcountl(<unsigned long>(c & zm[s])) & 1:
                    ph = -ph0
                else:
                    ph = ph0
                for i in range(K):
                    for j in range(K):
                        out[s, i, j] = out[s, i, j] + uc[i, b] * ph * u[j, c]
    return out_arr


def balanced_multisets(int nsites, int degree):
    if degree % 2:
        return np.zeros((0, degree), dtype=np.int64)
    cdef int half = degree // 2
    cdef int nb = 1 << nsites
    cdef long[:, ::1] bits = np.array(
        [[(b >> (nsites - 1 - k)) & 1 for k in range(nsites)] for b in range(nb)],
        dtype=np.int64)
    cdef long[::1] ones = np.zeros(nsites, dtype=np.int64)
    cdef long[::1] cur = np.zeros(degree, dtype=np.int64)
    cdef signed char[::1] added = np.zeros(degree, dtype=np.int8)
    out = []
    cdef int depth = 0
    cdef int k, b
    cdef bint ok
    # iterative depth-first search over nondecreasing tuples
    while depth >= 0:
        if added[depth]:
            for k in range(nsites):
                ones[k] -= bits[cur[depth], k]
            added[depth] = 0
            cur[depth] += 1
        while cur[depth] < nb:
            b = cur[depth]
            ok = True
            for k in range(nsites):
                if ones[k] + bits[b, k] > half or depth + 1 - ones[k] - bits[b, k] > half:
                    ok = False
                    break
            if ok:
                break
            cur[depth] += 1
        if cur[depth] >= nb:
            depth -= 1
            continue
        for k in range(nsites):
            ones[k] += bits[cur[depth], k]
        added[depth] = 1
        if depth == degree - 1:
            out.append(tuple([cur[k] for k in range(degree)]))
        else:
            depth += 1
            cur[depth] = cur[depth - 1]
            added[depth] = 0
    return np.array(out, dtype=np.int64).reshape(-1, degree)
