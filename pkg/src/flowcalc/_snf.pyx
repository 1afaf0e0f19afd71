# cython: boundscheck=False, wraparound=False, cdivision=True
"""Smith normal form kernel over int64.

Same elimination strategy as the pure Python routine.  Every entry of the
work matrix and of both transformation matrices is kept below 2**31 in
absolute value, which makes each intermediate product fit comfortably in
int64; the moment an entry would cross the line the kernel raises
OverflowError and the caller falls back to arbitrary precision.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef cnp.int64_t LIMIT = <cnp.int64_t>1 << 31


cdef inline cnp.int64_t _abs64(cnp.int64_t v) nogil:
    return -v if v < 0 else v


cdef int _check_row(cnp.int64_t[:, :] X, Py_ssize_t i) except -1:
    cdef Py_ssize_t j
    for j in range(X.shape[1]):
        if _abs64(X[i, j]) >= LIMIT:
            raise OverflowError("entry limit crossed")
    return 0


cdef int _check_col(cnp.int64_t[:, :] X, Py_ssize_t j) except -1:
    cdef Py_ssize_t i
    for i in range(X.shape[0]):
        if _abs64(X[i, j]) >= LIMIT:
            raise OverflowError("entry limit crossed")
    return 0


def snf_i64(object matrix):
    """(diagonal, U, V) for an int64 matrix with entries below 2**31."""
    A_arr = np.array(matrix, dtype=np.int64, copy=True, order="C")
    if A_arr.ndim != 2:
        raise ValueError("need a 2-d matrix")
    cdef Py_ssize_t m = A_arr.shape[0]
    cdef Py_ssize_t n = A_arr.shape[1]
    U_arr = np.eye(m, dtype=np.int64)
    V_arr = np.eye(n, dtype=np.int64)
    cdef cnp.int64_t[:, :] A = A_arr
    cdef cnp.int64_t[:, :] U = U_arr
    cdef cnp.int64_t[:, :] V = V_arr
    cdef Py_ssize_t t = 0, i, j, pi, pj
    cdef cnp.int64_t best, v, q, piv, tmp
    cdef bint found, dirty
    cdef Py_ssize_t offender

    for i in range(m):
        _check_row(A, i)

    while True:
        found = False
        best = 0
        pi = 0
        pj = 0
        for i in range(t, m):
            for j in range(t, n):
                v = _abs64(A[i, j])
                if v != 0 and (not found or v < best):
                    best = v
                    pi = i
                    pj = j
                    found = True
        if not found:
            break
        if pi != t:
            for j in range(n):
                tmp = A[t, j]; A[t, j] = A[pi, j]; A[pi, j] = tmp
            for j in range(m):
                tmp = U[t, j]; U[t, j] = U[pi, j]; U[pi, j] = tmp
        if pj != t:
            for i in range(m):
                tmp = A[i, t]; A[i, t] = A[i, pj]; A[i, pj] = tmp
            for i in range(n):
                tmp = V[i, t]; V[i, t] = V[i, pj]; V[i, pj] = tmp
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i, t] != 0:
                    q = A[i, t] // A[t, t]
                    if A[i, t] % A[t, t] != 0 and (A[i, t] < 0) != (A[t, t] < 0):
                        q -= 1  # floor division to match the pure path
                    if q != 0:
                        for j in range(n):
                            A[i, j] = A[i, j] - q * A[t, j]
                        for j in range(m):
                            U[i, j] = U[i, j] - q * U[t, j]
                        _check_row(A, i)
                        _check_row(U, i)
                    if A[i, t] != 0:
                        for j in range(n):
                            tmp = A[t, j]; A[t, j] = A[i, j]; A[i, j] = tmp
                        for j in range(m):
                            tmp = U[t, j]; U[t, j] = U[i, j]; U[i, j] = tmp
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t, j] != 0:
                    q = A[t, j] // A[t, t]
                    if A[t, j] % A[t, t] != 0 and (A[t, j] < 0) != (A[t, t] < 0):
                        q -= 1
                    if q != 0:
                        for i in range(m):
                            A[i, j] = A[i, j] - q * A[i, t]
                        for i in range(n):
                            V[i, j] = V[i, j] - q * V[i, t]
                        _check_col(A, j)
                        _check_col(V, j)
                    if A[t, j] != 0:
                        for i in range(m):
                            tmp = A[i, t]; A[i, t] = A[i, j]; A[i, j] = tmp
                        for i in range(n):
                            tmp = V[i, t]; V[i, t] = V[i, j]; V[i, j] = tmp
                        dirty = True
            if dirty:
                continue
            piv = A[t, t]
            offender = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i, j] % piv != 0:
                        offender = i
                        break
                if offender >= 0:
                    break
            if offender < 0:
                break
            for j in range(n):
                A[t, j] = A[t, j] + A[offender, j]
            for j in range(m):
                U[t, j] = U[t, j] + U[offender, j]
            _check_row(A, t)
            _check_row(U, t)
        if A[t, t] < 0:
            for j in range(n):
                A[t, j] = -A[t, j]
            for j in range(m):
                U[t, j] = -U[t, j]
        t += 1

    diagonal = tuple(int(A[i, i]) for i in range(t))
    return diagonal, U_arr, V_arr
