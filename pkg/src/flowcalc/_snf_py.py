"""Smith normal form over the integers, pure Python.

Arbitrary precision; always available.  Returns (diagonal, U, V) with
U*M*V equal to the diagonal matrix padded with zeros, U and V unimodular,
and the diagonal entries positive with each dividing the next.  Pivots
are chosen by smallest nonzero absolute value to limit entry growth.
"""

from __future__ import annotations


def smith_normal_form_py(M):
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(map(int, row)) for row in M]
    for row in A:
        if len(row) != n:
            raise ValueError("ragged matrix")
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_combine(i, k, q):
        # row_i -= q * row_k
        Ai, Ak = A[i], A[k]
        for j in range(n):
            Ai[j] -= q * Ak[j]
        Ui, Uk = U[i], U[k]
        for j in range(m):
            Ui[j] -= q * Uk[j]

    def col_combine(j, k, q):
        # col_j -= q * col_k
        for i in range(m):
            A[i][j] -= q * A[i][k]
        for i in range(n):
            V[i][j] -= q * V[i][k]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def col_swap(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    t = 0
    while True:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v:
                    v = -v if v < 0 else v
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    if q:
                        row_combine(i, t, q)
                    if A[i][t]:
                        row_swap(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    if q:
                        col_combine(j, t, q)
                    if A[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            piv = A[t][t]
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # pull the offending row up so the pivot can shrink to the gcd
            Ao, Uo = A[offender], U[offender]
            At, Ut = A[t], U[t]
            for j in range(n):
                At[j] += Ao[j]
            for j in range(m):
                Ut[j] += Uo[j]
        if A[t][t] < 0:
            for j in range(n):
                A[t][j] = -A[t][j]
            for j in range(m):
                U[t][j] = -U[t][j]
        t += 1

    diagonal = tuple(A[i][i] for i in range(t))
    return diagonal, tuple(tuple(r) for r in U), tuple(tuple(r) for r in V)
