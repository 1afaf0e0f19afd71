"""Backend selection for the Smith normal form kernel.

The compiled extension is optional; when it is missing, or when a matrix
carries entries outside the int64-safe window, everything routes through
the pure Python routine.  Both backends share the elimination strategy
and certificate contract.
"""

from __future__ import annotations

from . import _snf_py

try:
    from . import _snf as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "pure"

_INPUT_LIMIT = (1 << 31) - 1


def _fits_int64(M):
    return all(abs(v) <= _INPUT_LIMIT for row in M for v in row)


def snf_pure(M):
    diagonal, U, V = _snf_py.smith_normal_form_py(M)
    return diagonal, U, V, "pure"


def snf_compiled(M):
    """Compiled path or None when unavailable/overflowing."""
    if _compiled is None or not M or not M[0] or not _fits_int64(M):
        return None
    try:
        diagonal, U, V = _compiled.snf_i64([list(map(int, row)) for row in M])
    except OverflowError:
        return None
    to_tuple = lambda arr: tuple(tuple(int(v) for v in row) for row in arr)
    return diagonal, to_tuple(U), to_tuple(V), "compiled"


def snf_raw(M):
    out = snf_compiled(M)
    if out is None:
        out = snf_pure(M)
    return out
