"""Integer homology of truncated chain complexes via Smith normal form.

Each SNF call returns unimodular certificates; verify() recomputes the
product exactly, so nothing downstream has to trust the elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._kernel import BACKEND, snf_raw
from .errors import DegreeOutOfRange, EmptyComplex

KERNEL_BACKEND = BACKEND


@dataclass(frozen=True)
class SNFResult:
    """diagonal = nonzero elementary divisors, d_1 | d_2 | ...; U*M*V is
    the diagonal padded with zeros; U, V unimodular."""

    diagonal: tuple
    left: tuple
    right: tuple
    backend: str

    @property
    def rank(self):
        return len(self.diagonal)

    def verify(self, M):
        m = len(self.left)
        n = len(self.right)
        rows = len(M)
        cols = len(M[0]) if rows else 0
        if m != rows or n != cols:
            return False
        for k in range(1, len(self.diagonal)):
            if self.diagonal[k] % self.diagonal[k - 1]:
                return False
        if any(d <= 0 for d in self.diagonal):
            return False
        # D = U * M * V, exactly
        UM = [
            [sum(self.left[i][k] * M[k][j] for k in range(m)) for j in range(n)]
            for i in range(m)
        ]
        for i in range(m):
            for j in range(n):
                v = sum(UM[i][k] * self.right[k][j] for k in range(n))
                want = self.diagonal[i] if i == j and i < len(self.diagonal) else 0
                if v != want:
                    return False
        return True


def smith_normal_form(M):
    """Smith normal form with certificates.  M is any rectangular integer
    matrix given as a sequence of rows; the zero-size cases are fine."""
    M = [list(map(int, row)) for row in M]
    widths = {len(row) for row in M}
    if len(widths) > 1:
        raise ValueError("ragged matrix")
    diagonal, U, V, backend = snf_raw(M)
    return SNFResult(diagonal=tuple(diagonal), left=U, right=V, backend=backend)


def _rank(M):
    if not M or not M[0]:
        return 0
    return smith_normal_form(M).rank


@dataclass(frozen=True)
class HomologyGroup:
    """Z^betti plus one finite cyclic factor per torsion entry (each
    dividing the next)."""

    betti: int
    torsion: tuple

    def is_trivial(self):
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = ["Z"] * self.betti + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self):
        return {"betti": self.betti, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class ChainComplex:
    """ranks[n] = rank of the degree-n group; boundaries[k] is the matrix
    of the boundary map from degree k+1 to degree k, with ranks[k] rows."""

    ranks: tuple
    boundaries: tuple

    @property
    def top_degree(self):
        return len(self.ranks) - 1

    def boundary(self, n):
        """The matrix of the boundary map out of degree n (n >= 1)."""
        return self.boundaries[n - 1]

    def validate(self):
        if len(self.boundaries) != len(self.ranks) - 1:
            raise ValueError("need exactly one boundary matrix per positive degree")
        for k, M in enumerate(self.boundaries):
            rows = len(M)
            if rows != self.ranks[k]:
                raise ValueError(f"boundary {k+1}: {rows} rows, expected {self.ranks[k]}")
            for row in M:
                if len(row) != self.ranks[k + 1]:
                    raise ValueError(f"boundary {k+1}: bad row width")
        for k in range(len(self.boundaries) - 1):
            A, B = self.boundaries[k], self.boundaries[k + 1]
            rows, mid, cols = self.ranks[k], self.ranks[k + 1], self.ranks[k + 2]
            for i in range(rows):
                for j in range(cols):
                    if sum(A[i][l] * B[l][j] for l in range(mid)) != 0:
                        raise ValueError(f"boundary squared is nonzero at degrees {k+2}->{k}")
        return True


def homology(complex_, n):
    """H_n as a HomologyGroup.  Needs the boundary out of degree n+1, so n
    must stay strictly below the top degree of the truncated complex."""
    if n < 0 or n >= complex_.top_degree:
        raise DegreeOutOfRange(
            f"degree {n} not answerable by a complex truncated at {complex_.top_degree}"
        )
    rank_n = complex_.ranks[n]
    rank_out = _rank(complex_.boundary(n)) if n >= 1 else 0
    snf_in = smith_normal_form(complex_.boundary(n + 1))
    betti = rank_n - rank_out - snf_in.rank
    torsion = tuple(d for d in snf_in.diagonal if d > 1)
    return HomologyGroup(betti=betti, torsion=torsion)


def homology_list(A):
    """Homology of a simplicial set in every answerable degree, i.e.
    0 .. cap-1."""
    from .simplicial import normalized_chains

    C = normalized_chains(A)
    return tuple(homology(C, n) for n in range(A.cap))


def is_homology_contractible(A):
    """Connected with vanishing reduced homology in degrees 1..cap-1.

    This is the desk-scale stand-in for weak contractibility; reports
    that rely on it say so.  Raises EmptyComplex on the empty object.
    """
    from .simplicial import components

    if A.is_empty:
        raise EmptyComplex("contractibility asked of the empty simplicial set")
    if len(components(A)) != 1:
        return False
    groups = homology_list(A)
    return all(groups[n].is_trivial() for n in range(1, len(groups)))


CONTRACTIBILITY_NOTE = (
    "contractibility is verified as homology-contractibility up to the "
    "dimension cap (connected, reduced homology zero in degrees 1..cap-1)"
)
