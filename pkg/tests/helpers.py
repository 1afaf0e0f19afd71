"""Shared generators and independent oracles for the test suite.

The oracles here are deliberately naive re-implementations (fraction
Gaussian elimination, brute-force chain search, seed-chasing congruence
closure) so the library's answers are checked against code that shares
none of its machinery.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from flowcalc import FinPoset, FlowPresentation, SimplicialSet

# ---------------------------------------------------------------------------
# poset generators


def random_poset(rng: random.Random, n: int) -> FinPoset:
    """A random poset on s0..s{n-1}: random edges i -> j (i < j), closed."""
    elems = [f"s{i}" for i in range(n)]
    rels = [
        (elems[i], elems[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < 0.4
    ]
    return FinPoset(elems, rels)


def random_bounded_poset(rng: random.Random, max_elems: int) -> FinPoset:
    """Bounded poset with at most max_elems elements: random interior
    plus fresh bottom/top."""
    interior = rng.randint(0, max_elems - 2)
    inner = random_poset(rng, interior)
    elems = ["bot", *inner.elements, "top"]
    rels = [(a, b) for a in inner.elements for b in inner.elements if inner.lt(a, b)]
    rels += [("bot", x) for x in inner.elements]
    rels += [(x, "top") for x in inner.elements]
    rels.append(("bot", "top"))
    return FinPoset(elems, rels)


def _all_labeled_posets(n):
    """Every partial order on range(n), as a frozenset of strict pairs."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    # grow transitively closed relation sets pair by pair instead of
    # filtering all 2^(n^2-n) subsets; dedupe on the closed set
    seen = set()

    def closure(rel):
        rel = set(rel)
        changed = True
        while changed:
            changed = False
            for (a, b) in list(rel):
                for (c, d) in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        return frozenset(rel)

    def antisymmetric(rel):
        return all((b, a) not in rel for (a, b) in rel)

    stack = [frozenset()]
    seen.add(frozenset())
    while stack:
        rel = stack.pop()
        out.append(rel)
        for p in pairs:
            if p in rel:
                continue
            grown = closure(rel | {p})
            if grown in seen or not antisymmetric(grown):
                continue
            seen.add(grown)
            stack.append(grown)
    return out


def _canonical(n, rel):
    best = None
    for perm in itertools.permutations(range(n)):
        img = tuple(sorted((perm[a], perm[b]) for (a, b) in rel))
        if best is None or img < best:
            best = img
    return best


def posets_up_to_iso(max_n):
    """All posets with at most max_n elements, one per isomorphism class.

    Counts by size are the classical 1, 1, 2, 5, 16, ... of unlabeled
    finite posets.
    """
    out = []
    for n in range(max_n + 1):
        reps = {}
        for rel in _all_labeled_posets(n):
            key = _canonical(n, rel)
            if key not in reps:
                reps[key] = rel
        for rel in reps.values():
            elems = [f"x{i}" for i in range(n)]
            out.append(FinPoset(elems, [(elems[a], elems[b]) for (a, b) in rel]))
    return out


def with_bounds(P: FinPoset) -> FinPoset:
    elems = ["bot", *P.elements, "top"]
    rels = [(a, b) for a in P.elements for b in P.elements if P.lt(a, b)]
    rels += [("bot", x) for x in P.elements]
    rels += [(x, "top") for x in P.elements]
    rels.append(("bot", "top"))
    return FinPoset(elems, rels)


# ---------------------------------------------------------------------------
# exhaustive small simplicial sets


def _level_simplices(partial, level):
    """All level-`level` simplices of the partial complex described by
    (dims, faces): nondegenerate cells of that dimension plus every
    degeneracy of lower cells, in from_nondegenerate's naming."""
    from flowcalc.simplicial import surjections

    dims, _ = partial
    out = []
    for cell, m in dims.items():
        if m > level:
            continue
        for sigma in surjections(level, m):
            if len(sigma) == m + 1:
                out.append(cell)
            else:
                out.append((cell, sigma))
    return out


def small_simplicial_sets(max_nondeg=3, cap=3):
    """Every simplicial set with at most max_nondeg nondegenerate
    simplices, one per isomorphism class (the empty set included)."""
    from flowcalc.simplicial import simplicial_isomorphism

    found = [SimplicialSet.empty(cap)]

    def register(candidate):
        for prior in found:
            if (
                [len(prior.level(n)) for n in range(cap + 1)]
                == [len(candidate.level(n)) for n in range(cap + 1)]
                and simplicial_isomorphism(prior, candidate) is not None
            ):
                return
        found.append(candidate)

    def face_options(dims, faces, dim):
        return _level_simplices((dims, faces), dim - 1)

    def build(counts):
        """counts: cells per dimension, e.g. (2, 1, 0, 0)."""
        names = []
        for d, k in enumerate(counts):
            names.extend((f"c{d}_{i}", d) for i in range(k))
        # assign faces dimension by dimension, depth-first
        def assign(idx, dims, faces):
            if idx == len(names):
                try:
                    yield SimplicialSet.from_nondegenerate(cap, dict(dims), dict(faces))
                except ValueError:
                    return
                return
            cell, d = names[idx]
            dims[cell] = d
            if d == 0:
                yield from assign(idx + 1, dims, faces)
            else:
                opts = face_options(dims, faces, d)
                for combo in itertools.product(opts, repeat=d + 1):
                    faces[cell] = combo
                    yield from assign(idx + 1, dims, faces)
                faces.pop(cell, None)
            del dims[cell]

        yield from assign(0, {}, {})

    for total in range(1, max_nondeg + 1):
        for counts in itertools.product(range(total + 1), repeat=cap + 1):
            if sum(counts) != total:
                continue
            # a positive-dimensional cell needs something to hang faces on
            if counts[0] == 0:
                continue
            for candidate in build(counts):
                register(candidate)
    return found


# ---------------------------------------------------------------------------
# random flow presentations


def random_flow_presentation(
    rng: random.Random,
    max_states=6,
    cap=3,
    edge_chance=0.35,
    homotopy_chance=0.4,
    relation_chance=0.5,
):
    """A loopless presentation over a random DAG: one or two path
    generators per edge, sometimes a 1-cell homotopy between them,
    sometimes a composite-collapsing relation on a triangle."""
    n = rng.randint(2, max_states)
    states = [f"q{i}" for i in range(n)]
    gens = {}
    vertex_ids = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() >= edge_chance:
                continue
            pair = (states[i], states[j])
            two = rng.random() < 0.5
            dims = {f"u{i}_{j}": 0}
            faces = {}
            ids = [f"u{i}_{j}"]
            if two:
                dims[f"v{i}_{j}"] = 0
                ids.append(f"v{i}_{j}")
                if rng.random() < homotopy_chance:
                    dims[f"h{i}_{j}"] = 1
                    faces[f"h{i}_{j}"] = (f"u{i}_{j}", f"v{i}_{j}")
            gens[pair] = SimplicialSet.from_nondegenerate(cap, dims, faces)
            vertex_ids[pair] = ids
    relations = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                ab = (states[i], states[j])
                bc = (states[j], states[k])
                ac = (states[i], states[k])
                if ab in gens and bc in gens and ac in gens and rng.random() < relation_chance:
                    w_long = ((ab, vertex_ids[ab][0]), (bc, vertex_ids[bc][0]))
                    w_short = ((ac, vertex_ids[ac][0]),)
                    relations.append((0, w_long, w_short))
    return FlowPresentation(cap, states, gens, relations)


# ---------------------------------------------------------------------------
# integer matrix oracles


def mat_mul(A, B):
    if not A or not B:
        return []
    rows, mid, cols = len(A), len(B), len(B[0])
    assert all(len(r) == mid for r in A)
    return [
        [sum(A[i][k] * B[k][j] for k in range(mid)) for j in range(cols)]
        for i in range(rows)
    ]


def det_exact(M):
    """Integer determinant by fraction-free Gaussian elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        det *= A[col][col]
        inv = 1 / A[col][col]
        for r in range(col + 1, n):
            factor = A[r][col] * inv
            if factor:
                A[r] = [a - factor * b for a, b in zip(A[r], A[col])]
    assert det.denominator == 1
    return int(det)


def rank_exact(M):
    if not M or not M[0]:
        return 0
    A = [[Fraction(x) for x in row] for row in M]
    rows, cols = len(A), len(A[0])
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if A[r][col] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        inv = 1 / A[rank][col]
        for r in range(rows):
            if r != rank and A[r][col] != 0:
                factor = A[r][col] * inv
                A[r] = [a - factor * b for a, b in zip(A[r], A[rank])]
        rank += 1
    return rank


def elementary_divisors_naive(M):
    """Slow, obviously-correct Smith reduction: gcd chasing with row and
    column operations until diagonal with a divisibility chain."""
    A = [list(map(int, row)) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    divisors = []
    top = 0
    while top < min(rows, cols):
        # find the nonzero entry of least magnitude in the working block
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[top], A[i] = A[i], A[top]
        for row in A:
            row[top], row[j] = row[j], row[top]
        p = A[top][top]
        dirty = False
        for i in range(top + 1, rows):
            q = A[i][top] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[top])]
            if A[i][top]:
                dirty = True
        for j in range(top + 1, cols):
            q = A[top][j] // p
            if q:
                for row in A:
                    row[j] -= q * row[top]
            if A[top][j]:
                dirty = True
        if dirty:
            continue
        # p must divide the rest of the block, else absorb a bad row
        bad = next(
            (
                (i, j)
                for i in range(top + 1, rows)
                for j in range(top + 1, cols)
                if A[i][j] % p
            ),
            None,
        )
        if bad is not None:
            A[top] = [a + b for a, b in zip(A[top], A[bad[0]])]
            continue
        divisors.append(abs(p))
        top += 1
    return divisors


def homology_oracle(boundary_out, boundary_in, rank_n):
    """(betti, torsion) of H = ker(boundary_out) / im(boundary_in),
    where boundary_out has rank_n columns and boundary_in rank_n rows."""
    r_out = rank_exact(boundary_out)
    r_in = rank_exact(boundary_in)
    betti = rank_n - r_out - r_in
    torsion = [d for d in elementary_divisors_naive(boundary_in) if d > 1]
    return betti, sorted(torsion)


# ---------------------------------------------------------------------------
# congruence-closure oracle for quotients


def congruence_closure_oracle(space, seeds):
    """Partition of every level of `space` by the congruence generated by
    the seeds: symmetric-transitive closure, pushed along faces and
    degeneracies until stable.  Independent of the library union-find."""
    classes = {
        n: {x: frozenset([x]) for x in space.level(n)} for n in range(space.cap + 1)
    }

    def merge(n, x, y):
        cx, cy = classes[n][x], classes[n][y]
        if cx == cy:
            return False
        both = cx | cy
        for z in both:
            classes[n][z] = both
        return True

    changed = True
    while changed:
        changed = False
        for (n, x, y) in seeds:
            if merge(n, x, y):
                changed = True
        for n in range(space.cap + 1):
            for cls in set(classes[n].values()):
                members = sorted(cls, key=repr)
                x0 = members[0]
                for y in members[1:]:
                    if n >= 1:
                        for i in range(n + 1):
                            if merge(n - 1, space.face(n, x0, i), space.face(n, y, i)):
                                changed = True
                    if n < space.cap:
                        for i in range(n + 1):
                            if merge(
                                n + 1,
                                space.degeneracy(n, x0, i),
                                space.degeneracy(n, y, i),
                            ):
                                changed = True
    return {
        n: frozenset(classes[n].values())
        for n in range(space.cap + 1)
    }


def partition_of(projection, original):
    """The level partitions induced by a quotient projection map."""
    out = {}
    for n in range(original.cap + 1):
        buckets = {}
        for x in original.level(n):
            buckets.setdefault(projection.apply(n, x), set()).add(x)
        out[n] = frozenset(frozenset(v) for v in buckets.values())
    return out


# ---------------------------------------------------------------------------
# misc


def random_matrix(rng, rows, cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]
