"""Finite simplicial sets truncated at a dimension cap.

Simplices are stored explicitly at every level, degenerate ones included,
so that levelwise products literally are products of simplex sets.  Ids
are arbitrary hashables and live in per-level namespaces; iteration order
is the construction order, which keeps every derived object deterministic.
"""

from __future__ import annotations

from itertools import combinations

from .errors import CapMismatch
from .unionfind import UnionFind


# ---------------------------------------------------------------------------
# monotone surjections [n] ->> [m], stored as value tuples of length n+1


def identity_surjection(n):
    return tuple(range(n + 1))


def surjections(n, m):
    """All monotone surjections [n] ->> [m], lexicographically.

    Chosen by the m positions (out of the n adjacent slots) where the
    value steps up.
    """
    if m > n or m < 0:
        return
    for steps in combinations(range(n), m):
        out = [0]
        for j in range(n):
            out.append(out[-1] + (1 if j in steps else 0))
        yield tuple(out)


def drop_position(sigma, i):
    return sigma[:i] + sigma[i + 1 :]


def duplicate_position(sigma, i):
    return sigma[: i + 1] + sigma[i:]


class SimplicialSet:
    """Explicit-table truncated simplicial set."""

    def __init__(self, cap, cells, faces, degens):
        if cap < 0:
            raise ValueError("cap must be >= 0")
        self.cap = cap
        cells = list(cells) + [[]] * (cap + 1 - len(list(cells)))
        self._cells = tuple(tuple(lv) for lv in cells[: cap + 1])
        self._pos = tuple({x: i for i, x in enumerate(lv)} for lv in self._cells)
        fc = [dict(faces[n]) if n < len(faces) else {} for n in range(cap + 1)]
        dg = [dict(degens[n]) if n < len(degens) else {} for n in range(cap + 1)]
        self._faces = tuple(fc)
        self._degens = tuple(dg)
        degenerate = [set() for _ in range(cap + 1)]
        for n in range(cap):
            for ss in self._degens[n].values():
                degenerate[n + 1].update(ss)
        self._degenerate = tuple(frozenset(s) for s in degenerate)
        self._checked = False

    # -- accessors ----------------------------------------------------------

    def level(self, n):
        if not 0 <= n <= self.cap:
            raise ValueError(f"level {n} outside 0..{self.cap}")
        return self._cells[n]

    def has_simplex(self, n, x):
        return 0 <= n <= self.cap and x in self._pos[n]

    def position(self, n, x):
        return self._pos[n][x]

    def face(self, n, x, i):
        return self._faces[n][x][i]

    def faces_of(self, n, x):
        return self._faces[n][x]

    def degeneracy(self, n, x, i):
        return self._degens[n][x][i]

    def is_degenerate(self, n, x):
        return x in self._degenerate[n]

    def nondegenerate(self, n):
        return tuple(x for x in self._cells[n] if x not in self._degenerate[n])

    @property
    def is_empty(self):
        return not self._cells[0]

    def size(self):
        return sum(len(lv) for lv in self._cells)

    def __eq__(self, other):
        if not isinstance(other, SimplicialSet):
            return NotImplemented
        return (
            self.cap == other.cap
            and self._cells == other._cells
            and self._faces == other._faces
            and self._degens == other._degens
        )

    __hash__ = None

    def __repr__(self):
        counts = ",".join(str(len(lv)) for lv in self._cells)
        return f"SimplicialSet(cap={self.cap}, cells=[{counts}])"

    # -- validation ----------------------------------------------------------

    def validate(self):
        """Check the simplicial identities and the degeneracy flags.

        Raises ValueError on the first violation.  The tables never
        change after construction, so a successful check is remembered
        and repeat calls return immediately.
        """
        if self._checked:
            return True
        for n in range(self.cap + 1):
            for x in self._cells[n]:
                if n >= 1:
                    fs = self._faces[n].get(x)
                    if fs is None or len(fs) != n + 1:
                        raise ValueError(f"level {n} simplex {x!r}: bad face tuple")
                    for y in fs:
                        if y not in self._pos[n - 1]:
                            raise ValueError(f"face of {x!r} not at level {n-1}: {y!r}")
                if n < self.cap:
                    ss = self._degens[n].get(x)
                    if ss is None or len(ss) != n + 1:
                        raise ValueError(f"level {n} simplex {x!r}: bad degeneracy tuple")
                    for y in ss:
                        if y not in self._pos[n + 1]:
                            raise ValueError(f"degeneracy of {x!r} not at level {n+1}: {y!r}")
        # d_i d_j = d_{j-1} d_i  (i < j)
        for n in range(2, self.cap + 1):
            for x in self._cells[n]:
                for j in range(1, n + 1):
                    for i in range(j):
                        left = self.face(n - 1, self.face(n, x, j), i)
                        right = self.face(n - 1, self.face(n, x, i), j - 1)
                        if left != right:
                            raise ValueError(f"face identity fails at {x!r} (i={i}, j={j})")
        # s_i s_j = s_{j+1} s_i  (i <= j)
        for n in range(self.cap - 1):
            for x in self._cells[n]:
                for j in range(n + 1):
                    for i in range(j + 1):
                        left = self.degeneracy(n + 1, self.degeneracy(n, x, j), i)
                        right = self.degeneracy(n + 1, self.degeneracy(n, x, i), j + 1)
                        if left != right:
                            raise ValueError(f"degeneracy identity fails at {x!r} (i={i}, j={j})")
        # d_i s_j relations
        for n in range(self.cap):
            for x in self._cells[n]:
                for j in range(n + 1):
                    sx = self.degeneracy(n, x, j)
                    for i in range(n + 2):
                        got = self.face(n + 1, sx, i)
                        if i == j or i == j + 1:
                            want = x
                        elif i < j:
                            want = self.degeneracy(n - 1, self.face(n, x, i), j - 1)
                        else:
                            want = self.degeneracy(n - 1, self.face(n, x, i - 1), j)
                        if got != want:
                            raise ValueError(f"mixed identity fails at {x!r} (i={i}, j={j})")
        for x in self._cells[0]:
            if x in self._degenerate[0]:
                raise ValueError("level 0 simplex flagged degenerate")
        self._checked = True
        return True

    # -- normal forms ---------------------------------------------------------

    def degeneracy_witness(self, n, x):
        """Some (i, y) with s_i y = x, or None if x is nondegenerate."""
        if not self.is_degenerate(n, x):
            return None
        for y in self._cells[n - 1]:
            ss = self._degens[n - 1][y]
            for i, img in enumerate(ss):
                if img == x:
                    return (i, y)
        raise ValueError(f"degenerate simplex {x!r} has no degeneracy witness")

    def normal_form(self, n, x):
        """(m, z, sigma) with z nondegenerate at level m and x = z . sigma."""
        if not self.is_degenerate(n, x):
            return (n, x, identity_surjection(n))
        i, y = self.degeneracy_witness(n, x)
        m, z, sigma = self.normal_form(n - 1, y)
        return (m, z, duplicate_position(sigma, i))

    def apply_surjection(self, m, x, sigma):
        """x . sigma for a monotone surjection sigma: [n] ->> [m]."""
        if len(sigma) == m + 1:
            return x
        j = next(k for k in range(len(sigma) - 1) if sigma[k] == sigma[k + 1])
        sub = drop_position(sigma, j)
        y = self.apply_surjection(m, x, sub)
        return self.degeneracy(len(sub) - 1, y, j)

    # -- constructors ----------------------------------------------------------

    @classmethod
    def empty(cls, cap):
        return cls(cap, [[] for _ in range(cap + 1)], [{} for _ in range(cap + 1)], [{} for _ in range(cap + 1)])

    @classmethod
    def from_nondegenerate(cls, cap, dims, faces):
        """Free-degeneracy completion of declared nondegenerate cells.

        dims maps each cell to its dimension (<= cap); faces maps each
        cell of dimension n >= 1 to its n+1 faces, each given either as a
        cell (a nondegenerate face) or as a pair (cell, sigma) naming the
        sigma-degeneracy of a lower cell.  The tables for all formal
        degeneracies are filled in from the simplicial identities.
        """
        dims = dict(dims)
        for cell, d in dims.items():
            if not 0 <= d <= cap:
                raise ValueError(f"cell {cell!r} has dimension {d} outside 0..{cap}")

        def as_nf(ref, want_level):
            if isinstance(ref, tuple) and len(ref) == 2 and ref[0] in dims and isinstance(ref[1], tuple):
                cell, sigma = ref
            else:
                cell, sigma = ref, identity_surjection(dims.get(ref, -1))
            if cell not in dims:
                raise ValueError(f"face reference {ref!r} is not a declared cell")
            m = dims[cell]
            if len(sigma) != want_level + 1 or sorted(set(sigma)) != list(range(m + 1)):
                raise ValueError(f"face reference {ref!r} is not a level-{want_level} simplex")
            return (cell, sigma)

        face_nf = {}
        for cell, d in dims.items():
            if d == 0:
                continue
            refs = faces.get(cell)
            if refs is None or len(refs) != d + 1:
                raise ValueError(f"cell {cell!r} needs exactly {d + 1} faces")
            face_nf[cell] = tuple(as_nf(r, d - 1) for r in refs)

        def normalize(cell, tau):
            """Normal form of cell . tau for arbitrary monotone tau."""
            m = dims[cell]
            image = sorted(set(tau))
            if len(image) == m + 1:
                return (cell, tau)
            z_cell, z_sigma = cell, identity_surjection(m)
            for i in [k for k in range(m + 1) if k not in set(image)][::-1]:
                z_cell, z_sigma = face_at(z_cell, z_sigma, i)
            rank = {v: r for r, v in enumerate(image)}
            comp = tuple(z_sigma[rank[v]] for v in tau)
            return (z_cell, comp)

        def face_at(cell, sigma, i):
            if len(sigma) == dims[cell] + 1:
                return face_nf[cell][i]
            return normalize(cell, drop_position(sigma, i))

        def nf_id(cell, sigma):
            if len(sigma) == dims[cell] + 1:
                return cell
            return ("s", cell, sigma)

        cells = [[] for _ in range(cap + 1)]
        nfs = [[] for _ in range(cap + 1)]
        order = list(dims)
        for n in range(cap + 1):
            for cell in order:
                m = dims[cell]
                if m > n:
                    continue
                for sigma in surjections(n, m):
                    cells[n].append(nf_id(cell, sigma))
                    nfs[n].append((cell, sigma))
        face_tables = [{} for _ in range(cap + 1)]
        degen_tables = [{} for _ in range(cap + 1)]
        for n in range(cap + 1):
            for xid, (cell, sigma) in zip(cells[n], nfs[n]):
                if n >= 1:
                    out = []
                    for i in range(n + 1):
                        c2, s2 = face_at(cell, sigma, i)
                        out.append(nf_id(c2, s2))
                    face_tables[n][xid] = tuple(out)
                if n < cap:
                    degen_tables[n][xid] = tuple(
                        nf_id(cell, duplicate_position(sigma, i)) for i in range(n + 1)
                    )
        out = cls(cap, cells, face_tables, degen_tables)
        out.validate()
        return out

    @classmethod
    def point(cls, cap, name="*"):
        return cls.from_nondegenerate(cap, {name: 0}, {})

    @classmethod
    def standard(cls, k, cap):
        """The k-simplex: level-n simplices are the weakly increasing
        (n+1)-tuples over 0..k, faces delete, degeneracies duplicate."""
        cells = []
        for n in range(cap + 1):
            lv = []

            def grow(prefix):
                if len(prefix) == n + 1:
                    lv.append(tuple(prefix))
                    return
                start = prefix[-1] if prefix else 0
                for v in range(start, k + 1):
                    grow(prefix + [v])

            grow([])
            cells.append(lv)
        faces = [{} for _ in range(cap + 1)]
        degens = [{} for _ in range(cap + 1)]
        for n in range(1, cap + 1):
            for x in cells[n]:
                faces[n][x] = tuple(x[:i] + x[i + 1 :] for i in range(n + 1))
        for n in range(cap):
            for x in cells[n]:
                degens[n][x] = tuple(x[: i + 1] + x[i:] for i in range(n + 1))
        return cls(cap, cells, faces, degens)

    @classmethod
    def circle(cls, cap):
        return cls.from_nondegenerate(cap, {"v": 0, "e": 1}, {"e": ("v", "v")})

    # -- derived objects -------------------------------------------------------

    def subcomplex(self, keep):
        """The simplicial subset on the given (level, id) pairs; they must
        be closed under faces and degeneracies."""
        keep_sets = [set() for _ in range(self.cap + 1)]
        for n, x in keep:
            keep_sets[n].add(x)
        for n in range(self.cap + 1):
            for x in keep_sets[n]:
                if x not in self._pos[n]:
                    raise ValueError(f"{x!r} is not a level-{n} simplex")
                if n >= 1:
                    for y in self.faces_of(n, x):
                        if y not in keep_sets[n - 1]:
                            raise ValueError("subset not closed under faces")
                if n < self.cap:
                    for y in self._degens[n][x]:
                        if y not in keep_sets[n + 1]:
                            raise ValueError("subset not closed under degeneracies")
        cells = [[x for x in self._cells[n] if x in keep_sets[n]] for n in range(self.cap + 1)]
        faces = [
            {x: self._faces[n][x] for x in cells[n]} if n >= 1 else {}
            for n in range(self.cap + 1)
        ]
        degens = [
            {x: self._degens[n][x] for x in cells[n]} if n < self.cap else {}
            for n in range(self.cap + 1)
        ]
        return SimplicialSet(self.cap, cells, faces, degens)

    def relabel(self, fn):
        """A copy with every id x replaced by fn(n, x); fn must be injective
        per level."""
        cells = [[fn(n, x) for x in self._cells[n]] for n in range(self.cap + 1)]
        faces = [
            {fn(n, x): tuple(fn(n - 1, y) for y in fs) for x, fs in self._faces[n].items()}
            for n in range(self.cap + 1)
        ]
        degens = [
            {fn(n, x): tuple(fn(n + 1, y) for y in ss) for x, ss in self._degens[n].items()}
            for n in range(self.cap + 1)
        ]
        return SimplicialSet(self.cap, cells, faces, degens)


# ---------------------------------------------------------------------------
# maps


class SimplicialMap:
    """A levelwise map of simplicial sets, stored as one dict per level."""

    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        self._maps = tuple(dict(maps[n]) if n < len(maps) else {} for n in range(source.cap + 1))

    @classmethod
    def identity(cls, A):
        return cls(A, A, [{x: x for x in A.level(n)} for n in range(A.cap + 1)])

    def apply(self, n, x):
        return self._maps[n][x]

    def level_map(self, n):
        return dict(self._maps[n])

    def validate(self):
        A, B = self.source, self.target
        if A.cap != B.cap:
            raise CapMismatch("map between different caps")
        for n in range(A.cap + 1):
            for x in A.level(n):
                if x not in self._maps[n]:
                    raise ValueError(f"map undefined on level-{n} simplex {x!r}")
                y = self._maps[n][x]
                if not B.has_simplex(n, y):
                    raise ValueError(f"image {y!r} is not a level-{n} simplex of the target")
        for n in range(1, A.cap + 1):
            for x in A.level(n):
                for i in range(n + 1):
                    if self.apply(n - 1, A.face(n, x, i)) != B.face(n, self.apply(n, x), i):
                        raise ValueError(f"map does not commute with d_{i} at {x!r}")
        for n in range(A.cap):
            for x in A.level(n):
                for i in range(n + 1):
                    if self.apply(n + 1, A.degeneracy(n, x, i)) != B.degeneracy(n, self.apply(n, x), i):
                        raise ValueError(f"map does not commute with s_{i} at {x!r}")
        return True

    def compose(self, other):
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        maps = [
            {x: self.apply(n, other.apply(n, x)) for x in other.source.level(n)}
            for n in range(other.source.cap + 1)
        ]
        return SimplicialMap(other.source, self.target, maps)

    def is_isomorphism(self):
        for n in range(self.source.cap + 1):
            src = self.source.level(n)
            if len(set(self._maps[n][x] for x in src)) != len(src):
                return False
            if len(src) != len(self.target.level(n)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, SimplicialMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self._maps == other._maps
        )

    __hash__ = None


def extend_on_nondegenerate(A, B, assignment):
    """Total map A -> B from images of the nondegenerate simplices.

    assignment: dict (n, x) -> level-n simplex of B.  Degenerate simplices
    follow their normal forms.  Returns the SimplicialMap (unvalidated).
    """
    maps = [{} for _ in range(A.cap + 1)]
    for n in range(A.cap + 1):
        for x in A.level(n):
            m, z, sigma = A.normal_form(n, x)
            img = assignment[(m, z)]
            maps[n][x] = B.apply_surjection(m, img, sigma)
    return SimplicialMap(A, B, maps)


def _assignment_consistent(A, B, assignment, n, x, img):
    """Faces of x must map to faces of img under the partial assignment.

    All faces live at lower levels, where the assignment is already total
    on nondegenerate simplices.
    """
    def image_of(k, y):
        m, z, sigma = A.normal_form(k, y)
        key = (m, z)
        if key not in assignment:
            return None
        return B.apply_surjection(m, assignment[key], sigma)

    for i in range(n + 1):
        want = B.face(n, img, i) if n >= 1 else None
        if n == 0:
            break
        got = image_of(n - 1, A.face(n, x, i))
        if got is not None and got != want:
            return False
    return True


def enumerate_simplicial_maps(A, B):
    """Yield every simplicial map A -> B.  Exponential; for tiny inputs."""
    slots = [(n, x) for n in range(A.cap + 1) for x in A.nondegenerate(n)]

    def backtrack(k, assignment):
        if k == len(slots):
            yield extend_on_nondegenerate(A, B, assignment)
            return
        n, x = slots[k]
        for img in B.level(n):
            if _assignment_consistent(A, B, assignment, n, x, img):
                assignment[(n, x)] = img
                yield from backtrack(k + 1, assignment)
                del assignment[(n, x)]

    yield from backtrack(0, {})


def _joint_structural_colors(A, B):
    """Color every simplex of A and B by iterated refinement over faces,
    degeneracies, and coface positions, with one shared palette so the
    colors are comparable across the two sets."""
    ids = [("A", n, x) for n in range(A.cap + 1) for x in A.level(n)]
    ids += [("B", n, x) for n in range(B.cap + 1) for x in B.level(n)]
    index = {k: i for i, k in enumerate(ids)}
    spaces = {"A": A, "B": B}
    color = []
    face_edges = []
    degen_edges = []
    for (tag, n, x) in ids:
        S = spaces[tag]
        color.append((n, S.is_degenerate(n, x)))
        face_edges.append(
            tuple(index[(tag, n - 1, S.face(n, x, i))] for i in range(n + 1)) if n >= 1 else ()
        )
        degen_edges.append(
            tuple(index[(tag, n + 1, S.degeneracy(n, x, i))] for i in range(n + 1))
            if n < S.cap
            else ()
        )
    cofaces = [[] for _ in ids]
    for j, fs in enumerate(face_edges):
        for i, tgt in enumerate(fs):
            cofaces[tgt].append((i, j))
    prev_count = -1
    while True:
        sig = [
            (
                color[j],
                tuple(color[t] for t in face_edges[j]),
                tuple(color[t] for t in degen_edges[j]),
                tuple(sorted((i, color[p]) for (i, p) in cofaces[j])),
            )
            for j in range(len(ids))
        ]
        palette = {}
        color = [palette.setdefault(s, len(palette)) for s in sig]
        if len(palette) == prev_count:
            break
        prev_count = len(palette)
    out_a = {}
    out_b = {}
    for (tag, n, x), c in zip(ids, color):
        (out_a if tag == "A" else out_b)[(n, x)] = c
    return out_a, out_b


def enumerate_simplicial_isomorphisms(A, B):
    """Yield every isomorphism A -> B.

    Iterative backtracking over the nondegenerate simplices, pruned by
    shared structural colors; safe on spaces with thousands of simplices
    when the face structure is rigid."""
    if A.cap != B.cap:
        return
    for n in range(A.cap + 1):
        if len(A.level(n)) != len(B.level(n)):
            return
        if len(A.nondegenerate(n)) != len(B.nondegenerate(n)):
            return
    colors_a, colors_b = _joint_structural_colors(A, B)
    from collections import Counter

    if Counter(colors_a.values()) != Counter(colors_b.values()):
        return
    by_color_b = {}
    for n in range(B.cap + 1):
        for y in B.nondegenerate(n):
            by_color_b.setdefault(colors_b[(n, y)], []).append(y)
    slots = []
    cand_lists = []
    for n in range(A.cap + 1):
        level_slots = []
        for x in A.nondegenerate(n):
            cands = by_color_b.get(colors_a[(n, x)], ())
            if not cands:
                return
            level_slots.append(((n, x), tuple(cands)))
        # most-constrained first, within the level
        level_slots.sort(key=lambda item: len(item[1]))
        for slot, cands in level_slots:
            slots.append(slot)
            cand_lists.append(cands)

    assignment = {}
    used = set()
    its = [iter(cand_lists[0])] if slots else []
    k = 0
    if not slots:
        f = extend_on_nondegenerate(A, B, {})
        try:
            f.validate()
        except ValueError:
            return
        if f.is_isomorphism():
            yield f
        return
    while k >= 0:
        if k == len(slots):
            f = extend_on_nondegenerate(A, B, assignment)
            try:
                f.validate()
                good = True
            except ValueError:
                good = False
            if good and f.is_isomorphism():
                yield f
            k -= 1
            n, x = slots[k]
            img = assignment.pop((n, x))
            used.discard((n, img))
            continue
        n, x = slots[k]
        advanced = False
        for img in its[k]:
            if (n, img) in used:
                continue
            if _assignment_consistent(A, B, assignment, n, x, img):
                assignment[(n, x)] = img
                used.add((n, img))
                k += 1
                if k < len(slots):
                    if k == len(its):
                        its.append(iter(cand_lists[k]))
                    else:
                        its[k] = iter(cand_lists[k])
                advanced = True
                break
        if not advanced:
            k -= 1
            if k >= 0:
                n, x = slots[k]
                img = assignment.pop((n, x))
                used.discard((n, img))


def simplicial_isomorphism(A, B):
    """An isomorphism A -> B found by backtracking, or None."""
    for f in enumerate_simplicial_isomorphisms(A, B):
        return f
    return None


# ---------------------------------------------------------------------------
# constructions


def product(A, B):
    """Levelwise product; simplices are pairs, structure maps act
    componentwise."""
    if A.cap != B.cap:
        raise CapMismatch(f"caps differ: {A.cap} vs {B.cap}")
    cap = A.cap
    cells = [[(a, b) for a in A.level(n) for b in B.level(n)] for n in range(cap + 1)]
    faces = [{} for _ in range(cap + 1)]
    degens = [{} for _ in range(cap + 1)]
    for n in range(1, cap + 1):
        for a, b in cells[n]:
            faces[n][(a, b)] = tuple(
                (A.face(n, a, i), B.face(n, b, i)) for i in range(n + 1)
            )
    for n in range(cap):
        for a, b in cells[n]:
            degens[n][(a, b)] = tuple(
                (A.degeneracy(n, a, i), B.degeneracy(n, b, i)) for i in range(n + 1)
            )
    return SimplicialSet(cap, cells, faces, degens)


def disjoint_union(pieces, tags=None):
    """Tagged disjoint union; simplex ids become (tag, x)."""
    pieces = list(pieces)
    if tags is None:
        tags = list(range(len(pieces)))
    if len(set(tags)) != len(tags):
        raise ValueError("tags must be distinct")
    caps = {p.cap for p in pieces}
    if len(caps) > 1:
        raise CapMismatch("disjoint union of different caps")
    cap = caps.pop() if caps else 0
    cells = [[] for _ in range(cap + 1)]
    faces = [{} for _ in range(cap + 1)]
    degens = [{} for _ in range(cap + 1)]
    for tag, p in zip(tags, pieces):
        for n in range(cap + 1):
            for x in p.level(n):
                cells[n].append((tag, x))
                if n >= 1:
                    faces[n][(tag, x)] = tuple((tag, y) for y in p.faces_of(n, x))
                if n < cap:
                    degens[n][(tag, x)] = tuple((tag, p.degeneracy(n, x, i)) for i in range(n + 1))
    return SimplicialSet(cap, cells, faces, degens)


def quotient(A, seeds):
    """Quotient by the smallest simplicial congruence containing the seeds.

    seeds: iterable of (level, x, y).  Returns (Q, projection) where class
    ids are the earliest member of each class in A's ordering.
    """
    uf = UnionFind()
    for n in range(A.cap + 1):
        for x in A.level(n):
            uf.add((n, x))
    for n, x, y in seeds:
        uf.union((n, x), (n, y))
    changed = True
    while changed:
        changed = False
        for n in range(1, A.cap + 1):
            buckets = {}
            for x in A.level(n):
                buckets.setdefault(uf.find((n, x)), []).append(x)
            for members in buckets.values():
                first = members[0]
                for x in members[1:]:
                    for i in range(n + 1):
                        if uf.union((n - 1, A.face(n, first, i)), (n - 1, A.face(n, x, i))):
                            changed = True
        for n in range(A.cap):
            buckets = {}
            for x in A.level(n):
                buckets.setdefault(uf.find((n, x)), []).append(x)
            for members in buckets.values():
                first = members[0]
                for x in members[1:]:
                    for i in range(n + 1):
                        if uf.union((n + 1, A.degeneracy(n, x, i)), (n + 1, A.degeneracy(n, first, i))):
                            changed = True
    rep = {}
    for n in range(A.cap + 1):
        classes = {}
        for x in A.level(n):
            classes.setdefault(uf.find((n, x)), []).append(x)
        for members in classes.values():
            canon = min(members, key=lambda z: A.position(n, z))
            for x in members:
                rep[(n, x)] = canon
    cells = [[] for _ in range(A.cap + 1)]
    seen = [set() for _ in range(A.cap + 1)]
    for n in range(A.cap + 1):
        for x in A.level(n):
            r = rep[(n, x)]
            if r not in seen[n]:
                seen[n].add(r)
                cells[n].append(r)
    faces = [{} for _ in range(A.cap + 1)]
    degens = [{} for _ in range(A.cap + 1)]
    for n in range(1, A.cap + 1):
        for r in cells[n]:
            faces[n][r] = tuple(rep[(n - 1, y)] for y in A.faces_of(n, r))
    for n in range(A.cap):
        for r in cells[n]:
            degens[n][r] = tuple(rep[(n + 1, A.degeneracy(n, r, i))] for i in range(n + 1))
    Q = SimplicialSet(A.cap, cells, faces, degens)
    proj = SimplicialMap(A, Q, [{x: rep[(n, x)] for x in A.level(n)} for n in range(A.cap + 1)])
    return Q, proj


def components(A):
    """Partition of the vertices by the edge relation (all level-1
    simplices, degenerate ones included)."""
    if A.cap < 1:
        groups = [((v,),) for v in A.level(0)]
        return tuple(g[0] for g in groups)
    uf = UnionFind()
    for v in A.level(0):
        uf.add(v)
    for e in A.level(1):
        uf.union(A.face(1, e, 0), A.face(1, e, 1))
    classes = {}
    for v in A.level(0):
        classes.setdefault(uf.find(v), []).append(v)
    out = sorted(classes.values(), key=lambda ms: A.position(0, ms[0]))
    return tuple(tuple(ms) for ms in out)


def normalized_chains(A):
    """Normalized chain complex: free on nondegenerate simplices, boundary
    alternates faces and kills degenerate ones."""
    from .homology import ChainComplex

    bases = [A.nondegenerate(n) for n in range(A.cap + 1)]
    index = [{x: i for i, x in enumerate(b)} for b in bases]
    boundaries = []
    for n in range(1, A.cap + 1):
        rows = len(bases[n - 1])
        cols = len(bases[n])
        M = [[0] * cols for _ in range(rows)]
        for j, x in enumerate(bases[n]):
            for i in range(n + 1):
                y = A.face(n, x, i)
                if A.is_degenerate(n - 1, y):
                    continue
                M[index[n - 1][y]][j] += (-1) ** i
        boundaries.append(tuple(tuple(r) for r in M))
    return ChainComplex(
        ranks=tuple(len(b) for b in bases),
        boundaries=tuple(boundaries),
    )
