"""Finite posets, longest-chain lengths, order complexes, and the category
of bottom-to-top chains with interior deletions.

Elements keep their construction order; every enumeration below is
deterministic in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotBounded, NotComparable, PartialOrderViolation


class FinPoset:
    """A finite poset built from covering (or any generating) relations.

    The reflexive-transitive closure is taken on construction; a cycle in
    the generating relation raises PartialOrderViolation.
    """

    def __init__(self, elements, relations=()):
        self._elements = tuple(dict.fromkeys(elements))
        self._pos = {x: i for i, x in enumerate(self._elements)}
        succ = {x: set() for x in self._elements}
        for a, b in relations:
            if a not in self._pos or b not in self._pos:
                missing = a if a not in self._pos else b
                raise PartialOrderViolation(f"relation mentions unknown element {missing!r}")
            if a == b:
                continue
            succ[a].add(b)
        # transitive closure by repeated expansion; cheap at these sizes
        up = {x: {x} | succ[x] for x in self._elements}
        changed = True
        while changed:
            changed = False
            for x in self._elements:
                grown = set(up[x])
                for y in tuple(grown):
                    grown |= up[y]
                if grown != up[x]:
                    up[x] = grown
                    changed = True
        for x in self._elements:
            for y in up[x]:
                if y != x and x in up[y]:
                    raise PartialOrderViolation(f"cycle through {x!r} and {y!r}")
        self._up = {x: frozenset(s) for x, s in up.items()}

    @property
    def elements(self):
        return self._elements

    def __len__(self):
        return len(self._elements)

    def __contains__(self, x):
        return x in self._pos

    def index(self, x):
        return self._pos[x]

    def leq(self, a, b):
        return b in self._up[a]

    def lt(self, a, b):
        return a != b and b in self._up[a]

    def up_set(self, a):
        """All x with a <= x, in element order."""
        return tuple(x for x in self._elements if x in self._up[a])

    @property
    def covers(self):
        """The covering pairs (a, b): a < b with nothing strictly between."""
        out = []
        for a in self._elements:
            for b in self._elements:
                if self.lt(a, b) and not any(
                    self.lt(a, c) and self.lt(c, b) for c in self._elements
                ):
                    out.append((a, b))
        return tuple(out)

    def bottom(self):
        """The unique global minimum, or None."""
        bots = [x for x in self._elements if all(self.leq(x, y) for y in self._elements)]
        return bots[0] if bots else None

    def top(self):
        tops = [x for x in self._elements if all(self.leq(y, x) for y in self._elements)]
        return tops[0] if tops else None

    def is_bounded(self):
        b, t = self.bottom(), self.top()
        return b is not None and t is not None and b != t

    def interval(self, a, b):
        """Elements x with a <= x <= b, in element order."""
        return tuple(x for x in self._elements if self.leq(a, x) and self.leq(x, b))

    def strict_upper_interval(self, a, b):
        """Elements x with a < x <= b."""
        return tuple(x for x in self._elements if self.lt(a, x) and self.leq(x, b))

    def subposet(self, keep):
        keep = [x for x in self._elements if x in set(keep)]
        rels = [(a, b) for a in keep for b in keep if self.lt(a, b)]
        return FinPoset(keep, rels)

    def chain_length(self, a, b):
        """Length of the longest chain a = x_0 < ... < x_k = b.

        Zero when a == b; NotComparable unless a <= b.
        """
        if a not in self._pos or b not in self._pos:
            raise NotComparable(f"unknown element in pair ({a!r}, {b!r})")
        if not self.leq(a, b):
            raise NotComparable(f"{a!r} is not below {b!r}")
        if a == b:
            return 0
        memo = {}

        def longest(x):
            if x == b:
                return 0
            if x in memo:
                return memo[x]
            best = None
            for y in self._elements:
                if self.lt(x, y) and self.leq(y, b):
                    sub = longest(y)
                    if sub is not None and (best is None or sub + 1 > best):
                        best = sub + 1
            memo[x] = best
            return best

        return longest(a)

    def chains_between(self, a, b, max_links=None):
        """All strict chains a = x_0 < ... < x_k = b, shortest first then
        lexicographic in element order. max_links bounds k."""
        out = []

        def extend(chain):
            last = chain[-1]
            if last == b:
                out.append(tuple(chain))
                return
            if max_links is not None and len(chain) - 1 >= max_links:
                return
            for y in self._elements:
                if self.lt(last, y) and self.leq(y, b):
                    extend(chain + [y])

        if self.leq(a, b):
            if a == b:
                return ((a,),)
            extend([a])
        out.sort(key=lambda c: (len(c), tuple(self._pos[x] for x in c)))
        return tuple(out)

    def all_chains(self, max_len):
        """All nonempty strict chains with at most max_len elements."""
        out = []

        def extend(chain):
            out.append(tuple(chain))
            if len(chain) >= max_len:
                return
            for y in self._elements:
                if self.lt(chain[-1], y):
                    extend(chain + [y])

        for x in self._elements:
            extend([x])
        return tuple(out)

    def __repr__(self):
        return f"FinPoset({list(self._elements)!r}, covers={list(self.covers)!r})"


@dataclass(frozen=True)
class PosetReport:
    """Outcome of validate_poset."""

    bounded: bool
    bottom: object
    top: object
    locally_finite: bool
    size: int

    def to_dict(self):
        return {
            "bounded": self.bounded,
            "bottom": None if self.bottom is None else str(self.bottom),
            "top": None if self.top is None else str(self.top),
            "locally_finite": self.locally_finite,
            "size": self.size,
        }


def validate_poset(poset):
    """Boundedness and finiteness report. Order axioms are enforced at
    construction time, so a FinPoset that exists is already a poset."""
    b, t = poset.bottom(), poset.top()
    return PosetReport(
        bounded=b is not None and t is not None and b != t,
        bottom=b,
        top=t,
        locally_finite=True,
        size=len(poset),
    )


def order_complex(poset, cap):
    """The chain complex of the poset as a truncated simplicial set:
    nondegenerate n-simplices are the strict (n+1)-chains, faces delete a
    vertex, degeneracies are formal."""
    from .simplicial import SimplicialSet

    dims = {}
    faces = {}
    for chain in poset.all_chains(cap + 1):
        dims[chain] = len(chain) - 1
        if len(chain) > 1:
            faces[chain] = tuple(chain[:i] + chain[i + 1 :] for i in range(len(chain)))
    return SimplicialSet.from_nondegenerate(cap, dims, faces)


@dataclass(frozen=True)
class ChainCategory:
    """The opposite category of bottom-to-top chains of a bounded poset.

    Objects are the strict chains from bottom to top. Arrows are generated
    by interior deletions: object c of length p+1 has one generator per
    interior position 0 < i < p, deleting c[i]. The degree of a chain is
    the sum of the squared longest-chain lengths of its segments; every
    generator strictly raises it, so the category is direct.
    """

    objects: tuple
    generators: tuple  # (source_chain, interior_index, target_chain)
    degrees: dict = field(hash=False)
    terminal: tuple

    def generators_from(self, obj):
        return tuple(g for g in self.generators if g[0] == obj)

    def morphisms(self, src, dst):
        """All composites src -> dst. The category is thin: a morphism
        exists iff dst is a subchain of src with the same endpoints, and
        it is unique; returned as the tuple of deleted elements (empty
        for the identity)."""
        if src[0] != dst[0] or src[-1] != dst[-1]:
            return ()
        if not set(dst) <= set(src):
            return ()
        deleted = tuple(x for x in src if x not in set(dst))
        return (deleted,)

    def is_terminal_reachable(self):
        """Every object reaches the terminal object by generator arrows."""
        reach = {self.terminal}
        changed = True
        while changed:
            changed = False
            for s, _, t in self.generators:
                if t in reach and s not in reach:
                    reach.add(s)
                    changed = True
        return all(o in reach for o in self.objects)

    def to_dict(self):
        return {
            "objects": [list(map(str, o)) for o in self.objects],
            "generators": [
                {"source": list(map(str, s)), "deletes_position": i, "target": list(map(str, t))}
                for s, i, t in self.generators
            ],
            "degrees": {" < ".join(map(str, o)): d for o, d in self.degrees.items()},
            "terminal": list(map(str, self.terminal)),
        }


def chain_category(poset):
    """Build the bounded-chain category of a bounded poset."""
    b, t = poset.bottom(), poset.top()
    if b is None or t is None or b == t:
        raise NotBounded("chain category needs a bounded poset")
    objects = poset.chains_between(b, t)
    degrees = {}
    for obj in objects:
        degrees[obj] = sum(
            poset.chain_length(obj[i], obj[i + 1]) ** 2 for i in range(len(obj) - 1)
        )
    generators = []
    for obj in objects:
        p = len(obj) - 1
        for i in range(1, p):
            target = obj[:i] + obj[i + 1 :]
            generators.append((obj, i, target))
    return ChainCategory(
        objects=objects,
        generators=tuple(generators),
        degrees=degrees,
        terminal=(b, t),
    )


@dataclass(frozen=True)
class ReedyReport:
    """Degree and triangle checks over the chain category."""

    generators_checked: int
    degree_violations: tuple
    triangles_checked: int
    triangle_violations: tuple

    @property
    def passed(self):
        return not self.degree_violations and not self.triangle_violations

    def to_dict(self):
        return {
            "generators_checked": self.generators_checked,
            "degree_violations": [list(map(str, v)) for v in self.degree_violations],
            "triangles_checked": self.triangles_checked,
            "triangle_violations": [list(map(str, v)) for v in self.triangle_violations],
            "passed": self.passed,
        }


def reedy_report(poset):
    """Check that every interior deletion strictly raises the chain degree
    and that chain lengths are superadditive over 2-chains."""
    cat = chain_category(poset)
    degree_bad = []
    for src, i, dst in cat.generators:
        if not cat.degrees[dst] > cat.degrees[src]:
            degree_bad.append((src, i, dst))
    tri_bad = []
    tris = 0
    for a in poset.elements:
        for b in poset.elements:
            if not poset.lt(a, b):
                continue
            for c in poset.elements:
                if not poset.lt(b, c):
                    continue
                tris += 1
                if poset.chain_length(a, b) + poset.chain_length(b, c) > poset.chain_length(a, c):
                    tri_bad.append((a, b, c))
    return ReedyReport(
        generators_checked=len(cat.generators),
        degree_violations=tuple(degree_bad),
        triangles_checked=tris,
        triangle_violations=tuple(tri_bad),
    )
