"""Flows: finite state sets with a simplicial path space per state pair
and an associative levelwise composition law.

Loops are representable (the terminal flow has one), but the presentation
engine and everything downstream of it insists on loopless flows, where
the nonempty-path relation is a strict partial order on states.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CapMismatch,
    MalformedFlow,
    NotABall,
    UnknownState,
)
from .homology import CONTRACTIBILITY_NOTE, is_homology_contractible
from .poset import FinPoset
from .simplicial import SimplicialMap, SimplicialSet, product


class Flow:
    """States plus one simplicial set of paths per ordered state pair.

    paths: dict (a, b) -> SimplicialSet (empty ones may be omitted).
    compose: dict (a, b, c) -> per-level tuple of dicts (x, y) -> z giving
    the composition map path(a,b) x path(b,c) -> path(a,c) levelwise.
    """

    def __init__(self, cap, states, paths, compose):
        self.cap = cap
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise MalformedFlow("duplicate state ids")
        self._state_set = set(self.states)
        self._paths = {}
        for (a, b), space in paths.items():
            if a not in self._state_set or b not in self._state_set:
                raise UnknownState(f"path space endpoints ({a!r}, {b!r}) unknown")
            if space.cap != cap:
                raise CapMismatch(f"path space ({a!r}, {b!r}) has cap {space.cap}, flow has {cap}")
            if not space.is_empty:
                self._paths[(a, b)] = space
        self._compose = {}
        for (a, b, c), levels in compose.items():
            if (a, b) in self._paths and (b, c) in self._paths:
                self._compose[(a, b, c)] = tuple(dict(lv) for lv in levels)
        self._empty = SimplicialSet.empty(cap)

    def path(self, a, b):
        if a not in self._state_set or b not in self._state_set:
            raise UnknownState(f"({a!r}, {b!r})")
        return self._paths.get((a, b), self._empty)

    @property
    def nonempty_pairs(self):
        return tuple(self._paths)

    def composable_triples(self):
        return tuple(
            (a, b, c)
            for (a, b) in self._paths
            for (b2, c) in self._paths
            if b2 == b
        )

    def compose_simplices(self, a, b, c, n, x, y):
        table = self._compose.get((a, b, c))
        if table is None or n >= len(table):
            raise MalformedFlow(f"no composition table for {(a, b, c)!r} at level {n}")
        return table[n][(x, y)]

    def compose_table(self, a, b, c):
        return self._compose.get((a, b, c))

    # -- derived structure -------------------------------------------------

    def state_order(self):
        """Transitive closure of the nonempty-path relation."""
        reach = {a: {b for (a2, b) in self._paths if a2 == a} for a in self.states}
        changed = True
        while changed:
            changed = False
            for a in self.states:
                grown = set(reach[a])
                for b in tuple(grown):
                    grown |= reach[b]
                if grown != reach[a]:
                    reach[a] = grown
                    changed = True
        return tuple((a, b) for a in self.states for b in self.states if b in reach[a])

    def is_loopless(self):
        return all(a != b for a, b in self.state_order())

    def state_poset(self):
        """The reachability order as a FinPoset; needs looplessness."""
        from .errors import NotLoopless

        order = self.state_order()
        if any(a == b for a, b in order):
            raise NotLoopless("state reachability has a cycle")
        return FinPoset(self.states, order)

    def initial_states(self):
        targets = {b for (_, b) in self._paths}
        return tuple(s for s in self.states if s not in targets)

    def final_states(self):
        sources = {a for (a, _) in self._paths}
        return tuple(s for s in self.states if s not in sources)

    def __eq__(self, other):
        if not isinstance(other, Flow):
            return NotImplemented
        if (
            self.cap != other.cap
            or self.states != other.states
            or set(self._paths) != set(other._paths)
        ):
            return False
        if any(self._paths[p] != other._paths[p] for p in self._paths):
            return False
        return self._compose == other._compose

    __hash__ = None

    def __repr__(self):
        return f"Flow(cap={self.cap}, states={len(self.states)}, pairs={len(self._paths)})"


# ---------------------------------------------------------------------------
# constructors


def glob(Z, bottom="0", top="1"):
    """Two states and one path space, trivial composition."""
    if bottom == top:
        raise MalformedFlow("glob needs distinct endpoints")
    return Flow(Z.cap, (bottom, top), {(bottom, top): Z}, {})


def state_flow(states, cap):
    """States only, every path space empty."""
    return Flow(cap, states, {}, {})


def terminal_flow(cap):
    """One state, one point of paths, idempotent composition.  The one
    flow every flow maps to; its self-path is a loop by design."""
    pt = SimplicialSet.point(cap, name="@")
    table = tuple(
        {(pt.level(n)[0], pt.level(n)[0]): pt.level(n)[0]} for n in range(cap + 1)
    )
    return Flow(cap, ("@",), {("@", "@"): pt}, {("@", "@", "@"): table})


def poset_flow(P, cap):
    """One path vertex per strict pair, with the order's composition."""
    paths = {}
    for a in P.elements:
        for b in P.elements:
            if P.lt(a, b):
                paths[(a, b)] = SimplicialSet.from_nondegenerate(cap, {(a, b): 0}, {})
    compose = {}
    for a in P.elements:
        for b in P.elements:
            if not P.lt(a, b):
                continue
            for c in P.elements:
                if not P.lt(b, c):
                    continue
                compose[(a, b, c)] = tuple(
                    {
                        (paths[(a, b)].level(n)[0], paths[(b, c)].level(n)[0]): paths[(a, c)].level(n)[0]
                    }
                    for n in range(cap + 1)
                )
    return Flow(cap, P.elements, paths, compose)


def rename_flow_states(X, name_map):
    """Same flow with states renamed by a bijective mapping.  Path-space
    simplex ids are untouched (they are opaque)."""
    if len(set(name_map.values())) != len(X.states):
        raise MalformedFlow("state renaming is not injective")
    states = tuple(name_map[s] for s in X.states)
    paths = {(name_map[a], name_map[b]): X.path(a, b) for (a, b) in X.nonempty_pairs}
    compose = {
        (name_map[a], name_map[b], name_map[c]): X.compose_table(a, b, c)
        for (a, b, c) in X.composable_triples()
    }
    return Flow(X.cap, states, paths, compose)


def restriction(X, keep):
    """The flow on a subset of states, with the inclusion morphism."""
    keep = list(dict.fromkeys(keep))
    for s in keep:
        if s not in set(X.states):
            raise UnknownState(repr(s))
    keep_set = set(keep)
    states = tuple(s for s in X.states if s in keep_set)
    paths = {p: X.path(*p) for p in X.nonempty_pairs if p[0] in keep_set and p[1] in keep_set}
    compose = {}
    for (a, b, c) in X.composable_triples():
        if a in keep_set and b in keep_set and c in keep_set:
            compose[(a, b, c)] = X.compose_table(a, b, c)
    sub = Flow(X.cap, states, paths, compose)
    incl = FlowMorphism(
        sub,
        X,
        {s: s for s in states},
        {
            p: SimplicialMap(
                sub.path(*p),
                X.path(*p),
                [{x: x for x in sub.path(*p).level(n)} for n in range(X.cap + 1)],
            )
            for p in paths
        },
    )
    return sub, incl


# ---------------------------------------------------------------------------
# morphisms


class FlowMorphism:
    """A state map plus one simplicial map per nonempty source pair."""

    def __init__(self, source, target, state_map, path_maps):
        self.source = source
        self.target = target
        self.state_map = dict(state_map)
        self.path_maps = dict(path_maps)

    def apply_state(self, s):
        return self.state_map[s]

    def apply(self, a, b, n, x):
        return self.path_maps[(a, b)].apply(n, x)

    def validate(self):
        X, Y = self.source, self.target
        if X.cap != Y.cap:
            raise CapMismatch("morphism between different caps")
        for s in X.states:
            if s not in self.state_map:
                raise MalformedFlow(f"state map undefined on {s!r}")
            if self.state_map[s] not in set(Y.states):
                raise MalformedFlow(f"state image {self.state_map[s]!r} unknown")
        for (a, b) in X.nonempty_pairs:
            f = self.path_maps.get((a, b))
            if f is None:
                raise MalformedFlow(f"no path map for pair ({a!r}, {b!r})")
            if f.source != X.path(a, b) or f.target != Y.path(self.state_map[a], self.state_map[b]):
                raise MalformedFlow(f"path map for ({a!r}, {b!r}) has wrong (co)domain")
            f.validate()
        for (a, b, c) in X.composable_triples():
            fa, fb, fc = self.state_map[a], self.state_map[b], self.state_map[c]
            for n in range(X.cap + 1):
                for x in X.path(a, b).level(n):
                    for y in X.path(b, c).level(n):
                        lhs = self.apply(a, c, n, X.compose_simplices(a, b, c, n, x, y))
                        rhs = Y.compose_simplices(
                            fa, fb, fc, n, self.apply(a, b, n, x), self.apply(b, c, n, y)
                        )
                        if lhs != rhs:
                            raise MalformedFlow(
                                f"composition not preserved at ({a!r},{b!r},{c!r}) level {n}"
                            )
        return True

    def compose(self, other):
        """self after other."""
        state_map = {s: self.state_map[other.state_map[s]] for s in other.source.states}
        path_maps = {}
        for (a, b) in other.source.nonempty_pairs:
            inner = other.path_maps[(a, b)]
            oa, ob = other.state_map[a], other.state_map[b]
            outer = self.path_maps[(oa, ob)]
            path_maps[(a, b)] = outer.compose(inner)
        return FlowMorphism(other.source, self.target, state_map, path_maps)

    @classmethod
    def identity(cls, X):
        return cls(
            X,
            X,
            {s: s for s in X.states},
            {p: SimplicialMap.identity(X.path(*p)) for p in X.nonempty_pairs},
        )

    def is_isomorphism(self):
        if len(set(self.state_map.values())) != len(self.source.states):
            return False
        if len(self.source.states) != len(self.target.states):
            return False
        image_pairs = set()
        for (a, b) in self.source.nonempty_pairs:
            if not self.path_maps[(a, b)].is_isomorphism():
                return False
            image_pairs.add((self.state_map[a], self.state_map[b]))
        return image_pairs == set(self.target.nonempty_pairs)

    def __eq__(self, other):
        if not isinstance(other, FlowMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.state_map == other.state_map
            and self.path_maps == other.path_maps
        )

    __hash__ = None


# ---------------------------------------------------------------------------
# validation report


@dataclass(frozen=True)
class FlowReport:
    loopless: bool
    state_order: tuple
    initial_states: tuple
    final_states: tuple
    states: int
    nonempty_pairs: int

    def to_dict(self):
        return {
            "loopless": self.loopless,
            "state_order": [[str(a), str(b)] for a, b in self.state_order],
            "initial_states": [str(s) for s in self.initial_states],
            "final_states": [str(s) for s in self.final_states],
            "states": self.states,
            "nonempty_pairs": self.nonempty_pairs,
        }


def validate_flow(X):
    """Full structural check: path spaces, composition tables, simplicial
    compatibility, associativity.  Returns the reachability report."""
    for (a, b) in X.nonempty_pairs:
        try:
            X.path(a, b).validate()
        except ValueError as exc:
            raise MalformedFlow(f"path space ({a!r}, {b!r}) invalid: {exc}") from exc
    for (a, b, c) in X.composable_triples():
        table = X.compose_table(a, b, c)
        if table is None:
            raise MalformedFlow(f"missing composition table for ({a!r}, {b!r}, {c!r})")
        if len(table) != X.cap + 1:
            raise MalformedFlow(f"composition table for ({a!r}, {b!r}, {c!r}) has wrong depth")
        AB, BC, AC = X.path(a, b), X.path(b, c), X.path(a, c)
        for n in range(X.cap + 1):
            for x in AB.level(n):
                for y in BC.level(n):
                    z = table[n].get((x, y))
                    if z is None:
                        raise MalformedFlow(
                            f"composition undefined on ({x!r}, {y!r}) at ({a!r},{b!r},{c!r}) level {n}"
                        )
                    if not AC.has_simplex(n, z):
                        raise MalformedFlow(f"composite {z!r} not in path ({a!r}, {c!r})")
        # compose is a simplicial map from the levelwise product
        for n in range(1, X.cap + 1):
            for x in AB.level(n):
                for y in BC.level(n):
                    z = table[n][(x, y)]
                    for i in range(n + 1):
                        if table[n - 1][(AB.face(n, x, i), BC.face(n, y, i))] != AC.face(n, z, i):
                            raise MalformedFlow(
                                f"composition not simplicial at ({a!r},{b!r},{c!r}) level {n}, d_{i}"
                            )
        for n in range(X.cap):
            for x in AB.level(n):
                for y in BC.level(n):
                    z = table[n][(x, y)]
                    for i in range(n + 1):
                        if table[n + 1][(AB.degeneracy(n, x, i), BC.degeneracy(n, y, i))] != AC.degeneracy(n, z, i):
                            raise MalformedFlow(
                                f"composition not simplicial at ({a!r},{b!r},{c!r}) level {n}, s_{i}"
                            )
    # associativity on quadruples
    for (a, b, c) in X.composable_triples():
        for (b2, c2, d) in X.composable_triples():
            if (b2, c2) != (b, c):
                continue
            for n in range(X.cap + 1):
                for x in X.path(a, b).level(n):
                    for y in X.path(b, c).level(n):
                        xy = X.compose_simplices(a, b, c, n, x, y)
                        for z in X.path(c, d).level(n):
                            yz = X.compose_simplices(b, c, d, n, y, z)
                            if X.compose_simplices(a, c, d, n, xy, z) != X.compose_simplices(a, b, d, n, x, yz):
                                raise MalformedFlow(
                                    f"associativity fails at ({a!r},{b!r},{c!r},{d!r}) level {n}"
                                )
    order = X.state_order()
    return FlowReport(
        loopless=all(a != b for a, b in order),
        state_order=order,
        initial_states=X.initial_states(),
        final_states=X.final_states(),
        states=len(X.states),
        nonempty_pairs=len(X.nonempty_pairs),
    )


# ---------------------------------------------------------------------------
# full directed balls


@dataclass(frozen=True)
class BallReport:
    finite: bool
    unique_initial: bool
    unique_final: bool
    endpoints_distinct: bool
    all_states_between: bool
    loopless: bool
    path_spaces_contractible: bool
    failures: tuple
    note: str = CONTRACTIBILITY_NOTE

    @property
    def is_ball(self):
        return (
            self.finite
            and self.unique_initial
            and self.unique_final
            and self.endpoints_distinct
            and self.all_states_between
            and self.loopless
            and self.path_spaces_contractible
        )

    def to_dict(self):
        return {
            "finite": self.finite,
            "unique_initial": self.unique_initial,
            "unique_final": self.unique_final,
            "endpoints_distinct": self.endpoints_distinct,
            "all_states_between": self.all_states_between,
            "loopless": self.loopless,
            "path_spaces_contractible": self.path_spaces_contractible,
            "failures": [str(f) for f in self.failures],
            "is_ball": self.is_ball,
            "note": self.note,
        }


def is_full_directed_ball(X):
    """Check the five defining conditions; contractibility of the path
    spaces uses the homology surrogate and the report says so."""
    failures = []
    loopless = X.is_loopless()
    if not loopless:
        failures.append("state reachability has a cycle")
    initial = X.initial_states()
    final = X.final_states()
    unique_initial = len(initial) == 1
    unique_final = len(final) == 1
    if not unique_initial:
        failures.append(f"initial states: {initial!r}")
    if not unique_final:
        failures.append(f"final states: {final!r}")
    endpoints_distinct = bool(initial and final and (initial[0] != final[0]))
    if unique_initial and unique_final and not endpoints_distinct:
        failures.append("initial and final state coincide")
    all_between = True
    if unique_initial and unique_final and endpoints_distinct:
        bot, top = initial[0], final[0]
        for s in X.states:
            from_bot = s == bot or not X.path(bot, s).is_empty
            to_top = s == top or not X.path(s, top).is_empty
            if not (from_bot and to_top):
                all_between = False
                failures.append(f"state {s!r} not on a path between the endpoints")
    else:
        all_between = False
    contractible = True
    for (a, b) in X.nonempty_pairs:
        if not is_homology_contractible(X.path(a, b)):
            contractible = False
            failures.append(f"path space ({a!r}, {b!r}) not homology-contractible")
    return BallReport(
        finite=True,
        unique_initial=unique_initial,
        unique_final=unique_final,
        endpoints_distinct=endpoints_distinct,
        all_states_between=all_between,
        loopless=loopless,
        path_spaces_contractible=contractible,
        failures=tuple(failures),
    )


def require_ball(X):
    report = is_full_directed_ball(X)
    if not report.is_ball:
        raise NotABall("; ".join(report.failures) or "not a full directed ball")
    return report


@dataclass(frozen=True)
class BallDiagram:
    """A full directed ball's diagram over the bottom-to-top chains of
    its state poset: interval joins as objects, interior deletions as
    arrows."""

    flow: object
    category: object
    objects: dict
    arrows: dict

    def object(self, chain):
        return self.objects[tuple(chain)]

    def arrow(self, src, i):
        return self.arrows[(tuple(src), i)]

    def check_functoriality(self):
        """Each arrow is a valid morphism and parallel deletion
        composites agree (delete i then j-1 equals delete j then i)."""
        for m in self.arrows.values():
            m.validate()
        for chain in self.category.objects:
            interior = len(chain) - 2
            for i in range(1, interior + 1):
                for j in range(i + 1, interior + 1):
                    minus_i = chain[:i] + chain[i + 1 :]
                    minus_j = chain[:j] + chain[j + 1 :]
                    first = self.arrows[(minus_i, j - 1)].compose(self.arrows[(chain, i)])
                    second = self.arrows[(minus_j, i)].compose(self.arrows[(chain, j)])
                    if first != second:
                        raise MalformedFlow(
                            f"deletion composites differ on {chain!r} at ({i}, {j})"
                        )
        return True


def ball_diagram(D, budget=None):
    """The chain diagram of a full directed ball; see BallDiagram."""
    from .presentation import build_ball_diagram

    return build_ball_diagram(D, budget=budget)


# ---------------------------------------------------------------------------
# pullbacks


def pullback(f, g):
    """The flow of pairs agreeing in the common target.

    f: X -> W, g: Z -> W.  Returns (P, proj_x, proj_z); states are the
    agreeing pairs, path spaces the levelwise pullbacks inside products.
    """
    X, Z = f.source, g.source
    if X.cap != Z.cap:
        raise CapMismatch("pullback of different caps")
    cap = X.cap
    states = tuple(
        (x, z) for x in X.states for z in Z.states if f.apply_state(x) == g.apply_state(z)
    )
    paths = {}
    for (a, b) in X.nonempty_pairs:
        for (c, d) in Z.nonempty_pairs:
            if f.apply_state(a) != g.apply_state(c) or f.apply_state(b) != g.apply_state(d):
                continue
            full = product(X.path(a, b), Z.path(c, d))
            keep = [
                (n, (p, q))
                for n in range(cap + 1)
                for (p, q) in full.level(n)
                if f.apply(a, b, n, p) == g.apply(c, d, n, q)
            ]
            if not keep:
                continue
            sub = full.subcomplex(keep)
            if not sub.is_empty:
                paths[((a, c), (b, d))] = sub
    compose = {}
    for ((a, c), (b, d)) in paths:
        for ((b2, d2), (e, h)) in paths:
            if (b2, d2) != (b, d):
                continue
            if ((a, c), (e, h)) not in paths:
                continue
            levels = []
            for n in range(cap + 1):
                table = {}
                for (p, q) in paths[((a, c), (b, d))].level(n):
                    for (p2, q2) in paths[((b, d), (e, h))].level(n):
                        table[((p, q), (p2, q2))] = (
                            X.compose_simplices(a, b, e, n, p, p2),
                            Z.compose_simplices(c, d, h, n, q, q2),
                        )
                levels.append(table)
            compose[((a, c), (b, d), (e, h))] = tuple(levels)
    P = Flow(cap, states, paths, compose)
    proj_x = FlowMorphism(
        P,
        X,
        {s: s[0] for s in states},
        {
            pr: SimplicialMap(
                P.path(*pr),
                X.path(pr[0][0], pr[1][0]),
                [{xz: xz[0] for xz in P.path(*pr).level(n)} for n in range(cap + 1)],
            )
            for pr in paths
        },
    )
    proj_z = FlowMorphism(
        P,
        Z,
        {s: s[1] for s in states},
        {
            pr: SimplicialMap(
                P.path(*pr),
                Z.path(pr[0][1], pr[1][1]),
                [{xz: xz[1] for xz in P.path(*pr).level(n)} for n in range(cap + 1)],
            )
            for pr in paths
        },
    )
    return P, proj_x, proj_z


def terminal_morphism(X):
    """The unique morphism to the terminal flow."""
    T = terminal_flow(X.cap)
    pt = T.path("@", "@")
    path_maps = {}
    for (a, b) in X.nonempty_pairs:
        space = X.path(a, b)
        path_maps[(a, b)] = SimplicialMap(
            space, pt, [{x: pt.level(n)[0] for x in space.level(n)} for n in range(X.cap + 1)]
        )
    return FlowMorphism(X, T, {s: "@" for s in X.states}, path_maps)


def product_flow(X, Z):
    """Binary product, as the pullback over the terminal flow."""
    P, px, pz = pullback(terminal_morphism(X), terminal_morphism(Z))
    return P, px, pz


# ---------------------------------------------------------------------------
# isomorphism search


def _enumerate_simplicial_isos(A, B):
    from .simplicial import enumerate_simplicial_isomorphisms

    yield from enumerate_simplicial_isomorphisms(A, B)


def _state_invariant(X, s):
    ins = sorted(
        (tuple(len(X.path(a, s).level(n)) for n in range(X.cap + 1)))
        for a in X.states
        if not X.path(a, s).is_empty
    )
    outs = sorted(
        (tuple(len(X.path(s, b).level(n)) for n in range(X.cap + 1)))
        for b in X.states
        if not X.path(s, b).is_empty
    )
    return (tuple(ins), tuple(outs))


def flow_isomorphisms(X, Y):
    """Yield isomorphisms X -> Y (state bijection plus compatible levelwise
    path bijections commuting with composition)."""
    if X.cap != Y.cap or len(X.states) != len(Y.states):
        return
    if len(X.nonempty_pairs) != len(Y.nonempty_pairs):
        return
    inv_y = {}
    for t in Y.states:
        inv_y.setdefault(_state_invariant(Y, t), []).append(t)
    xs = list(X.states)

    def state_backtrack(k, fmap, used):
        if k == len(xs):
            yield dict(fmap)
            return
        s = xs[k]
        for t in inv_y.get(_state_invariant(X, s), ()):
            if t in used:
                continue
            ok = True
            for s2 in xs[:k]:
                t2 = fmap[s2]
                for n in range(X.cap + 1):
                    if len(X.path(s, s2).level(n)) != len(Y.path(t, t2).level(n)) or len(
                        X.path(s2, s).level(n)
                    ) != len(Y.path(t2, t).level(n)):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            fmap[s] = t
            used.add(t)
            yield from state_backtrack(k + 1, fmap, used)
            del fmap[s]
            used.discard(t)

    for state_map in state_backtrack(0, {}, set()):
        pairs = list(X.nonempty_pairs)

        def pair_backtrack(k, chosen):
            if k == len(pairs):
                cand = FlowMorphism(X, Y, state_map, dict(chosen))
                try:
                    cand.validate()
                except (MalformedFlow, ValueError, KeyError):
                    return
                if cand.is_isomorphism():
                    yield cand
                return
            a, b = pairs[k]
            target = Y.path(state_map[a], state_map[b])
            for iso in _enumerate_simplicial_isos(X.path(a, b), target):
                chosen[(a, b)] = iso
                yield from pair_backtrack(k + 1, chosen)
                del chosen[(a, b)]

        yield from pair_backtrack(0, {})


def flow_isomorphism(X, Y):
    for f in flow_isomorphisms(X, Y):
        return f
    return None


def enumerate_flow_morphisms(X, Y):
    """Yield every morphism X -> Y.  Exponential; meant for cone checks
    on flows with a handful of simplices."""
    from .simplicial import enumerate_simplicial_maps

    if X.cap != Y.cap:
        return
    xs = list(X.states)
    ys = list(Y.states)

    def state_maps(k, fmap):
        if k == len(xs):
            # every nonempty pair must land on a nonempty pair
            for (a, b) in X.nonempty_pairs:
                if Y.path(fmap[a], fmap[b]).is_empty:
                    return
            yield dict(fmap)
            return
        for t in ys:
            fmap[xs[k]] = t
            yield from state_maps(k + 1, fmap)
        del fmap[xs[k]]

    for state_map in state_maps(0, {}):
        pairs = list(X.nonempty_pairs)

        def pair_backtrack(k, chosen):
            if k == len(pairs):
                cand = FlowMorphism(X, Y, state_map, dict(chosen))
                try:
                    cand.validate()
                except (MalformedFlow, ValueError, KeyError):
                    return
                yield cand
                return
            a, b = pairs[k]
            target = Y.path(state_map[a], state_map[b])
            for fmap in enumerate_simplicial_maps(X.path(a, b), target):
                chosen[(a, b)] = fmap
                yield from pair_backtrack(k + 1, chosen)
                del chosen[(a, b)]

        yield from pair_backtrack(0, {})
