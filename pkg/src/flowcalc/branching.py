"""Branching/merging spaces, per-state homology profiles, T-subdivision,
and the invariance checker.

The branching space at a state folds every outgoing path onto its
forward extensions (x ~ x*y); the merging space is the dual.  Because
the seed relation is itself closed under faces and degeneracies, the
simplicial quotient identifies exactly the seed-generated equivalence —
which is what makes the universal property checkable on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MalformedFlow, MalformedSubdivision, NotLoopless, UnknownState
from .flows import FlowMorphism, glob, poset_flow, require_ball, rename_flow_states
from .homology import CONTRACTIBILITY_NOTE, homology_list, is_homology_contractible
from .simplicial import SimplicialMap, SimplicialSet, disjoint_union, quotient


@dataclass(frozen=True)
class StateBranch:
    """One state's branching (or merging) quotient."""

    state: object
    space: object
    homology: tuple
    class_map: dict = field(compare=False)

    @property
    def is_empty(self):
        return self.space.is_empty

    def class_count(self, n=0):
        return len(self.space.level(n))


@dataclass(frozen=True)
class BranchReport:
    direction: str
    per_state: dict
    note: str = CONTRACTIBILITY_NOTE

    def at(self, state):
        return self.per_state[state]

    def to_dict(self):
        out = {"direction": self.direction, "states": {}, "note": self.note}
        for s, br in self.per_state.items():
            out["states"][str(s)] = {
                "empty": br.is_empty,
                "classes_level0": br.class_count(0),
                "homology": [str(h) for h in br.homology],
            }
        return out


def _branch_pieces(X, state, direction):
    """The tagged path spaces entering the quotient at one state, plus
    the x ~ x*y (or y ~ x*y) seeds."""
    if direction == "minus":
        tags = [b for b in X.states if not X.path(state, b).is_empty]
        spaces = [X.path(state, b) for b in tags]
    else:
        tags = [a for a in X.states if not X.path(a, state).is_empty]
        spaces = [X.path(a, state) for a in tags]
    total = disjoint_union(spaces, tags=list(tags)) if tags else SimplicialSet.empty(X.cap)
    seeds = []
    for (a, b, c) in X.composable_triples():
        for n in range(X.cap + 1):
            for x in X.path(a, b).level(n):
                for y in X.path(b, c).level(n):
                    z = X.compose_simplices(a, b, c, n, x, y)
                    if direction == "minus" and a == state:
                        seeds.append((n, (b, x), (c, z)))
                    elif direction == "plus" and c == state:
                        seeds.append((n, (b, y), (a, z)))
    return total, seeds


def branching_space(X, direction="minus"):
    """Per-state quotients of the outgoing (incoming) path spaces.

    direction 'minus' folds x ~ x*y by source state; 'plus' folds
    y ~ x*y by target state."""
    if direction not in ("minus", "plus"):
        raise ValueError(f"direction must be 'minus' or 'plus', got {direction!r}")
    per_state = {}
    for s in X.states:
        total, seeds = _branch_pieces(X, s, direction)
        if total.is_empty:
            space, class_map = total, {}
        else:
            space, proj = quotient(total, seeds)
            class_map = {
                (tag_x[0], n, tag_x[1]): proj.apply(n, tag_x)
                for n in range(X.cap + 1)
                for tag_x in total.level(n)
            }
        groups = tuple(homology_list(space)) if not space.is_empty else ()
        per_state[s] = StateBranch(state=s, space=space, homology=groups, class_map=class_map)
    return BranchReport(direction=direction, per_state=per_state)


def branching_profile(X, direction="minus"):
    """state -> homology groups of its quotient (empty tuple if empty)."""
    report = branching_space(X, direction)
    return {s: report.at(s).homology for s in X.states}


# ---------------------------------------------------------------------------
# the desk-scale branching theorem


@dataclass(frozen=True)
class Resultat1Report:
    single_class_at_bottom: bool
    bottom_state: object
    poset_shadow_classes: int
    quotient_contractible: bool
    note: str = CONTRACTIBILITY_NOTE

    @property
    def passed(self):
        return self.single_class_at_bottom and self.quotient_contractible

    def to_dict(self):
        return {
            "single_class_at_bottom": self.single_class_at_bottom,
            "bottom_state": str(self.bottom_state),
            "poset_shadow_classes": self.poset_shadow_classes,
            "quotient_contractible": self.quotient_contractible,
            "passed": self.passed,
            "note": self.note,
        }


def resultat1_check(D):
    """On the poset shadow F(D⁰): everything at the bottom folds to a
    single class.  On D itself: the bottom quotient is
    homology-contractible.  Reports both."""
    require_ball(D)
    P = D.state_poset()
    bottom = P.bottom()
    shadow = poset_flow(P, D.cap)
    shadow_branch = branching_space(shadow, "minus").at(bottom)
    n_classes = shadow_branch.class_count(0)
    single = (
        n_classes == 1
        and sum(len(shadow_branch.space.nondegenerate(n)) for n in range(D.cap + 1)) == 1
    )
    own_branch = branching_space(D, "minus").at(bottom)
    contractible = (not own_branch.is_empty) and is_homology_contractible(own_branch.space)
    return Resultat1Report(
        single_class_at_bottom=single,
        bottom_state=bottom,
        poset_shadow_classes=n_classes,
        quotient_contractible=contractible,
    )


# ---------------------------------------------------------------------------
# T-subdivision


def _total_degeneracy(space, x, n):
    """The (unique) n-fold degeneracy of a vertex."""
    out = x
    for k in range(n):
        out = space.degeneracy(k, out, 0)
    return out


def t_subdivide(X, edge, D, budget=None):
    """Replace one level-0 path vertex of X by a full directed ball.

    edge: (alpha, beta, u) with u a vertex of path(alpha, beta).
    Computed as the pushout of (D <- segment -> X) where the segment
    picks u on one side and D's bottom-to-top base vertex on the other.
    Returns (Y, morphism X -> Y); X's state names survive into Y.
    """
    from .presentation import _retarget, pushout

    alpha, beta, u = edge
    if not X.is_loopless():
        raise NotLoopless("subdivision target must be loopless")
    require_ball(D)
    if alpha not in set(X.states) or beta not in set(X.states):
        raise UnknownState(f"edge endpoints ({alpha!r}, {beta!r})")
    if not X.path(alpha, beta).has_simplex(0, u):
        raise MalformedFlow(f"{u!r} is not a level-0 path vertex of ({alpha!r}, {beta!r})")
    ball_poset = D.state_poset()
    bot, top = ball_poset.bottom(), ball_poset.top()
    base_candidates = D.path(bot, top).level(0)
    base = min(base_candidates, key=repr) if len(base_candidates) > 1 else base_candidates[0]

    cap = X.cap
    segment = glob(SimplicialSet.point(cap), "0", "1")
    seg_path = segment.path("0", "1")

    def leg(target_flow, s0, s1, vertex):
        pair_space = target_flow.path(s0, s1)
        maps = [
            {x: _total_degeneracy(pair_space, vertex, n) for x in seg_path.level(n)}
            for n in range(cap + 1)
        ]
        return FlowMorphism(
            segment,
            target_flow,
            {"0": s0, "1": s1},
            {("0", "1"): SimplicialMap(seg_path, pair_space, maps)},
        )

    into_ball = leg(D, bot, top, base)
    into_flow = leg(X, alpha, beta, u)
    raw, inj_ball, inj_flow = pushout(into_ball, into_flow, budget=budget)

    # states: X's names survive; ball interior keeps its names unless taken
    rename = {}
    used = set(X.states)
    for s in X.states:
        rename[inj_flow.apply_state(s)] = s
    for d in D.states:
        cls = inj_ball.apply_state(d)
        if cls in rename:
            continue
        name, k = d, 0
        while name in used:
            name = (d, "sub") if k == 0 else (d, "sub", k)
            k += 1
        used.add(name)
        rename[cls] = name
    Y = rename_flow_states(raw, rename)
    return Y, _retarget(inj_flow, Y, rename)


# ---------------------------------------------------------------------------
# invariance checking


@dataclass(frozen=True)
class InvarianceReport:
    comparisons: tuple
    new_state_checks: tuple
    failures: tuple
    note: str = CONTRACTIBILITY_NOTE

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            "comparisons": [
                {
                    "state": str(s),
                    "direction": d,
                    "before": [str(h) for h in hx],
                    "after": [str(h) for h in hy],
                    "equal": ok,
                }
                for (s, d, hx, hy, ok) in self.comparisons
            ],
            "new_states": [
                {"state": str(s), "direction": d, "status": status}
                for (s, d, status) in self.new_state_checks
            ],
            "failures": [str(f) for f in self.failures],
            "passed": self.passed,
            "note": self.note,
        }


def check_invariance(X, Y, f):
    """Per-state branching and merging homology must survive the
    subdivision: equal profiles at old states, empty-or-contractible
    quotients at new ones."""
    if len(set(f.state_map.values())) != len(X.states):
        raise MalformedSubdivision("state map is not injective")
    old_images = {f.apply_state(s): s for s in X.states}
    comparisons = []
    new_checks = []
    failures = []
    for direction in ("minus", "plus"):
        reports_x = branching_space(X, direction)
        reports_y = branching_space(Y, direction)
        for s in X.states:
            hx = reports_x.at(s).homology
            hy = reports_y.at(f.apply_state(s)).homology
            equal = hx == hy
            comparisons.append((s, direction, hx, hy, equal))
            if not equal:
                failures.append(
                    f"state {s!r} {direction}: {[str(h) for h in hx]} -> {[str(h) for h in hy]}"
                )
        for t in Y.states:
            if t in old_images:
                continue
            br = reports_y.at(t)
            if br.is_empty:
                status = "empty"
            elif is_homology_contractible(br.space):
                status = "contractible"
            else:
                status = "violation"
                failures.append(f"new state {t!r} {direction}: quotient not contractible")
            new_checks.append((t, direction, status))
    return InvarianceReport(
        comparisons=tuple(comparisons),
        new_state_checks=tuple(new_checks),
        failures=tuple(failures),
    )
