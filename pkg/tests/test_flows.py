"""Flows: structure, validation, morphisms, pullbacks, directed balls."""

import random

import pytest

from flowcalc.errors import (
    MalformedFlow,
    NotABall,
    NotLoopless,
    UnknownState,
)
from flowcalc.flows import (
    Flow,
    FlowMorphism,
    ball_diagram,
    enumerate_flow_morphisms,
    flow_isomorphism,
    flow_isomorphisms,
    glob,
    is_full_directed_ball,
    poset_flow,
    product_flow,
    pullback,
    rename_flow_states,
    require_ball,
    restriction,
    state_flow,
    terminal_flow,
    terminal_morphism,
    validate_flow,
)
from flowcalc.poset import FinPoset
from flowcalc.simplicial import SimplicialSet

from .helpers import random_bounded_poset

FIG_POSET = FinPoset(
    "0ABC1", [("0", "A"), ("A", "B"), ("B", "1"), ("0", "C"), ("C", "1")]
)
FIG = poset_flow(FIG_POSET, 3)
SEGMENT_SPACE = SimplicialSet.from_nondegenerate(
    3, {"a": 0, "b": 0, "e": 1}, {"e": ("b", "a")}
)


def point_paths(cap, names):
    return {
        pair: SimplicialSet.from_nondegenerate(cap, {pair: 0}, {}) for pair in names
    }


def test_glob_shape():
    G = glob(SimplicialSet.circle(3))
    assert G.states == ("0", "1")
    assert G.nonempty_pairs == (("0", "1"),)
    assert G.composable_triples() == ()
    validate_flow(G)
    with pytest.raises(MalformedFlow):
        glob(SimplicialSet.circle(3), "x", "x")


def test_state_flow_and_terminal():
    S = state_flow(("p", "q"), 3)
    rep = validate_flow(S)
    assert rep.loopless and rep.nonempty_pairs == 0
    assert S.initial_states() == ("p", "q")
    T = terminal_flow(3)
    rep = validate_flow(T)
    assert not rep.loopless  # the one deliberate self-loop
    assert T.compose_simplices("@", "@", "@", 0, "@", "@") == "@"


def test_poset_flow_fig():
    rep = validate_flow(FIG)
    assert rep.loopless
    assert rep.states == 5
    assert rep.nonempty_pairs == 8  # strict pairs of the order
    assert rep.initial_states == ("0",)
    assert rep.final_states == ("1",)
    # composition works out to the order's transitivity
    v = FIG.path("0", "A").level(0)[0]
    w = FIG.path("A", "B").level(0)[0]
    assert FIG.compose_simplices("0", "A", "B", 0, v, w) == FIG.path("0", "B").level(0)[0]


def test_state_poset_roundtrip():
    P = FIG.state_poset()
    for a in FIG_POSET.elements:
        for b in FIG_POSET.elements:
            assert P.leq(a, b) == FIG_POSET.leq(a, b)
    loom = Flow(2, ("x",), {("x", "x"): SimplicialSet.point(2, name="l")}, {})
    with pytest.raises(NotLoopless):
        loom.state_poset()


def test_path_unknown_state():
    with pytest.raises(UnknownState):
        FIG.path("0", "missing")


def test_validate_flow_catches_bad_composite():
    paths = point_paths(2, [("a", "b"), ("b", "c"), ("a", "c")])
    bad_table = tuple(
        {
            (paths[("a", "b")].level(n)[0], paths[("b", "c")].level(n)[0]): "nonsense"
        }
        for n in range(3)
    )
    X = Flow(2, ("a", "b", "c"), paths, {("a", "b", "c"): bad_table})
    with pytest.raises(MalformedFlow):
        validate_flow(X)


def test_validate_flow_catches_missing_table():
    paths = point_paths(2, [("a", "b"), ("b", "c"), ("a", "c")])
    X = Flow(2, ("a", "b", "c"), paths, {})
    with pytest.raises(MalformedFlow):
        validate_flow(X)


def _associativity_counterexample():
    cap = 1
    pairs = [("a", "b"), ("b", "c"), ("c", "d"), ("a", "c"), ("b", "d")]
    paths = point_paths(cap, pairs)
    paths[("a", "d")] = SimplicialSet.from_nondegenerate(cap, {"p": 0, "q": 0}, {})

    def pt(pair, n):
        return paths[pair].level(n)[0]

    def table(src1, src2, dst_simplex):
        return tuple(
            {(pt(src1, n), pt(src2, n)): dst_simplex[n]} for n in range(cap + 1)
        )

    ad = paths[("a", "d")]
    p_levels = [ad.level(0)[0], ad.degeneracy(0, "p", 0)]
    q_levels = ["q", ad.degeneracy(0, "q", 0)]
    compose = {
        ("a", "b", "c"): table(("a", "b"), ("b", "c"), [pt(("a", "c"), n) for n in range(2)]),
        ("b", "c", "d"): table(("b", "c"), ("c", "d"), [pt(("b", "d"), n) for n in range(2)]),
        ("a", "c", "d"): table(("a", "c"), ("c", "d"), p_levels),
        ("a", "b", "d"): table(("a", "b"), ("b", "d"), q_levels),
    }
    return Flow(cap, ("a", "b", "c", "d"), paths, compose)


def test_validate_flow_catches_associativity():
    X = _associativity_counterexample()
    with pytest.raises(MalformedFlow, match="associativity"):
        validate_flow(X)


def test_rename_flow_states():
    Y = rename_flow_states(FIG, {s: s + "!" for s in FIG.states})
    validate_flow(Y)
    assert set(Y.states) == {"0!", "A!", "B!", "C!", "1!"}
    assert flow_isomorphism(FIG, Y) is not None
    with pytest.raises(MalformedFlow):
        rename_flow_states(FIG, {s: "same" for s in FIG.states})


def test_restriction():
    sub, incl = restriction(FIG, ["0", "A", "B"])
    assert sub.states == ("0", "A", "B")
    assert len(sub.nonempty_pairs) == 3
    incl.validate()
    validate_flow(sub)
    with pytest.raises(UnknownState):
        restriction(FIG, ["0", "zzz"])


def test_flow_morphism_validate_and_compose():
    sub, incl = restriction(FIG, ["0", "A", "1"])
    ident = FlowMorphism.identity(FIG)
    again = ident.compose(incl)
    again.validate()
    assert again.apply_state("A") == "A"
    t = terminal_morphism(FIG)
    t.validate()
    assert t.apply_state("0") == "@"


def test_flow_morphism_validate_rejects_bad_state_map():
    P3 = FinPoset("abc", [("a", "b"), ("b", "c")])
    X = poset_flow(P3, 2)
    Y = terminal_flow(2)
    wrong_states = FlowMorphism(X, Y, {"a": "@", "b": "@", "c": "missing"}, {})
    with pytest.raises((MalformedFlow, UnknownState, KeyError, ValueError)):
        wrong_states.validate()


def test_pullback_of_globs():
    Gx = glob(SimplicialSet.point(2, name="x"))
    Gz = glob(SimplicialSet.point(2, name="z"))
    P, px, pz = product_flow(Gx, Gz)
    validate_flow(P)
    assert set(P.states) == {("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")}
    assert P.nonempty_pairs == ((("0", "0"), ("1", "1")),)
    px.validate()
    pz.validate()


def test_pullback_agreement_condition():
    # pulling back the identity against itself recovers the diagonal
    ident = FlowMorphism.identity(FIG)
    P, px, pz = pullback(ident, ident)
    diag = [s for s in P.states if s[0] == s[1]]
    assert len(diag) == 5
    for (a, b) in P.nonempty_pairs:
        assert a[0] == a[1] and b[0] == b[1]
    validate_flow(P)


def test_flow_isomorphisms_count_on_symmetric_shape():
    # two parallel middle states that can swap
    P = FinPoset("0AB1", [("0", "A"), ("A", "1"), ("0", "B"), ("B", "1")])
    X = poset_flow(P, 2)
    isos = list(flow_isomorphisms(X, X))
    assert len(isos) == 2
    swaps = {tuple(sorted((f.apply_state("A"), f.apply_state("B")))) for f in isos}
    assert swaps == {("A", "B")}


def test_flow_isomorphism_negative():
    assert flow_isomorphism(FIG, poset_flow(FinPoset("0A1", [("0", "A"), ("A", "1")]), 3)) is None
    G1 = glob(SimplicialSet.circle(3))
    G2 = glob(SEGMENT_SPACE)
    assert flow_isomorphism(G1, G2) is None


def test_enumerate_flow_morphisms_counts():
    # two-state chain into itself: state maps respecting the one edge
    P2 = FinPoset("xy", [("x", "y")])
    X = poset_flow(P2, 2)
    ms = list(enumerate_flow_morphisms(X, X))
    # x,y -> x,y and the two collapses x,y -> x,x / y,y have no path
    # image (path spaces empty there), so only the identity survives
    assert len(ms) == 1
    assert ms[0].apply_state("x") == "x"
    T = terminal_flow(2)
    into_terminal = list(enumerate_flow_morphisms(X, T))
    assert len(into_terminal) == 1


def test_ball_check_bullets():
    assert is_full_directed_ball(FIG).is_ball
    rep = is_full_directed_ball(glob(SimplicialSet.circle(3)))
    assert not rep.is_ball
    assert any("not homology-contractible" in f for f in rep.failures)

    two = state_flow(("p", "q"), 3)
    rep = is_full_directed_ball(two)
    assert not rep.unique_initial and not rep.unique_final

    rep = is_full_directed_ball(terminal_flow(3))
    assert not rep.is_ball  # looped and endpoints coincide
    assert not rep.loopless

    # a stray state: incomparable to the endpoints makes them non-unique
    P = FinPoset("0s1", [("0", "1")])
    rep = is_full_directed_ball(poset_flow(P, 3))
    assert not rep.is_ball
    assert not rep.unique_initial and not rep.unique_final

    # states with edges that never connect to an endpoint (the check
    # reads path spaces only, so the missing tables don't matter here)
    stray = Flow(
        3,
        ("0", "s", "t", "1"),
        point_paths(3, [("0", "1"), ("0", "s"), ("s", "t"), ("t", "1")]),
        {},
    )
    rep = is_full_directed_ball(stray)
    assert not rep.all_states_between
    assert any("not on a path" in f for f in rep.failures)

    disconnected_paths = glob(
        SimplicialSet.from_nondegenerate(3, {"u": 0, "v": 0}, {})
    )
    rep = is_full_directed_ball(disconnected_paths)
    assert not rep.path_spaces_contractible


def test_require_ball():
    require_ball(FIG)
    with pytest.raises(NotABall):
        require_ball(glob(SimplicialSet.circle(3)))


def test_ball_report_dict_mentions_surrogate():
    d = is_full_directed_ball(FIG).to_dict()
    assert d["is_ball"] is True
    assert "homology" in d["note"]


def test_random_poset_flows_are_balls():
    rng = random.Random(11)
    for _ in range(20):
        P = random_bounded_poset(rng, 7)
        X = poset_flow(P, 2)
        assert is_full_directed_ball(X).is_ball
        validate_flow(X)


def test_ball_diagram_fig():
    diag = ball_diagram(FIG)
    assert set(diag.category.objects) == {
        ("0", "1"),
        ("0", "A", "1"),
        ("0", "B", "1"),
        ("0", "C", "1"),
        ("0", "A", "B", "1"),
    }
    assert diag.check_functoriality()
    # the terminal object's flow is the whole interval join of the ball
    top = diag.object(("0", "1"))
    assert set(top.states) == set(FIG.states)
    for chain in diag.category.objects:
        validate_flow(diag.object(chain))


def test_ball_diagram_needs_ball():
    with pytest.raises(NotABall):
        ball_diagram(glob(SimplicialSet.circle(3)))
