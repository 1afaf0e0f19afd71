"""Saturation of flow presentations, colimits, tensors, and the probes."""

import random

import pytest

from flowcalc.errors import (
    BudgetExceeded,
    CapMismatch,
    MalformedFlow,
    NotAnInclusion,
    NotJoinable,
    NotLoopless,
    UnknownState,
)
from flowcalc.flows import (
    Flow,
    FlowMorphism,
    ball_diagram,
    enumerate_flow_morphisms,
    flow_isomorphism,
    glob,
    is_full_directed_ball,
    poset_flow,
    require_ball,
    restriction,
    state_flow,
    validate_flow,
)
from flowcalc.poset import FinPoset
from flowcalc.presentation import (
    FlowPresentation,
    accumulated_colimit,
    assemble_colimit,
    glob_tensor_witness,
    interval_join,
    join,
    latching_object,
    lemma_probe,
    mapping_cylinder,
    pushout,
    resolve_word,
    saturate,
    sequential_colimit,
    tensor,
    tensor_triple_witness,
)
from flowcalc.simplicial import SimplicialMap, SimplicialSet, product

FIG_POSET = FinPoset(
    "0ABC1", [("0", "A"), ("A", "B"), ("B", "1"), ("0", "C"), ("C", "1")]
)
FIG = poset_flow(FIG_POSET, 3)
SEG_SPACE = SimplicialSet.from_nondegenerate(
    3, {"a": 0, "b": 0, "e": 1}, {"e": ("b", "a")}
)


def vertex_gen(cap, name):
    return SimplicialSet.from_nondegenerate(cap, {name: 0}, {})


def two_step(cap=2):
    """a --u--> b --v--> c with no relations."""
    return FlowPresentation(
        cap,
        ("a", "b", "c"),
        {("a", "b"): vertex_gen(cap, "u"), ("b", "c"): vertex_gen(cap, "v")},
    )


def triangle(with_relation, cap=2):
    gens = {
        ("a", "b"): vertex_gen(cap, "u"),
        ("b", "c"): vertex_gen(cap, "v"),
        ("a", "c"): vertex_gen(cap, "w"),
    }
    rels = []
    if with_relation:
        rels.append(
            (0, ((("a", "b"), "u"), (("b", "c"), "v")), ((("a", "c"), "w"),))
        )
    return FlowPresentation(cap, ("a", "b", "c"), gens, rels)


# ---------------------------------------------------------------------------
# presentation validation


def test_presentation_validate_errors():
    with pytest.raises(MalformedFlow):
        FlowPresentation(2, ("a", "a"), {}).validate()
    with pytest.raises(UnknownState):
        FlowPresentation(2, ("a",), {("a", "zzz"): vertex_gen(2, "u")}).validate()
    with pytest.raises(NotLoopless):
        FlowPresentation(2, ("a",), {("a", "a"): vertex_gen(2, "u")}).validate()
    with pytest.raises(NotLoopless):
        FlowPresentation(
            2,
            ("a", "b"),
            {("a", "b"): vertex_gen(2, "u"), ("b", "a"): vertex_gen(2, "v")},
        ).validate()
    with pytest.raises(CapMismatch):
        FlowPresentation(2, ("a", "b"), {("a", "b"): vertex_gen(3, "u")}).validate()


def test_relation_word_errors():
    base = two_step()
    bad_level = FlowPresentation(
        2,
        base.states,
        base.generators,
        [(5, ((("a", "b"), "u"),), ((("a", "b"), "u"),))],
    )
    with pytest.raises(MalformedFlow):
        bad_level.validate()
    dangling = FlowPresentation(
        2,
        base.states,
        base.generators,
        [(0, ((("a", "b"), "nope"),), ((("a", "b"), "u"),))],
    )
    with pytest.raises(MalformedFlow):
        dangling.validate()
    unchained = FlowPresentation(
        2,
        base.states,
        base.generators,
        [(0, ((("b", "c"), "v"), (("a", "b"), "u")), ((("a", "b"), "u"),))],
    )
    with pytest.raises(MalformedFlow):
        unchained.validate()
    mismatched_ends = FlowPresentation(
        2,
        base.states,
        base.generators,
        [(0, ((("a", "b"), "u"),), ((("b", "c"), "v"),))],
    )
    with pytest.raises(MalformedFlow):
        mismatched_ends.validate()


def test_empty_generator_spaces_are_dropped():
    pres = FlowPresentation(
        2, ("a", "b"), {("a", "b"): SimplicialSet.empty(2)}
    )
    flow, emb = saturate(pres)
    assert flow.nonempty_pairs == ()
    assert emb == {}


# ---------------------------------------------------------------------------
# saturation


def test_free_two_step_saturation():
    flow, emb = saturate(two_step())
    rep = validate_flow(flow)
    assert rep.loopless
    assert set(flow.nonempty_pairs) == {("a", "b"), ("b", "c"), ("a", "c")}
    for n in range(3):
        assert len(flow.path("a", "c").level(n)) == 1
    for pair, m in emb.items():
        m.validate()
    u = emb[("a", "b")].apply(0, "u")
    v = emb[("b", "c")].apply(0, "v")
    uv = flow.compose_simplices("a", "b", "c", 0, u, v)
    assert uv == flow.path("a", "c").level(0)[0]


def test_triangle_relation_collapses_composite():
    free, _ = saturate(triangle(False))
    assert len(free.path("a", "c").level(0)) == 2
    collapsed, emb = saturate(triangle(True))
    assert len(collapsed.path("a", "c").level(0)) == 1
    u = emb[("a", "b")].apply(0, "u")
    v = emb[("b", "c")].apply(0, "v")
    w = emb[("a", "c")].apply(0, "w")
    assert collapsed.compose_simplices("a", "b", "c", 0, u, v) == w
    validate_flow(collapsed)


def test_single_pair_saturation_is_the_generator_space():
    pres = FlowPresentation(3, ("0", "1"), {("0", "1"): SEG_SPACE})
    flow, emb = saturate(pres)
    m = emb[("0", "1")]
    m.validate()
    assert m.is_isomorphism()
    assert validate_flow(flow).nonempty_pairs == 1


def test_parallel_word_counts_multiply():
    cap = 2
    two = SimplicialSet.from_nondegenerate(cap, {"u1": 0, "u2": 0}, {})
    two2 = SimplicialSet.from_nondegenerate(cap, {"v1": 0, "v2": 0}, {})
    pres = FlowPresentation(
        cap, ("a", "b", "c"), {("a", "b"): two, ("b", "c"): two2}
    )
    flow, _ = saturate(pres)
    for n in range(cap + 1):
        assert len(flow.path("a", "c").level(n)) == 4


def test_relation_closure_under_degeneracies():
    # identifying two vertices must also identify their degeneracies
    cap = 2
    two = SimplicialSet.from_nondegenerate(cap, {"u1": 0, "u2": 0}, {})
    pres = FlowPresentation(
        cap,
        ("a", "b"),
        {("a", "b"): two},
        [(0, ((("a", "b"), "u1"),), ((("a", "b"), "u2"),))],
    )
    flow, _ = saturate(pres)
    for n in range(cap + 1):
        assert len(flow.path("a", "b").level(n)) == 1


def test_saturation_confluence_under_relation_order():
    cap = 2
    gens = {
        ("a", "b"): SimplicialSet.from_nondegenerate(cap, {"u1": 0, "u2": 0}, {}),
        ("b", "c"): vertex_gen(cap, "v"),
        ("a", "c"): SimplicialSet.from_nondegenerate(cap, {"w1": 0, "w2": 0}, {}),
    }
    rels = [
        (0, ((("a", "b"), "u1"), (("b", "c"), "v")), ((("a", "c"), "w1"),)),
        (0, ((("a", "b"), "u2"), (("b", "c"), "v")), ((("a", "c"), "w2"),)),
        (0, ((("a", "b"), "u1"),), ((("a", "b"), "u2"),)),
    ]
    reference = None
    rng = random.Random(8)
    for _ in range(6):
        shuffled = list(rels)
        rng.shuffle(shuffled)
        flipped = [
            (n, w2, w1) if rng.random() < 0.5 else (n, w1, w2)
            for (n, w1, w2) in shuffled
        ]
        flow, _ = saturate(FlowPresentation(cap, ("a", "b", "c"), gens, flipped))
        if reference is None:
            reference = flow
        else:
            assert flow == reference
    # u1 ~ u2 forces w1 ~ w2 through the concatenation congruence
    assert len(reference.path("a", "c").level(0)) == 1


def test_budget_exceeded_word_count():
    cap = 1
    two = SimplicialSet.from_nondegenerate(cap, {"u1": 0, "u2": 0}, {})
    two2 = SimplicialSet.from_nondegenerate(cap, {"v1": 0, "v2": 0}, {})
    pres = FlowPresentation(
        cap, ("a", "b", "c"), {("a", "b"): two, ("b", "c"): two2}
    )
    with pytest.raises(BudgetExceeded, match="more than 3 words"):
        saturate(pres, budget=3)


def test_budget_exceeded_chain_count():
    cap = 1
    pres = FlowPresentation(
        cap,
        ("a", "m1", "m2", "z"),
        {
            ("a", "m1"): vertex_gen(cap, "p"),
            ("a", "m2"): vertex_gen(cap, "q"),
            ("m1", "z"): vertex_gen(cap, "r"),
            ("m2", "z"): vertex_gen(cap, "s"),
        },
    )
    with pytest.raises(BudgetExceeded, match="state chains"):
        saturate(pres, budget=1)


def test_budget_env_variable(monkeypatch):
    monkeypatch.setenv("FLOWCALC_BUDGET", "2")
    cap = 1
    two = SimplicialSet.from_nondegenerate(cap, {"u1": 0, "u2": 0}, {})
    two2 = SimplicialSet.from_nondegenerate(cap, {"v1": 0, "v2": 0}, {})
    pres = FlowPresentation(
        cap, ("a", "b", "c"), {("a", "b"): two, ("b", "c"): two2}
    )
    with pytest.raises(BudgetExceeded):
        saturate(pres)
    monkeypatch.setenv("FLOWCALC_BUDGET", "1000")
    flow, _ = saturate(pres)
    assert len(flow.path("a", "c").level(0)) == 4


def test_resolve_word_folds_composition():
    x = FIG.path("0", "A").level(0)[0]
    y = FIG.path("A", "B").level(0)[0]
    z = FIG.path("B", "1").level(0)[0]
    pair, img = resolve_word(FIG, 0, [(("0", "A"), x), (("A", "B"), y), (("B", "1"), z)])
    assert pair == ("0", "1")
    assert img == FIG.path("0", "1").level(0)[0]


# ---------------------------------------------------------------------------
# pushouts, joins, cylinders


def chain_flow(names, cap=2):
    rels = [(names[i], names[i + 1]) for i in range(len(names) - 1)]
    return poset_flow(FinPoset(names, rels), cap)


def test_pushout_glues_along_shared_state():
    A = state_flow(("*",), 2)
    B = chain_flow("xy")
    C = chain_flow("pq")
    f = FlowMorphism(A, B, {"*": "y"}, {})
    g = FlowMorphism(A, C, {"*": "p"}, {})
    Q, inj_b, inj_c = pushout(f, g)
    assert len(Q.states) == 3
    inj_b.validate()
    inj_c.validate()
    assert inj_b.apply_state("y") == inj_c.apply_state("p")
    validate_flow(Q)
    # the glued flow is the 3-chain
    assert flow_isomorphism(Q, chain_flow("xyz")) is not None


def test_pushout_universal_property():
    A = state_flow(("*",), 2)
    B = chain_flow("xy")
    C = chain_flow("pq")
    f = FlowMorphism(A, B, {"*": "y"}, {})
    g = FlowMorphism(A, C, {"*": "p"}, {})
    Q, inj_b, inj_c = pushout(f, g)
    # every cocone over the span factors through exactly one mediator
    cocones = 0
    for Z in (Q, chain_flow("xyz"), chain_flow("xy"), chain_flow("wxyz")):
        for hb in enumerate_flow_morphisms(B, Z):
            for hc in enumerate_flow_morphisms(C, Z):
                if hb.compose(f) != hc.compose(g):
                    continue
                cocones += 1
                mediators = [
                    m
                    for m in enumerate_flow_morphisms(Q, Z)
                    if m.compose(inj_b) == hb and m.compose(inj_c) == hc
                ]
                assert len(mediators) == 1
    # one cocone into Q itself, one into the 3-chain, none into the
    # 2-chain, and four ways to land the seam inside the 4-chain
    assert cocones == 6


def test_pushout_rejects_mismatched_span():
    A = state_flow(("*",), 2)
    B = chain_flow("xy")
    f = FlowMorphism(A, B, {"*": "y"}, {})
    g = FlowMorphism(state_flow(("other",), 2), B, {"other": "x"}, {})
    with pytest.raises(MalformedFlow):
        pushout(f, g)


def test_join_two_segments():
    D = glob(SimplicialSet.point(2, "u"), "0", "1")
    D2 = glob(SimplicialSet.point(2, "v"), "0", "1")
    J, inj1, inj2 = join(D, D2)
    assert len(J.states) == 3
    inj1.validate()
    inj2.validate()
    assert is_full_directed_ball(J).is_ball
    assert flow_isomorphism(J, chain_flow("abc")) is not None


def test_join_needs_unique_seam():
    two_final = state_flow(("p", "q"), 2)
    seg = chain_flow("xy")
    with pytest.raises(NotJoinable):
        join(two_final, seg)
    with pytest.raises(NotJoinable):
        join(seg, two_final)


def test_assemble_colimit_rejects_loops():
    seg = glob(SimplicialSet.point(2, "u"))
    with pytest.raises(NotLoopless):
        assemble_colimit(2, {"t": seg}, merges=[(("t", "0"), ("t", "1"))])


def test_mapping_cylinder_of_path_inclusion():
    A = glob(SimplicialSet.point(3, "u"), "0", "1")
    pt = A.path("0", "1")
    target = FIG.path("0", "1")
    i = FlowMorphism(
        A,
        FIG,
        {"0": "0", "1": "1"},
        {
            ("0", "1"): SimplicialMap(
                pt,
                target,
                [{x: target.level(n)[0] for x in pt.level(n)} for n in range(4)],
            )
        },
    )
    i.validate()
    Mi, end_1, inj_x = mapping_cylinder(i)
    assert set(Mi.states) == set(FIG.states)
    end_1.validate()
    inj_x.validate()
    validate_flow(Mi)
    # the cylinder thickens the target path space into a segment
    space = Mi.path("0", "1")
    assert [len(space.nondegenerate(n)) for n in range(4)] == [2, 1, 0, 0]
    # other path spaces are untouched up to size
    for pair in (("0", "A"), ("A", "B"), ("C", "1")):
        assert [len(Mi.path(*pair).level(n)) for n in range(4)] == [
            len(FIG.path(*pair).level(n)) for n in range(4)
        ]
    assert is_full_directed_ball(Mi).is_ball


def test_mapping_cylinder_needs_loopless():
    from flowcalc.flows import terminal_morphism

    with pytest.raises(NotLoopless):
        mapping_cylinder(terminal_morphism(FIG))


# ---------------------------------------------------------------------------
# sequential vs accumulated colimits


def _inclusion_chain():
    stages = [["0", "A"], ["0", "A", "B"], ["0", "A", "B", "1"], list(FIG.states)]
    morphs = []
    prev, _ = restriction(FIG, stages[0])
    for keep in stages[1:]:
        nxt, _ = restriction(FIG, keep)
        incl = FlowMorphism(
            prev,
            nxt,
            {s: s for s in prev.states},
            {
                p: SimplicialMap(
                    prev.path(*p),
                    nxt.path(*p),
                    [
                        {x: x for x in prev.path(*p).level(n)}
                        for n in range(prev.cap + 1)
                    ],
                )
                for p in prev.nonempty_pairs
            },
        )
        morphs.append(incl)
        prev = nxt
    return morphs


def test_sequential_colimit_returns_last_stage():
    morphs = _inclusion_chain()
    last, injections = sequential_colimit(morphs)
    assert last == FIG
    assert len(injections) == len(morphs) + 1
    for inj in injections:
        inj.validate()
    assert injections[0].apply_state("0") == "0"
    assert injections[-1] == FlowMorphism.identity(FIG)


def test_accumulated_colimit_matches_sequential():
    morphs = _inclusion_chain()
    seq, seq_inj = sequential_colimit(morphs)
    acc, acc_inj = accumulated_colimit(morphs)
    assert set(acc.states) == set(seq.states)
    for (a, b) in seq.nonempty_pairs:
        for n in range(seq.cap + 1):
            assert len(acc.path(a, b).level(n)) == len(seq.path(a, b).level(n))
    iso = flow_isomorphism(seq, acc)
    assert iso is not None
    for k in range(len(morphs) + 1):
        src = seq_inj[k].source
        assert acc_inj[k].source == src
        for s in src.states:
            assert acc_inj[k].apply_state(s) == seq_inj[k].apply_state(s)
        acc_inj[k].validate()


def test_sequential_colimit_rejects_non_inclusions():
    seg = chain_flow("xy")
    collapse = FlowMorphism(
        state_flow(("p", "q"), 2), state_flow(("r",), 2), {"p": "r", "q": "r"}, {}
    )
    with pytest.raises(NotAnInclusion):
        sequential_colimit([collapse])
    with pytest.raises(MalformedFlow):
        sequential_colimit([])


def test_sequential_colimit_rejects_broken_chain():
    morphs = _inclusion_chain()
    with pytest.raises(MalformedFlow):
        sequential_colimit([morphs[0], morphs[2]])


# ---------------------------------------------------------------------------
# interval joins, latching, the probe


def test_interval_join_full_chain():
    J, resolver = interval_join(FIG, ("0", "1"))
    assert J == FIG  # the two-point chain is just the restriction
    J2, _ = interval_join(FIG, ("0", "B", "1"))
    assert set(J2.states) == {"0", "A", "B", "1"}
    assert len(J2.nonempty_pairs) == 6
    assert is_full_directed_ball(J2).is_ball
    validate_flow(J2)


def test_interval_join_needs_chain():
    with pytest.raises(MalformedFlow):
        interval_join(FIG, ("0",))


def test_latching_object_fig():
    diag = ball_diagram(FIG)
    L, injections = latching_object(diag)
    assert len(L.states) == 7
    assert L.is_loopless()
    validate_flow(L)
    assert set(injections) == set(diag.category.objects) - {("0", "1")}
    for m in injections.values():
        m.validate()


def test_latching_object_of_glob_is_empty():
    G = glob(SimplicialSet.point(3, "u"))
    L, injections = latching_object(ball_diagram(G))
    assert L.states == ()
    assert injections == {}


def test_lemma_probe_fig():
    rep = lemma_probe(FIG_POSET, 3)
    assert rep.consistent()
    assert rep.flow_states == 5
    assert rep.latching_states == 7
    assert not rep.latching_isomorphic
    assert rep.index_components == 2
    assert len(rep.join_probes) == 5
    for probe in rep.join_probes:
        assert probe.isomorphic == probe.all_comparable
    d = rep.to_dict()
    assert d["consistent"] is True


# ---------------------------------------------------------------------------
# tensors


def test_tensor_unit_and_empty():
    pt = SimplicialSet.point(3)
    T = tensor(pt, FIG)
    assert flow_isomorphism(T, FIG) is not None
    E = tensor(SimplicialSet.empty(3), FIG)
    assert E == Flow(3, FIG.states, {}, {})


def test_tensor_rejects_bad_operands():
    from flowcalc.flows import terminal_flow

    with pytest.raises(CapMismatch):
        tensor(SimplicialSet.point(2), FIG)
    with pytest.raises(NotLoopless):
        tensor(SimplicialSet.point(3), terminal_flow(3))


def test_tensor_of_glob_is_free():
    w = glob_tensor_witness(SEG_SPACE, SimplicialSet.circle(3))
    assert w is not None
    assert w.is_isomorphism()


def test_tensor_triple_associativity_witness():
    X = chain_flow("abc", cap=3)
    w = tensor_triple_witness(SEG_SPACE, SimplicialSet.circle(3), X)
    assert w is not None
    left = tensor(product(SEG_SPACE, SimplicialSet.circle(3)), X)
    assert w.source == left


def test_tensor_matches_brute_force_iso_on_small_case():
    U = SimplicialSet.from_nondegenerate(3, {"v": 0, "e": 1}, {"e": ("v", "v")})
    X = chain_flow("abc", cap=3)
    left = tensor(product(U, U), X)
    inner = tensor(U, X)
    right = tensor(U, inner)
    assert flow_isomorphism(left, right) is not None
