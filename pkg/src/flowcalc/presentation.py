"""Flows by generators and relations: word saturation and colimits.

A word is a nonempty tuple of letters; a letter is (pair, x) where pair
is an ordered state pair and x a simplex of that pair's generator space.
Consecutive letters must chain (target state of one = source of the
next), the state sequence is strictly increasing in the generator order,
and all letters of a word live at the same level.  Faces and
degeneracies act letterwise, composition is concatenation; the
saturation quotient is the congruence generated by the presentation's
relations, letterwise face/degeneracy closure, and two-sided
concatenation stability.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    CapMismatch,
    MalformedFlow,
    NotAnInclusion,
    NotJoinable,
    NotLoopless,
    UnknownState,
)
from .flows import (
    Flow,
    FlowMorphism,
    flow_isomorphism,
    rename_flow_states,
    restriction,
    state_flow,
)
from .simplicial import SimplicialMap, SimplicialSet, disjoint_union, product

DEFAULT_BUDGET = 10 ** 6


def _budget_value(budget):
    if budget is not None:
        return int(budget)
    env = os.environ.get("FLOWCALC_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def word_source(word):
    return word[0][0][0]


def word_target(word):
    return word[-1][0][1]


class FlowPresentation:
    """Generators-and-relations description of a loopless flow.

    generators: dict (a, b) -> SimplicialSet of generating path simplices;
    relations: iterable of (level, word, word).
    """

    def __init__(self, cap, states, generators, relations=(), trusted_spaces=False):
        self.cap = cap
        self.states = tuple(states)
        self.generators = {
            pair: space for pair, space in generators.items() if not space.is_empty
        }
        self.relations = tuple((n, tuple(w1), tuple(w2)) for (n, w1, w2) in relations)
        # Set by internal constructions whose generator spaces satisfy the
        # simplicial identities by construction (e.g. products of spaces
        # that were already validated); validate() then skips re-deriving
        # them table by table.
        self.trusted_spaces = bool(trusted_spaces)

    def _check_word(self, n, word):
        if not word:
            raise MalformedFlow("empty relation word")
        for k, letter in enumerate(word):
            pair, x = letter
            space = self.generators.get(pair)
            if space is None:
                raise MalformedFlow(f"relation letter on unknown generator pair {pair!r}")
            if not space.has_simplex(n, x):
                raise MalformedFlow(f"relation letter {x!r} missing at level {n} of {pair!r}")
            if k and word[k - 1][0][1] != pair[0]:
                raise MalformedFlow(f"letters not chained at position {k} of {word!r}")

    def validate(self):
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise MalformedFlow("duplicate state ids")
        for (a, b), space in self.generators.items():
            if a not in state_set or b not in state_set:
                raise UnknownState(f"generator pair ({a!r}, {b!r})")
            if a == b:
                raise NotLoopless(f"generator pair from {a!r} to itself")
            if space.cap != self.cap:
                raise CapMismatch(f"generator pair ({a!r}, {b!r}) has cap {space.cap}")
            if not self.trusted_spaces:
                space.validate()
        # the generator edge relation must be acyclic (words stay finite)
        out_edges = {}
        for (a, b) in self.generators:
            out_edges.setdefault(a, []).append(b)
        state, DONE, ACTIVE = {}, 1, 2
        for start in self.states:
            if state.get(start):
                continue
            stack = [(start, iter(out_edges.get(start, ())))]
            state[start] = ACTIVE
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    mark = state.get(nxt)
                    if mark == ACTIVE:
                        raise NotLoopless(f"generator edges form a cycle through {nxt!r}")
                    if mark is None:
                        state[nxt] = ACTIVE
                        stack.append((nxt, iter(out_edges.get(nxt, ()))))
                        advanced = True
                        break
                if not advanced:
                    state[node] = DONE
                    stack.pop()
        for (n, w1, w2) in self.relations:
            if not 0 <= n <= self.cap:
                raise MalformedFlow(f"relation level {n} outside 0..{self.cap}")
            self._check_word(n, w1)
            self._check_word(n, w2)
            if word_source(w1) != word_source(w2) or word_target(w1) != word_target(w2):
                raise MalformedFlow(f"relation endpoints differ: {w1!r} vs {w2!r}")
        return True


def saturate(pres, budget=None):
    """Close the presentation under composition and the congruence.

    Returns (flow, embeddings) where embeddings maps each generator pair
    to the SimplicialMap sending a generator simplex to its class.
    """
    pres.validate()
    budget = _budget_value(budget)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    cap = pres.cap
    gens = pres.generators

    out_edges = {}
    for (a, b) in gens:
        out_edges.setdefault(a, []).append(b)
    for a in out_edges:
        out_edges[a].sort(key=repr)

    # every directed path through the generator DAG, grouped by endpoints
    chain_lists = {}

    def walk(chain):
        for nxt in out_edges.get(chain[-1], ()):
            grown = chain + (nxt,)
            chain_lists.setdefault((chain[0], nxt), []).append(grown)
            if len(chain_lists[(chain[0], nxt)]) > budget:
                raise BudgetExceeded(
                    f"pair ({chain[0]!r}, {nxt!r}): more than {budget} state chains"
                )
            walk(grown)

    for a in pres.states:
        if a in out_edges:
            walk((a,))

    # Letters (pair, simplex) are interned to integers with face and
    # degeneracy tables computed once each, so the word machinery below
    # hashes flat int tuples instead of nested simplex ids.
    letter_id = {}
    letter_pair = []
    letter_simplex = []
    letter_faces = []
    letter_degens = []
    for pair, sp in gens.items():
        for n in range(cap + 1):
            for x in sp.level(n):
                letter_id[(n, pair, x)] = len(letter_pair)
                letter_pair.append(pair)
                letter_simplex.append(x)
                letter_faces.append(None)
                letter_degens.append(None)
    for (n, pair, x), li in letter_id.items():
        sp = gens[pair]
        if n >= 1:
            letter_faces[li] = tuple(
                letter_id[(n - 1, pair, sp.face(n, x, i))] for i in range(n + 1)
            )
        if n < cap:
            letter_degens[li] = tuple(
                letter_id[(n + 1, pair, sp.degeneracy(n, x, i))] for i in range(n + 1)
            )

    word_ints = []
    word_id = {}
    universe = {}
    for pair in chain_lists:
        for n in range(cap + 1):
            ids = []
            for chain in chain_lists[pair]:
                seg_letters = [
                    [
                        letter_id[(n, (chain[i], chain[i + 1]), x)]
                        for x in gens[(chain[i], chain[i + 1])].level(n)
                    ]
                    for i in range(len(chain) - 1)
                ]
                for wi in itertools.product(*seg_letters):
                    if len(ids) >= budget:
                        raise BudgetExceeded(
                            f"pair ({pair[0]!r}, {pair[1]!r}) at level {n}: "
                            f"more than {budget} words"
                        )
                    wid = len(word_ints)
                    word_ints.append(wi)
                    word_id[wi] = wid
                    ids.append(wid)
            if ids:
                universe[(pair, n)] = ids
    total = len(word_ints)

    # simplex ids of the saturated flow are representative words in the
    # nested ((pair, x), ...) form; only representatives get built
    nested_cache = {}

    def nested_word(wid):
        w = nested_cache.get(wid)
        if w is None:
            w = tuple((letter_pair[li], letter_simplex[li]) for li in word_ints[wid])
            nested_cache[wid] = w
        return w

    face_ids = [None] * total
    degen_ids = [None] * total
    for (pair, n), ids in universe.items():
        for wid in ids:
            wi = word_ints[wid]
            if n >= 1:
                face_ids[wid] = tuple(
                    word_id[c] for c in zip(*(letter_faces[li] for li in wi))
                )
            if n < cap:
                degen_ids[wid] = tuple(
                    word_id[c] for c in zip(*(letter_degens[li] for li in wi))
                )

    concat_triples = []
    keys = list(universe)
    by_source = {}
    for key in keys:
        by_source.setdefault((key[0][0], key[1]), []).append(key)
    for ((a, b), n) in keys:
        for key2 in by_source.get((b, n), ()):
            ids1 = universe[((a, b), n)]
            ids2 = universe[key2]
            for i1 in ids1:
                w1 = word_ints[i1]
                for i2 in ids2:
                    concat_triples.append((i1, i2, word_id[w1 + word_ints[i2]]))

    from .unionfind import IntUnionFind

    def wid_of(n, w):
        return word_id[tuple(letter_id[(n, seg, x)] for (seg, x) in w)]

    uf = IntUnionFind(total)
    for (n, w1, w2) in pres.relations:
        uf.union(wid_of(n, w1), wid_of(n, w2))

    if pres.relations:
        changed = True
        while changed:
            changed = False
            for (pair, n), ids in universe.items():
                for slot in range(n + 1):
                    if n >= 1:
                        bucket = {}
                        for wid in ids:
                            root = uf.find(wid)
                            img = face_ids[wid][slot]
                            prev = bucket.get(root)
                            if prev is None:
                                bucket[root] = img
                            elif uf.union(prev, img):
                                changed = True
                    if n < cap:
                        bucket = {}
                        for wid in ids:
                            root = uf.find(wid)
                            img = degen_ids[wid][slot]
                            prev = bucket.get(root)
                            if prev is None:
                                bucket[root] = img
                            elif uf.union(prev, img):
                                changed = True
            bucket = {}
            for (i1, i2, ic) in concat_triples:
                sig = (uf.find(i1), uf.find(i2))
                prev = bucket.get(sig)
                if prev is None:
                    bucket[sig] = ic
                elif uf.union(prev, ic):
                    changed = True

    rep_of = {}
    for wid in range(total):
        root = uf.find(wid)
        if root not in rep_of:
            rep_of[root] = wid

    def rep_word(wid):
        return nested_word(rep_of[uf.find(wid)])

    per_pair = {}
    for (pair, n), ids in universe.items():
        seen = set()
        reps = []
        for wid in ids:
            r = rep_of[uf.find(wid)]
            if r not in seen:
                seen.add(r)
                reps.append(r)
        per_pair.setdefault(pair, {})[n] = reps

    paths = {}
    for pair, by_level in per_pair.items():
        cells = [[] for _ in range(cap + 1)]
        faces = [dict() for _ in range(cap + 1)]
        degens = [dict() for _ in range(cap + 1)]
        for n in range(cap + 1):
            for r in by_level.get(n, ()):
                w = nested_word(r)
                cells[n].append(w)
                if n >= 1:
                    faces[n][w] = tuple(rep_word(face_ids[r][i]) for i in range(n + 1))
                if n < cap:
                    degens[n][w] = tuple(rep_word(degen_ids[r][i]) for i in range(n + 1))
        paths[pair] = SimplicialSet(cap, cells, faces, degens)

    compose = {}
    for (a, b) in per_pair:
        for (b2, c) in per_pair:
            if b2 != b:
                continue
            levels = []
            for n in range(cap + 1):
                table = {}
                for r1 in per_pair[(a, b)].get(n, ()):
                    for r2 in per_pair[(b, c)].get(n, ()):
                        table[(nested_word(r1), nested_word(r2))] = rep_word(
                            word_id[word_ints[r1] + word_ints[r2]]
                        )
                levels.append(table)
            compose[(a, b, c)] = tuple(levels)

    flow = Flow(cap, pres.states, paths, compose)
    embeddings = {}
    for pair, space in gens.items():
        maps = []
        for n in range(cap + 1):
            maps.append(
                {x: rep_word(word_id[(letter_id[(n, pair, x)],)]) for x in space.level(n)}
            )
        embeddings[pair] = SimplicialMap(space, flow.path(*pair), maps)
    return flow, embeddings


def resolve_word(flow, n, pieces):
    """Fold a chain of (state_pair, simplex) pieces through the flow's
    composition, left to right, at level n."""
    acc_pair, acc = pieces[0]
    for (pair, y) in pieces[1:]:
        acc = flow.compose_simplices(acc_pair[0], acc_pair[1], pair[1], n, acc, y)
        acc_pair = (acc_pair[0], pair[1])
    return acc_pair, acc


# ---------------------------------------------------------------------------
# the tagged-pieces colimit assembler


def _class_names(classes):
    """Name each state class: the shared underlying state name when the
    class is unambiguous about it, else a disambiguated tuple."""
    candidates = {}
    for root, members in classes.items():
        bases = {s for (_, s) in members}
        candidates[root] = next(iter(bases)) if len(bases) == 1 else tuple(members)
    counts = Counter(candidates.values())
    taken = {}
    names = {}
    for root in sorted(candidates, key=lambda r: repr(classes[r])):
        cand = candidates[root]
        if counts[cand] == 1:
            names[root] = cand
        else:
            k = taken.get(cand, 0)
            taken[cand] = k + 1
            names[root] = (cand, k)
    return names


def assemble_colimit(cap, contributions, merges=(), crosses=(), budget=None):
    """Glue tagged flows into one: union states (modulo merges), take all
    path simplices as generators, collapse internal composites, and
    identify the crosses.

    contributions: dict tag -> Flow (every path simplex becomes a letter
    tagged (tag, a, b)); merges: pairs ((tag, state), (tag2, state2));
    crosses: (level, (tag, a, b, x), (tag2, a2, b2, x2)) single-letter
    identifications.  Returns (flow, injections: tag -> FlowMorphism).
    """
    from .unionfind import UnionFind

    caps = {F.cap for F in contributions.values()}
    if caps and caps != {cap}:
        raise CapMismatch(f"contributions have caps {sorted(caps)}, expected {cap}")
    uf = UnionFind()
    order = []
    for tag, F in contributions.items():
        for s in F.states:
            uf.add((tag, s))
            order.append((tag, s))
    for p, q in merges:
        uf.union(p, q)
    classes = {}
    for key in order:
        classes.setdefault(uf.find(key), []).append(key)
    for members in classes.values():
        members.sort(key=repr)
    names = _class_names(classes)

    def cls(tag, s):
        return names[uf.find((tag, s))]

    states = []
    seen = set()
    for key in order:
        name = names[uf.find(key)]
        if name not in seen:
            seen.add(name)
            states.append(name)

    pieces = {}
    for tag, F in contributions.items():
        for (a, b) in F.nonempty_pairs:
            p, q = cls(tag, a), cls(tag, b)
            if p == q:
                raise NotLoopless(f"gluing creates a loop at state {p!r}")
            pieces.setdefault((p, q), []).append(((tag, a, b), F.path(a, b)))
    generators = {
        pq: disjoint_union([sp for _, sp in plist], tags=[t for t, _ in plist])
        for pq, plist in pieces.items()
    }

    relations = []
    for tag, F in contributions.items():
        for (a, b, c) in F.composable_triples():
            p, q, r = cls(tag, a), cls(tag, b), cls(tag, c)
            for n in range(cap + 1):
                for x in F.path(a, b).level(n):
                    for y in F.path(b, c).level(n):
                        z = F.compose_simplices(a, b, c, n, x, y)
                        two = (
                            ((p, q), ((tag, a, b), x)),
                            ((q, r), ((tag, b, c), y)),
                        )
                        one = (((p, r), ((tag, a, c), z)),)
                        relations.append((n, two, one))
    for (n, (tag, a, b, x), (tag2, a2, b2, x2)) in crosses:
        w1 = (((cls(tag, a), cls(tag, b)), ((tag, a, b), x)),)
        w2 = (((cls(tag2, a2), cls(tag2, b2)), ((tag2, a2, b2), x2)),)
        relations.append((n, w1, w2))

    pres = FlowPresentation(cap, states, generators, relations)
    flow, embeddings = saturate(pres, budget=budget)

    injections = {}
    for tag, F in contributions.items():
        smap = {s: cls(tag, s) for s in F.states}
        pmaps = {}
        for (a, b) in F.nonempty_pairs:
            pq = (cls(tag, a), cls(tag, b))
            emb = embeddings[pq]
            space = F.path(a, b)
            pmaps[(a, b)] = SimplicialMap(
                space,
                flow.path(*pq),
                [
                    {x: emb.apply(n, ((tag, a, b), x)) for x in space.level(n)}
                    for n in range(cap + 1)
                ],
            )
        injections[tag] = FlowMorphism(F, flow, smap, pmaps)
    return flow, injections


# ---------------------------------------------------------------------------
# pushouts and friends


def pushout(f, g, budget=None):
    """Pushout of the span f: A -> B, g: A -> C.

    Returns (flow, injection from B, injection from C)."""
    A = f.source
    if g.source != A:
        raise MalformedFlow("span legs have different sources")
    B, C = f.target, g.target
    for F in (A, B, C):
        if not F.is_loopless():
            raise NotLoopless("pushout inputs must be loopless")
    cap = A.cap
    merges = [
        (("left", f.apply_state(s)), ("right", g.apply_state(s))) for s in A.states
    ]
    crosses = []
    for (a, b) in A.nonempty_pairs:
        fa, fb = f.apply_state(a), f.apply_state(b)
        ga, gb = g.apply_state(a), g.apply_state(b)
        for n in range(cap + 1):
            for x in A.path(a, b).level(n):
                crosses.append(
                    (
                        n,
                        ("left", fa, fb, f.apply(a, b, n, x)),
                        ("right", ga, gb, g.apply(a, b, n, x)),
                    )
                )
    P, inj = assemble_colimit(
        cap, {"left": B, "right": C}, merges, crosses, budget=budget
    )
    return P, inj["left"], inj["right"]


def join(D, D2, budget=None):
    """Glue the unique final state of D to the unique initial state of
    D2; cross paths are composites through the seam.

    Returns (flow, injection from D, injection from D2)."""
    finals = D.final_states()
    initials = D2.initial_states()
    if len(finals) != 1:
        raise NotJoinable(f"left operand has final states {finals!r}")
    if len(initials) != 1:
        raise NotJoinable(f"right operand has initial states {initials!r}")
    if D.cap != D2.cap:
        raise CapMismatch("join of different caps")
    glue = state_flow(("*",), D.cap)
    f = FlowMorphism(glue, D, {"*": finals[0]}, {})
    g = FlowMorphism(glue, D2, {"*": initials[0]}, {})
    return pushout(f, g, budget=budget)


def _retarget(morphism, renamed_flow, rename):
    state_map = {s: rename[morphism.state_map[s]] for s in morphism.state_map}
    pmaps = {}
    for (a, b), m in morphism.path_maps.items():
        ta, tb = state_map[a], state_map[b]
        levels = [m.level_map(n) for n in range(m.source.cap + 1)]
        pmaps[(a, b)] = SimplicialMap(m.source, renamed_flow.path(ta, tb), levels)
    return FlowMorphism(morphism.source, renamed_flow, state_map, pmaps)


def tensor(U, X, budget=None):
    """The flow with X's states whose paths carry a label simplex from U;
    same-label composites collapse."""
    flow, _ = tensor_with_embeddings(U, X, budget=budget)
    return flow


def tensor_with_embeddings(U, X, budget=None):
    """tensor(U, X) together with, per nonempty pair of X, the
    SimplicialMap sending a labelled generator simplex to its class."""
    if U.cap != X.cap:
        raise CapMismatch("tensor operands have different caps")
    if not X.is_loopless():
        raise NotLoopless("tensor needs a loopless flow")
    cap = X.cap
    # Validating the factors once makes every product below trustworthy,
    # which is much cheaper than re-checking each product table.
    U.validate()
    for pair in X.nonempty_pairs:
        X.path(*pair).validate()
    generators = {pair: product(U, X.path(*pair)) for pair in X.nonempty_pairs}
    relations = []
    for (a, b, c) in X.composable_triples():
        for n in range(cap + 1):
            for u in U.level(n):
                for x in X.path(a, b).level(n):
                    for y in X.path(b, c).level(n):
                        z = X.compose_simplices(a, b, c, n, x, y)
                        two = (((a, b), (u, x)), ((b, c), (u, y)))
                        one = (((a, c), (u, z)),)
                        relations.append((n, two, one))
    pres = FlowPresentation(cap, X.states, generators, relations, trusted_spaces=True)
    return saturate(pres, budget=budget)


def glob_tensor_witness(U, Z, budget=None):
    """The canonical comparison U ⊠ glob(Z) -> glob(U × Z), validated.

    Both sides are free on U × Z (a glob has nothing to compose), so the
    witness sends each single-letter class back to its generator pair.
    Returns the FlowMorphism if it is an isomorphism, else None.
    """
    from .flows import glob

    left, emb = tensor_with_embeddings(U, glob(Z, "0", "1"), budget=budget)
    target = glob(product(U, Z), "0", "1")
    state_map = {"0": "0", "1": "1"}
    path_maps = {}
    for pair in left.nonempty_pairs:
        if pair != ("0", "1"):
            return None
        space = left.path(*pair)
        gen = emb[pair]
        inverse = [
            {gen.apply(n, g): g for g in gen.source.level(n)}
            for n in range(left.cap + 1)
        ]
        maps = []
        for n in range(left.cap + 1):
            level = {}
            for w in space.level(n):
                if w not in inverse[n]:
                    return None
                level[w] = inverse[n][w]
            maps.append(level)
        path_maps[pair] = SimplicialMap(space, target.path("0", "1"), maps)
    cand = FlowMorphism(left, target, state_map, path_maps)
    try:
        cand.validate()
    except (MalformedFlow, ValueError, KeyError):
        return None
    return cand if cand.is_isomorphism() else None


def tensor_triple_witness(U, V, X, budget=None, inner=None):
    """The canonical comparison (U × V) ⊠ X -> U ⊠ (V ⊠ X), validated.

    Each letter ((u, v), x) is rewritten to the letter (u, [v, x]-class)
    and the word is resolved in the right-hand flow; the result is an
    explicit morphism checked to be an isomorphism (None if any step
    fails).  This sidesteps blind search on path spaces with thousands
    of simplices.

    Callers sweeping many U against one (V, X) can pass the pair
    returned by tensor_with_embeddings(V, X) as `inner` to avoid
    rebuilding it."""
    left = tensor(product(U, V), X, budget=budget)
    if inner is None:
        inner = tensor_with_embeddings(V, X, budget=budget)
    inner, emb_inner = inner
    right, emb_right = tensor_with_embeddings(U, inner, budget=budget)
    if set(left.nonempty_pairs) != set(right.nonempty_pairs):
        return None
    state_map = {s: s for s in X.states}
    path_maps = {}
    for pair in left.nonempty_pairs:
        space = left.path(*pair)
        target = right.path(*pair)
        maps = []
        for n in range(left.cap + 1):
            level = {}
            for w in space.level(n):
                pieces = []
                for (seg, (uv, x)) in w:
                    u, v = uv
                    inner_class = emb_inner[seg].apply(n, (v, x))
                    pieces.append((seg, emb_right[seg].apply(n, (u, inner_class))))
                _, img = resolve_word(right, n, pieces)
                level[w] = img
            maps.append(level)
        path_maps[pair] = SimplicialMap(space, target, maps)
    cand = FlowMorphism(left, right, state_map, path_maps)
    try:
        cand.validate()
    except (MalformedFlow, ValueError, KeyError):
        return None
    return cand if cand.is_isomorphism() else None


def mapping_cylinder(i, budget=None):
    """Pushout of (interval ⊠ A <- A -> X) along the 0-end inclusion.

    Returns (Mi, end_inclusion: A -> Mi at the 1-end, injection: X -> Mi);
    Mi keeps X's state names."""
    A, X = i.source, i.target
    if not A.is_loopless() or not X.is_loopless():
        raise NotLoopless("mapping cylinder needs loopless flows")
    cap = A.cap
    interval = SimplicialSet.standard(1, cap)
    cyl, emb = tensor_with_embeddings(interval, A, budget=budget)

    def end_map(vertex):
        pmaps = {}
        for (a, b) in A.nonempty_pairs:
            space = A.path(a, b)
            pmaps[(a, b)] = SimplicialMap(
                space,
                cyl.path(a, b),
                [
                    {
                        x: emb[(a, b)].apply(n, ((vertex,) * (n + 1), x))
                        for x in space.level(n)
                    }
                    for n in range(cap + 1)
                ],
            )
        return FlowMorphism(A, cyl, {s: s for s in A.states}, pmaps)

    j0, j1 = end_map(0), end_map(1)
    raw, inj_cyl, inj_x = pushout(j0, i, budget=budget)
    # each state class holds exactly one X-state; rename to it
    rename = {}
    for t in X.states:
        rename[inj_x.apply_state(t)] = t
    if len(rename) != len(raw.states):
        raise MalformedFlow("cylinder states do not biject with the target's")
    Mi = rename_flow_states(raw, rename)
    inj_x2 = _retarget(inj_x, Mi, rename)
    inj_cyl2 = _retarget(inj_cyl, Mi, rename)
    end_1 = inj_cyl2.compose(j1)
    return Mi, end_1, inj_x2


def sequential_colimit(morphs):
    """Colimit of a finite chain of inclusions Z_0 -> ... -> Z_k: the
    final flow, with the composite injections.

    Returns (flow, injections) with injections[i]: Z_i -> flow."""
    morphs = list(morphs)
    if not morphs:
        raise MalformedFlow("empty chain")
    for k, m in enumerate(morphs):
        if k and m.source != morphs[k - 1].target:
            raise MalformedFlow(f"chain broken between stages {k - 1} and {k}")
        if len(set(m.state_map.values())) != len(m.source.states):
            raise NotAnInclusion(f"stage {k} is not injective on states")
        for (a, b) in m.source.nonempty_pairs:
            pm = m.path_maps[(a, b)]
            for n in range(m.source.cap + 1):
                lm = pm.level_map(n)
                if len(set(lm.values())) != len(lm):
                    raise NotAnInclusion(
                        f"stage {k} is not injective on level {n} of ({a!r}, {b!r})"
                    )
        m.validate()
    last = morphs[-1].target
    injections = []
    for k in range(len(morphs)):
        acc = morphs[k]
        for m in morphs[k + 1 :]:
            acc = m.compose(acc)
        injections.append(acc)
    injections.append(FlowMorphism.identity(last))
    return last, tuple(injections)


def accumulated_colimit(morphs, budget=None):
    """The same colimit computed the hard way: every stage contributes
    its presentation, stage maps become identifications, and the whole
    thing is saturated.  Exists to cross-check sequential_colimit."""
    morphs = list(morphs)
    if not morphs:
        raise MalformedFlow("empty chain")
    cap = morphs[0].source.cap
    objects = {0: morphs[0].source}
    for k, m in enumerate(morphs):
        objects[k + 1] = m.target
    merges = []
    crosses = []
    for k, m in enumerate(morphs):
        for s in m.source.states:
            merges.append(((k, s), (k + 1, m.apply_state(s))))
        for (a, b) in m.source.nonempty_pairs:
            fa, fb = m.apply_state(a), m.apply_state(b)
            for n in range(cap + 1):
                for x in m.source.path(a, b).level(n):
                    crosses.append(
                        ((n, (k, a, b, x), (k + 1, fa, fb, m.apply(a, b, n, x))))
                    )
    flow, inj = assemble_colimit(cap, objects, merges, crosses, budget=budget)
    return flow, inj


# ---------------------------------------------------------------------------
# ball diagrams: interval joins along a chain, deletion arrows, latching


def interval_join(D, chain, budget=None):
    """The iterated join of D's restrictions to consecutive intervals of
    the chain, assembled in one pass.  States keep D's names.

    Returns (flow, resolver) where resolver(level, pieces) folds letters
    ((segment, a, b), x) to a simplex of the result."""
    chain = tuple(chain)
    if len(chain) < 2:
        raise MalformedFlow("interval join needs a chain of length >= 2")
    P = D.state_poset()
    if len(chain) == 2:
        sub, _ = restriction(D, P.interval(chain[0], chain[1]))

        def direct_resolver(n, pieces):
            return resolve_word(sub, n, [((a, b), x) for ((_, a, b), x) in pieces])

        return sub, direct_resolver
    contributions = {}
    merges = []
    for j in range(len(chain) - 1):
        sub, _ = restriction(D, P.interval(chain[j], chain[j + 1]))
        contributions[j] = sub
        if j:
            merges.append(((j - 1, chain[j]), (j, chain[j])))
    flow, inj = assemble_colimit(D.cap, contributions, merges, budget=budget)

    def resolver(n, pieces):
        folded = []
        for ((j, a, b), x) in pieces:
            folded.append(((a, b), inj[j].apply(a, b, n, x)))
        return resolve_word(flow, n, folded)

    return flow, resolver


def deletion_arrow(src_flow, dst_resolver, dst_flow, segment_map):
    """The morphism between two interval joins induced by deleting one
    interior chain element: states include, letters reinterpret into the
    coarser segmentation, composites resolve in the target."""
    state_map = {s: s for s in src_flow.states}
    pmaps = {}
    for (p, q) in src_flow.nonempty_pairs:
        space = src_flow.path(p, q)
        maps = []
        for n in range(src_flow.cap + 1):
            table = {}
            for w in space.level(n):
                pieces = [
                    ((segment_map[j], a, b), x) for (_, ((j, a, b), x)) in w
                ]
                _, img = dst_resolver(n, pieces)
                table[w] = img
            maps.append(table)
        pmaps[(p, q)] = SimplicialMap(space, dst_flow.path(p, q), maps)
    return FlowMorphism(src_flow, dst_flow, state_map, pmaps)


def build_ball_diagram(D, budget=None):
    """Objects: interval joins along every bottom-to-top chain; arrows:
    interior-deletion morphisms.  Used by flows.ball_diagram."""
    from .flows import BallDiagram, require_ball
    from .poset import chain_category

    require_ball(D)
    P = D.state_poset()
    cat = chain_category(P)
    objects = {}
    resolvers = {}
    for chain in cat.objects:
        flow, resolver = interval_join(D, chain, budget=budget)
        objects[chain] = flow
        resolvers[chain] = resolver
    arrows = {}
    for (src, i, dst) in cat.generators:
        segment_map = {}
        for j in range(len(src) - 1):
            segment_map[j] = j if j < i - 1 else (j - 1 if j >= i else i - 1)
        arrows[(src, i)] = deletion_arrow(
            objects[src], resolvers[dst], objects[dst], segment_map
        )
    diagram = BallDiagram(flow=D, category=cat, objects=objects, arrows=arrows)
    diagram.check_functoriality()
    return diagram


def latching_object(diagram, budget=None):
    """Colimit of the diagram with its terminal object removed.

    Returns (flow, injections: chain -> FlowMorphism); the empty
    punctured index yields the empty flow."""
    cat = diagram.category
    objs = {c: diagram.objects[c] for c in cat.objects if c != cat.terminal}
    if not objs:
        return Flow(diagram.flow.cap, (), {}, {}), {}
    merges = []
    crosses = []
    for (src, i, dst) in cat.generators:
        if dst == cat.terminal or src == cat.terminal:
            continue
        m = diagram.arrows[(src, i)]
        for s in objs[src].states:
            merges.append(((src, s), (dst, m.apply_state(s))))
        for (a, b) in objs[src].nonempty_pairs:
            fa, fb = m.apply_state(a), m.apply_state(b)
            for n in range(diagram.flow.cap + 1):
                for x in objs[src].path(a, b).level(n):
                    crosses.append(
                        (n, (src, a, b, x), (dst, fa, fb, m.apply(a, b, n, x)))
                    )
    return assemble_colimit(diagram.flow.cap, objs, merges, crosses, budget=budget)


# ---------------------------------------------------------------------------
# the probe report


@dataclass(frozen=True)
class JoinProbe:
    triple: tuple
    joined_states: int
    direct_states: int
    all_comparable: bool
    isomorphic: bool
    witness: str

    def to_dict(self):
        return {
            "triple": [str(s) for s in self.triple],
            "joined_states": self.joined_states,
            "direct_states": self.direct_states,
            "all_comparable": self.all_comparable,
            "isomorphic": self.isomorphic,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class LemmaProbeReport:
    join_probes: tuple
    latching_states: int
    flow_states: int
    latching_isomorphic: bool
    latching_witness: str
    index_components: int

    def consistent(self):
        for probe in self.join_probes:
            if probe.isomorphic and probe.joined_states != probe.direct_states:
                return False
            if probe.isomorphic != probe.all_comparable:
                return False
        if self.latching_isomorphic and self.latching_states != self.flow_states:
            return False
        return True

    def to_dict(self):
        return {
            "join_probes": [p.to_dict() for p in self.join_probes],
            "latching_states": self.latching_states,
            "flow_states": self.flow_states,
            "latching_isomorphic": self.latching_isomorphic,
            "latching_witness": self.latching_witness,
            "index_components": self.index_components,
            "consistent": self.consistent(),
        }


def lemma_probe(P, cap=3, budget=None):
    """For each 2-chain of the poset: does joining the two interval
    restrictions reproduce the direct restriction?  Plus the
    latching-object comparison at the top chain.  Reports outcomes and
    witnesses; asserts nothing."""
    from .flows import ball_diagram, poset_flow
    from .unionfind import UnionFind

    D = poset_flow(P, cap)
    probes = []
    for alpha in P.elements:
        for beta in P.elements:
            if not P.lt(alpha, beta):
                continue
            for gamma in P.elements:
                if not P.lt(beta, gamma):
                    continue
                left, _ = restriction(D, P.interval(alpha, beta))
                right, _ = restriction(D, P.interval(beta, gamma))
                joined, _, _ = join(left, right, budget=budget)
                direct, _ = restriction(D, P.interval(alpha, gamma))
                iso = flow_isomorphism(joined, direct)
                comparable = all(
                    P.leq(x, beta) or P.leq(beta, x)
                    for x in P.interval(alpha, gamma)
                )
                if iso is not None:
                    witness = f"state bijection {_fmt_state_map(iso.state_map)}"
                else:
                    witness = (
                        f"{len(joined.states)} joined states vs "
                        f"{len(direct.states)} in the interval"
                    )
                probes.append(
                    JoinProbe(
                        triple=(alpha, beta, gamma),
                        joined_states=len(joined.states),
                        direct_states=len(direct.states),
                        all_comparable=comparable,
                        isomorphic=iso is not None,
                        witness=witness,
                    )
                )
    diagram = ball_diagram(D, budget=budget)
    latch, _ = latching_object(diagram, budget=budget)
    iso = flow_isomorphism(latch, D)
    cat = diagram.category
    uf = UnionFind()
    punctured = [c for c in cat.objects if c != cat.terminal]
    for c in punctured:
        uf.add(c)
    for (src, i, dst) in cat.generators:
        if src != cat.terminal and dst != cat.terminal:
            uf.union(src, dst)
    components = len({uf.find(c) for c in punctured}) if punctured else 0
    if iso is not None:
        lw = f"state bijection {_fmt_state_map(iso.state_map)}"
    else:
        lw = f"{len(latch.states)} latching states vs {len(D.states)} flow states"
    return LemmaProbeReport(
        join_probes=tuple(probes),
        latching_states=len(latch.states),
        flow_states=len(D.states),
        latching_isomorphic=iso is not None,
        latching_witness=lw,
        index_components=components,
    )


def _fmt_state_map(state_map):
    items = sorted(state_map.items(), key=lambda kv: repr(kv[0]))
    return "{" + ", ".join(f"{k!r}->{v!r}" for k, v in items) + "}"
