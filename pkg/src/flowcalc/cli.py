"""Command-line front end.

One command per process; exit 0 on pass, 1 on a checked failure (the
computation ran and the property is false), 2 on input errors (syntax,
dangling references, unbounded posets where bounds are required,
out-of-range degrees, blown budgets).
"""

from __future__ import annotations

import argparse
import sys

from .branching import branching_space, check_invariance, t_subdivide
from .errors import (
    DegreeOutOfRange,
    FlowcalcError,
    MalformedFlow,
    ParseError,
    UnknownState,
)
from .flows import is_full_directed_ball, poset_flow, validate_flow
from .homology import homology_list
from .poset import chain_category, order_complex, reedy_report, validate_poset
from .presentation import lemma_probe, saturate
from .textio import canonical_json, sniff_parse


def _common_flags(sub):
    sub.add_argument("--dim-cap", type=int, default=3, dest="cap", metavar="N")
    sub.add_argument("--budget", type=int, default=None, metavar="N")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--dot", metavar="PATH")
    sub.add_argument("--seed", type=int, default=None, metavar="N")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="flowcalc",
        description="Finite flows: poset chain categories, path-space homology, "
        "branching/merging profiles, and subdivision invariance checks.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, with_input=True):
        sub = subs.add_parser(name, help=help_)
        if with_input:
            sub.add_argument("input", help="poset or flow file")
        _common_flags(sub)
        return sub

    add("poset-report", "chain lengths, the chain category, and Reedy degrees")
    add("validate", "structural checks on a poset or flow file")
    sub = add("homology", "order-complex or path-space homology")
    sub.add_argument("--degree", type=int, default=None, metavar="N")
    add("branch", "per-state branching profiles (outgoing folds)")
    add("merge", "per-state merging profiles (incoming folds)")
    add("ball-check", "is the flow a full directed ball?")
    sub = add("subdivide", "replace one level-0 path vertex by a directed ball")
    sub.add_argument("--edge", nargs=2, required=True, metavar=("A", "B"))
    sub.add_argument("--ball", required=True, metavar="FILE")
    sub = add("check-invariance", "branching/merging profiles before and after subdivision", with_input=False)
    sub.add_argument("--flow", required=True, metavar="FILE", dest="input")
    sub.add_argument("--edge", nargs=2, required=True, metavar=("A", "B"))
    sub.add_argument("--ball", required=True, metavar="FILE")
    add("lemma-probe", "join-isomorphism and latching-object comparisons")
    return parser


# ---------------------------------------------------------------------------
# input plumbing


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}")


def _load(path, cap):
    return sniff_parse(_read(path), cap)


def _as_flow(kind, obj, cap, budget):
    """Poset files stand for their poset flows; flow files saturate."""
    if kind == "poset":
        return poset_flow(obj, cap)
    flow, _ = saturate(obj, budget=budget)
    return flow


def _edge_vertex(flow, a, b):
    states = set(flow.states)
    for s in (a, b):
        if s not in states:
            raise UnknownState(f"edge endpoint {s!r} is not a state")
    space = flow.path(a, b)
    vertices = () if space.is_empty else space.level(0)
    if not vertices:
        raise MalformedFlow(f"no path vertex from {a!r} to {b!r}")
    if len(vertices) > 1:
        raise MalformedFlow(
            f"--edge {a} {b} is ambiguous: {len(vertices)} level-0 vertices"
        )
    return vertices[0]


# ---------------------------------------------------------------------------
# DOT export


def _dot_quote(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_for_poset(P):
    """The chain category, arrows in the opposite direction (the shape
    the diagrams are indexed by)."""
    cat = chain_category(P)
    lines = ["digraph chain_category_op {"]
    for obj in cat.objects:
        label = " < ".join(str(x) for x in obj)
        lines.append(f"  {_dot_quote(obj)} [label={_dot_quote(label)}];")
    for src, i, dst in cat.generators:
        lines.append(f"  {_dot_quote(dst)} -> {_dot_quote(src)} [label={_dot_quote(f'd{i}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_for_flow(flow):
    lines = ["digraph flow_states {"]
    for s in flow.states:
        lines.append(f"  {_dot_quote(s)};")
    for (a, b) in flow.nonempty_pairs:
        count = len(flow.path(a, b).level(0))
        lines.append(f"  {_dot_quote(a)} -> {_dot_quote(b)} [label={_dot_quote(count)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _write_dot(args, kind, obj, flow):
    if not args.dot:
        return
    text = dot_for_poset(obj) if kind == "poset" else dot_for_flow(flow)
    with open(args.dot, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# the subcommands: each returns (sections, text_lines, exit_code)


def _cmd_poset_report(args):
    kind, name, obj = _load(args.input, args.cap)
    if kind != "poset":
        raise MalformedFlow("poset-report takes a poset file")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot_for_poset(obj))
    report = validate_poset(obj)
    cat = chain_category(obj)
    reedy = reedy_report(obj)
    lengths = [
        {"source": str(a), "target": str(b), "length": obj.chain_length(a, b)}
        for a in obj.elements
        for b in obj.elements
        if obj.leq(a, b)
    ]
    sections = {
        "poset": report.to_dict(),
        "lengths": lengths,
        "category": cat.to_dict(),
        "reedy": reedy.to_dict(),
        "direct": reedy.passed,
    }
    lines = [f"poset {name}: {report.size} elements, bounded={report.bounded}"]
    lines.append("chain lengths:")
    for row in lengths:
        lines.append(f"  l({row['source']}, {row['target']}) = {row['length']}")
    lines.append(f"chain category: {len(cat.objects)} objects, {len(cat.generators)} arrows")
    for obj_ in cat.objects:
        lines.append(f"  object ({', '.join(map(str, obj_))})  degree {cat.degrees[obj_]}")
    for src, i, dst in cat.generators:
        lines.append(
            f"  arrow ({', '.join(map(str, src))}) --d{i}--> ({', '.join(map(str, dst))})"
        )
    lines.append(f"terminal object: ({', '.join(map(str, cat.terminal))})")
    lines.append(f"direct category: {'yes' if reedy.passed else 'NO'}")
    return sections, lines, 0 if reedy.passed else 1


def _cmd_validate(args):
    kind, name, obj = _load(args.input, args.cap)
    if kind == "poset":
        report = validate_poset(obj)
        lines = [f"poset {name}: valid ({report.size} elements, bounded={report.bounded})"]
        return {"poset": report.to_dict(), "valid": True}, lines, 0
    try:
        obj.validate()
        flow, _ = saturate(obj, budget=args.budget)
        report = validate_flow(flow)
    except FlowcalcError as exc:
        lines = [f"flow {name}: INVALID", f"  {exc}"]
        return {"valid": False, "error": str(exc)}, lines, 1
    _write_dot(args, kind, obj, flow)
    lines = [
        f"flow {name}: valid",
        f"  states: {report.states}",
        f"  nonempty pairs: {report.nonempty_pairs}",
        f"  loopless: {report.loopless}",
    ]
    return {"flow": report.to_dict(), "valid": True}, lines, 0


def _degree_slice(args, groups):
    if args.degree is None:
        return list(enumerate(groups))
    if not 0 <= args.degree < args.cap:
        raise DegreeOutOfRange(
            f"degree {args.degree} not answerable at cap {args.cap} (allowed: 0..{args.cap - 1})"
        )
    return [(args.degree, groups[args.degree])]


def _cmd_homology(args):
    kind, name, obj = _load(args.input, args.cap)
    if kind == "poset":
        space = order_complex(obj, args.cap)
        rows = _degree_slice(args, homology_list(space))
        sections = {
            "order_complex": {f"H_{n}": str(g) for n, g in rows},
        }
        lines = [f"poset {name}: order complex homology"]
        lines += [f"  H_{n} = {g}" for n, g in rows]
        return sections, lines, 0
    flow, _ = saturate(obj, budget=args.budget)
    _write_dot(args, kind, obj, flow)
    pair_rows = []
    lines = [f"flow {name}: path-space homology"]
    for (a, b) in flow.nonempty_pairs:
        rows = _degree_slice(args, homology_list(flow.path(a, b)))
        pair_rows.append(
            {"source": str(a), "target": str(b), "homology": {f"H_{n}": str(g) for n, g in rows}}
        )
        body = ", ".join(f"H_{n} = {g}" for n, g in rows)
        lines.append(f"  path {a} -> {b}: {body}")
    return {"pairs": pair_rows}, lines, 0


def _cmd_branch(args, direction):
    kind, name, obj = _load(args.input, args.cap)
    flow = _as_flow(kind, obj, args.cap, args.budget)
    _write_dot(args, kind, obj, flow)
    report = branching_space(flow, direction)
    word = "branching" if direction == "minus" else "merging"
    lines = [f"{word} profiles of {name}:"]
    for s in flow.states:
        br = report.at(s)
        if br.is_empty:
            lines.append(f"  state {s}: (empty)")
        else:
            body = ", ".join(f"H_{n} = {g}" for n, g in enumerate(br.homology))
            lines.append(f"  state {s}: {br.class_count(0)} classes; {body}")
    doc = report.to_dict()
    return {word: doc, "note": doc["note"]}, lines, 0


def _cmd_ball_check(args):
    kind, name, obj = _load(args.input, args.cap)
    flow = _as_flow(kind, obj, args.cap, args.budget)
    _write_dot(args, kind, obj, flow)
    report = is_full_directed_ball(flow)
    lines = [f"{name}: full directed ball: {'yes' if report.is_ball else 'NO'}"]
    for f in report.failures:
        lines.append(f"  {f}")
    return {"ball": report.to_dict()}, lines, 0 if report.is_ball else 1


def _subdivide(args):
    kind, name, obj = _load(args.input, args.cap)
    flow = _as_flow(kind, obj, args.cap, args.budget)
    ball_kind, ball_name, ball_obj = _load(args.ball, args.cap)
    ball = _as_flow(ball_kind, ball_obj, args.cap, args.budget)
    a, b = args.edge
    u = _edge_vertex(flow, a, b)
    Y, f = t_subdivide(flow, (a, b, u), ball, budget=args.budget)
    return name, ball_name, flow, Y, f


def _cmd_subdivide(args):
    name, ball_name, X, Y, f = _subdivide(args)
    _write_dot(args, "flow", None, Y)
    old = {f.apply_state(s) for s in X.states}
    new_states = [s for s in Y.states if s not in old]
    sections = {
        "edge": [str(args.edge[0]), str(args.edge[1])],
        "ball": ball_name,
        "states_before": len(X.states),
        "states_after": len(Y.states),
        "new_states": [str(s) for s in new_states],
        "pairs": [
            {
                "source": str(a),
                "target": str(b),
                "vertices": len(Y.path(a, b).level(0)),
            }
            for (a, b) in Y.nonempty_pairs
        ],
    }
    lines = [
        f"subdivided {name} along --edge {args.edge[0]} {args.edge[1]} by {ball_name}:",
        f"  states: {len(X.states)} -> {len(Y.states)}",
        f"  new states: {', '.join(map(str, new_states)) or '(none)'}",
    ]
    for row in sections["pairs"]:
        lines.append(f"  path {row['source']} -> {row['target']}: {row['vertices']} vertices")
    return sections, lines, 0


def _cmd_check_invariance(args):
    name, ball_name, X, Y, f = _subdivide(args)
    _write_dot(args, "flow", None, Y)
    report = check_invariance(X, Y, f)
    doc = report.to_dict()
    lines = [
        f"invariance of {name} under subdivision by {ball_name}: "
        f"{'PASS' if report.passed else 'FAIL'}"
    ]
    for row in doc["comparisons"]:
        tag = "ok" if row["equal"] else "MISMATCH"
        lines.append(
            f"  state {row['state']} ({row['direction']}): "
            f"{row['before']} -> {row['after']}  [{tag}]"
        )
    for row in doc["new_states"]:
        lines.append(f"  new state {row['state']} ({row['direction']}): {row['status']}")
    for failure in doc["failures"]:
        lines.append(f"  FAIL: {failure}")
    return {"invariance": doc}, lines, 0 if report.passed else 1


def _cmd_lemma_probe(args):
    kind, name, obj = _load(args.input, args.cap)
    if kind != "poset":
        raise MalformedFlow("lemma-probe takes a poset file")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot_for_poset(obj))
    report = lemma_probe(obj, cap=args.cap, budget=args.budget)
    doc = report.to_dict()
    lines = [f"lemma probe on {name}:"]
    for p in doc["join_probes"]:
        a, b, c = p["triple"]
        verdict = "iso" if p["isomorphic"] else "NOT iso"
        lines.append(
            f"  join [{a},{b}] * [{b},{c}] vs [{a},{c}]: {verdict}"
            f" (all comparable to {b}: {p['all_comparable']}) — {p['witness']}"
        )
    lines.append(
        f"  latching object: {doc['latching_states']} states vs flow {doc['flow_states']}; "
        f"isomorphic: {doc['latching_isomorphic']} — {doc['latching_witness']}"
    )
    lines.append(f"  index category components: {doc['index_components']}")
    lines.append(f"  internally consistent: {doc['consistent']}")
    return {"lemma_probe": doc}, lines, 0 if report.consistent() else 1


_DISPATCH = {
    "poset-report": _cmd_poset_report,
    "validate": _cmd_validate,
    "homology": _cmd_homology,
    "branch": lambda args: _cmd_branch(args, "minus"),
    "merge": lambda args: _cmd_branch(args, "plus"),
    "ball-check": _cmd_ball_check,
    "subdivide": _cmd_subdivide,
    "check-invariance": _cmd_check_invariance,
    "lemma-probe": _cmd_lemma_probe,
}


def run(args):
    """Dispatch a parsed argument namespace; returns (document, exit code)."""
    if args.cap < 1:
        raise ParseError(f"--dim-cap must be >= 1, got {args.cap}")
    if args.budget is not None and args.budget < 1:
        raise ParseError(f"--budget must be >= 1, got {args.budget}")
    sections, lines, code = _DISPATCH[args.command](args)
    doc = {
        "command": args.command,
        "input": getattr(args, "input", None),
        "cap": args.cap,
        "status": "pass" if code == 0 else "fail",
        "sections": sections,
    }
    if args.seed is not None:
        doc["seed"] = args.seed
    text = canonical_json(doc) if args.format == "json" else "\n".join(lines) + "\n"
    return doc, text, code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _, text, code = run(args)
    except FlowcalcError as exc:
        print(f"flowcalc: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"flowcalc: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
