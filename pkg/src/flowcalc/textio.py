"""Line-oriented text formats for posets and flow presentations.

Poset files:

    poset <name>
    elem <id> ...
    rel <a> < <b>

Flow files:

    flow <name>
    state <id> ...
    cell <id> : <a> -> <b> dim <n> [faces d0=<id> ... dn=<id>]
    relation <g1>.<g2>... = <h1>.<h2>...

`#` starts a comment anywhere on a line.  Degeneracies are never
written: a relation mixing cells of different dimensions lifts the
lower-dimensional letters with repeated last degeneracies (for letters
that start life as iterated degeneracies of a vertex, every choice of
indices agrees, so "last" is a convention, not a restriction).
"""

from __future__ import annotations

import json

from .errors import ParseError
from .poset import FinPoset
from .presentation import FlowPresentation
from .simplicial import SimplicialSet


def _strip_comment(line):
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _logical_lines(text):
    """(lineno, tokens) for every nonblank line, comments removed."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _strip_comment(raw).split()
        if toks:
            yield lineno, toks


class _Cell:
    __slots__ = ("cid", "pair", "dim", "faces", "line")

    def __init__(self, cid, pair, dim, faces, line):
        self.cid = cid
        self.pair = pair
        self.dim = dim
        self.faces = faces
        self.line = line


def parse_poset(text):
    """Parse a poset file into (name, FinPoset)."""
    name = None
    elems = []
    seen = set()
    rels = []
    for lineno, toks in _logical_lines(text):
        head = toks[0]
        if head == "poset":
            if name is not None:
                raise ParseError("second poset header", lineno)
            if len(toks) != 2:
                raise ParseError("expected: poset <name>", lineno)
            name = toks[1]
        elif head == "elem":
            if name is None:
                raise ParseError("elem before poset header", lineno)
            if len(toks) < 2:
                raise ParseError("expected: elem <id> ...", lineno)
            for k, e in enumerate(toks[1:], start=1):
                if e in seen:
                    raise ParseError(f"duplicate element {e!r}", lineno, k)
                seen.add(e)
                elems.append(e)
        elif head == "rel":
            if name is None:
                raise ParseError("rel before poset header", lineno)
            if len(toks) != 4 or toks[2] != "<":
                raise ParseError("expected: rel <a> < <b>", lineno)
            a, b = toks[1], toks[3]
            for k, e in ((1, a), (3, b)):
                if e not in seen:
                    raise ParseError(f"relation mentions undeclared element {e!r}", lineno, k)
            if a == b:
                raise ParseError(f"relation {a!r} < {a!r} is not strict", lineno)
            rels.append((a, b))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, 0)
    if name is None:
        raise ParseError("empty input: missing poset header", 1, 0)
    if not elems:
        raise ParseError("poset has no elements", 1)
    return name, FinPoset(elems, rels)


def _parse_cell(toks, lineno, states, cells):
    # cell <id> : <a> -> <b> dim <n> [faces d0=... ]
    if len(toks) < 8 or toks[2] != ":" or toks[4] != "->" or toks[6] != "dim":
        raise ParseError("expected: cell <id> : <a> -> <b> dim <n> [faces ...]", lineno)
    cid, a, b = toks[1], toks[3], toks[5]
    if cid in cells:
        raise ParseError(f"duplicate cell {cid!r}", lineno, 1)
    for k, s in ((3, a), (5, b)):
        if s not in states:
            raise ParseError(f"dangling state reference {s!r}", lineno, k)
    try:
        dim = int(toks[7])
    except ValueError:
        raise ParseError(f"dimension {toks[7]!r} is not an integer", lineno, 7)
    if dim < 0:
        raise ParseError("dimension must be >= 0", lineno, 7)
    rest = toks[8:]
    faces = ()
    if dim == 0:
        if rest:
            raise ParseError("a 0-cell takes no faces clause", lineno, 8)
    else:
        if not rest or rest[0] != "faces" or len(rest) != dim + 2:
            raise ParseError(
                f"a {dim}-cell needs: faces d0=<id> ... d{dim}=<id>", lineno, 8
            )
        got = {}
        for k, item in enumerate(rest[1:], start=9):
            key, eq, val = item.partition("=")
            if eq != "=" or not val or not key.startswith("d") or not key[1:].isdigit():
                raise ParseError(f"malformed face entry {item!r}", lineno, k)
            i = int(key[1:])
            if not 0 <= i <= dim:
                raise ParseError(f"face index d{i} outside 0..{dim}", lineno, k)
            if i in got:
                raise ParseError(f"face d{i} given twice", lineno, k)
            got[i] = val
        if len(got) != dim + 1:
            missing = sorted(set(range(dim + 1)) - set(got))
            raise ParseError(f"missing face entries d{missing[0]}..", lineno, 8)
        faces = tuple(got[i] for i in range(dim + 1))
    return _Cell(cid, (a, b), dim, faces, lineno)


def _lift(space, x, dim, level):
    for k in range(dim, level):
        x = space.degeneracy(k, x, k)
    return x


def parse_flow(text, cap=3):
    """Parse a flow file into (name, FlowPresentation) at the given cap."""
    name = None
    states = []
    state_set = set()
    cells = {}
    relation_lines = []
    for lineno, toks in _logical_lines(text):
        head = toks[0]
        if head == "flow":
            if name is not None:
                raise ParseError("second flow header", lineno)
            if len(toks) != 2:
                raise ParseError("expected: flow <name>", lineno)
            name = toks[1]
        elif head == "state":
            if name is None:
                raise ParseError("state before flow header", lineno)
            if len(toks) < 2:
                raise ParseError("expected: state <id> ...", lineno)
            for k, s in enumerate(toks[1:], start=1):
                if s in state_set:
                    raise ParseError(f"duplicate state {s!r}", lineno, k)
                state_set.add(s)
                states.append(s)
        elif head == "cell":
            if name is None:
                raise ParseError("cell before flow header", lineno)
            cell = _parse_cell(toks, lineno, state_set, cells)
            cells[cell.cid] = cell
        elif head == "relation":
            if name is None:
                raise ParseError("relation before flow header", lineno)
            relation_lines.append((lineno, toks[1:]))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, 0)
    if name is None:
        raise ParseError("empty input: missing flow header", 1, 0)

    for cell in cells.values():
        if cell.dim > cap:
            raise ParseError(
                f"cell {cell.cid!r} has dimension {cell.dim} above the cap {cap}", cell.line
            )
        for i, fid in enumerate(cell.faces):
            face = cells.get(fid)
            if face is None:
                raise ParseError(f"dangling face reference {fid!r}", cell.line)
            if face.pair != cell.pair:
                raise ParseError(
                    f"face d{i}={fid!r} lives on pair {face.pair}, not {cell.pair}", cell.line
                )
            if face.dim != cell.dim - 1:
                raise ParseError(
                    f"face d{i}={fid!r} has dimension {face.dim}, expected {cell.dim - 1}",
                    cell.line,
                )

    by_pair = {}
    for cell in cells.values():
        by_pair.setdefault(cell.pair, []).append(cell)
    generators = {}
    for pair, group in by_pair.items():
        dims = {c.cid: c.dim for c in group}
        faces = {c.cid: c.faces for c in group if c.dim >= 1}
        generators[pair] = SimplicialSet.from_nondegenerate(cap, dims, faces)

    relations = []
    for lineno, toks in relation_lines:
        if len(toks) != 3 or toks[1] != "=":
            raise ParseError("expected: relation <word> = <word>", lineno)
        words = []
        for raw in (toks[0], toks[2]):
            ids = raw.split(".")
            if not all(ids):
                raise ParseError(f"malformed word {raw!r}", lineno)
            letters = []
            for gid in ids:
                if gid not in cells:
                    raise ParseError(f"relation mentions undeclared cell {gid!r}", lineno)
                letters.append(cells[gid])
            for prev, nxt in zip(letters, letters[1:]):
                if prev.pair[1] != nxt.pair[0]:
                    raise ParseError(
                        f"cells {prev.cid!r} and {nxt.cid!r} do not chain", lineno
                    )
            words.append(letters)
        level = max(c.dim for w in words for c in w)
        lifted = tuple(
            tuple(
                (c.pair, _lift(generators[c.pair], c.cid, c.dim, level)) for c in w
            )
            for w in words
        )
        relations.append((level, lifted[0], lifted[1]))

    return name, FlowPresentation(cap, states, generators, relations)


def sniff_parse(text, cap=3):
    """Dispatch on the header line: ('poset', name, FinPoset) or
    ('flow', name, FlowPresentation)."""
    for lineno, toks in _logical_lines(text):
        if toks[0] == "poset":
            name, obj = parse_poset(text)
            return "poset", name, obj
        if toks[0] == "flow":
            name, obj = parse_flow(text, cap)
            return "flow", name, obj
        raise ParseError(f"expected a poset or flow header, found {toks[0]!r}", lineno, 0)
    raise ParseError("empty input", 1, 0)


def serialize_poset(P, name="P"):
    """Emit the poset file grammar (covering relations only)."""
    lines = [f"poset {name}"]
    if P.elements:
        lines.append("elem " + " ".join(str(e) for e in P.elements))
    for a, b in P.covers:
        lines.append(f"rel {a} < {b}")
    return "\n".join(lines) + "\n"


def canonical_json(doc):
    """The one true JSON rendering: key-sorted, two-space indent,
    trailing newline.  Parsing and re-rendering is byte-identical."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
