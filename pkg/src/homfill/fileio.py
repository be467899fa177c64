"""Plain-text formats for complexes, chains and flag complexes.

Complex file::

    name: K3
    dimension: 2
    provenance: builder=kq
    a 0 [] a
    e0 1 [(a, -1), (u1, 1)]
    D 2 [(e0, 3), (e1, 3), (e2, 3), (e3, 3)]

Chain file: one line ``dim ring {id: coeff, ...}``, e.g. ``1 mod:2 {e0: 1 mod 2}``.

Serialization is canonical, so parse -> dump is byte-identical on dumped text.
"""

from __future__ import annotations

import re

from .complex import Cell, CellComplex, Chain, ComplexError
from .rings import Ring, RingError

_RECORD = re.compile(r"^(\S+)\s+(-?\d+)\s+\[(.*)\](?:\s+(\S+))?\s*$")
_FACE = re.compile(r"^\(\s*([^\s,()]+)\s*,\s*(-?\d+)\s*\)$")
_CHAIN = re.compile(r"^(-?\d+)\s+(\S+)\s+\{(.*)\}\s*$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _content_lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("#"):
            yield n, s


def _split_faces(body: str, lineno: int):
    body = body.strip()
    if not body:
        return []
    parts = re.findall(r"\([^()]*\)", body)
    if re.sub(r"\([^()]*\)", "", body).replace(",", "").strip():
        raise ParseError(f"malformed boundary list [{body}]", lineno)
    out = []
    for part in parts:
        m = _FACE.match(part)
        if not m:
            raise ParseError(f"malformed boundary record {part}", lineno)
        out.append((m.group(1), int(m.group(2))))
    return out


# -- complexes ------------------------------------------------------------------


def dumps_complex(X: CellComplex) -> str:
    lines = [f"name: {X.name}", f"dimension: {X.dimension}"]
    for key in sorted(X.provenance):
        lines.append(f"provenance: {key}={X.provenance[key]}")
    for c in X.cells():
        faces = ", ".join(f"({f}, {i})" for f, i in c.boundary)
        rec = f"{c.id} {c.dim} [{faces}]"
        if c.label is not None:
            rec += f" {c.label}"
        lines.append(rec)
    return "\n".join(lines) + "\n"


def loads_complex(text: str) -> CellComplex:
    name = None
    declared = None
    declared_line = None
    provenance: dict[str, str] = {}
    cells: list[Cell] = []
    where: dict[str, int] = {}
    for n, line in _content_lines(text):
        head, sep, rest = line.partition(":")
        if sep and " " not in head:
            rest = rest.strip()
            if head == "name":
                name = rest
            elif head == "dimension":
                try:
                    declared = int(rest)
                except ValueError:
                    raise ParseError(f"bad dimension {rest!r}", n) from None
                declared_line = n
            elif head == "provenance":
                key, eq, value = rest.partition("=")
                if not eq:
                    raise ParseError("provenance needs key=value", n)
                provenance[key.strip()] = value.strip()
            else:
                raise ParseError(f"unknown header {head!r}", n)
            continue
        m = _RECORD.match(line)
        if not m:
            raise ParseError(f"malformed cell record {line!r}", n)
        cid, dim, body, label = m.groups()
        try:
            cells.append(Cell(cid, int(dim), tuple(_split_faces(body, n)), label))
        except ComplexError as exc:
            raise ParseError(str(exc), n) from None
        if cid in where:
            raise ParseError(f"duplicate cell id {cid} (first on line {where[cid]})", n)
        where[cid] = n
    if name is None and not cells:
        raise ParseError("empty complex file", 0)
    if name is None:
        raise ParseError("missing 'name:' header", 1)
    ids = {c.id: c for c in cells}
    for c in cells:
        for f, _ in c.boundary:
            if f not in ids:
                raise ParseError(f"cell {c.id}: boundary references unknown cell {f}", where[c.id])
            if ids[f].dim != c.dim - 1:
                raise ParseError(f"cell {c.id}: face {f} has dimension {ids[f].dim}", where[c.id])
    actual = max((c.dim for c in cells), default=-1)
    if declared is None:
        raise ParseError("missing 'dimension:' header", 1)
    if declared != actual:
        raise ParseError(f"declared dimension {declared} but cells reach dimension {actual}", declared_line)
    return CellComplex(cells, name=name, provenance=provenance)


def read_complex(path) -> CellComplex:
    with open(path, encoding="utf-8") as fh:
        return loads_complex(fh.read())


def write_complex(X: CellComplex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_complex(X))


# -- chains ----------------------------------------------------------------------


def dumps_chain(c: Chain) -> str:
    body = ", ".join(f"{k}: {c.ring.format(v)}" for k, v in c.items())
    return f"{c.dim} {c.ring} {{{body}}}\n"


def loads_chain(text: str, X: CellComplex) -> Chain:
    lines = list(_content_lines(text))
    if len(lines) != 1:
        raise ParseError(f"expected one chain line, found {len(lines)}", lines[1][0] if len(lines) > 1 else 0)
    n, line = lines[0]
    m = _CHAIN.match(line)
    if not m:
        raise ParseError(f"malformed chain {line!r}", n)
    dim, ring_text, body = m.groups()
    try:
        ring = Ring.parse(ring_text)
    except RingError as exc:
        raise ParseError(str(exc), n) from None
    coeffs = {}
    for item in (s for s in body.split(",") if s.strip()):
        cid, sep, val = item.partition(":")
        if not sep:
            raise ParseError(f"malformed chain entry {item.strip()!r}", n)
        cid = cid.strip()
        if cid in coeffs:
            raise ParseError(f"duplicate chain entry {cid}", n)
        try:
            coeffs[cid] = ring.parse_element(val)
        except (RingError, ValueError) as exc:
            raise ParseError(str(exc), n) from None
    try:
        return Chain(X, int(dim), ring, coeffs)
    except ComplexError as exc:
        raise ParseError(str(exc), n) from None


def read_chain(path, X: CellComplex) -> Chain:
    with open(path, encoding="utf-8") as fh:
        return loads_chain(fh.read(), X)


# -- flag complexes ------------------------------------------------------------------


def loads_flag(text: str):
    """Parse ``vertex v [label]``, ``edge u v``, ``triangle u v w``, ``tetra ...`` lines."""
    from .builders.flag import FlagComplex

    arity = {"edge": 2, "triangle": 3, "tetra": 4}
    vertices: dict[str, str | None] = {}
    simplices = []
    for n, line in _content_lines(text):
        kind, *args = line.split()
        if kind == "vertex":
            if len(args) not in (1, 2):
                raise ParseError("vertex takes an id and an optional label", n)
            vertices[args[0]] = args[1] if len(args) == 2 else None
        elif kind in arity:
            if len(args) != arity[kind]:
                raise ParseError(f"{kind} takes {arity[kind]} vertices", n)
            simplices.append((n, tuple(args)))
        else:
            raise ParseError(f"unknown record {kind!r}", n)
    if not vertices:
        raise ParseError("no vertices", 0)
    for n, s in simplices:
        missing = [v for v in s if v not in vertices]
        if missing:
            raise ParseError(f"unknown vertex {missing[0]}", n)
    try:
        return FlagComplex(vertices, [s for _, s in simplices])
    except ComplexError as exc:
        raise ParseError(str(exc)) from None


def dumps_flag(Y) -> str:
    words = {2: "edge", 3: "triangle", 4: "tetra"}
    lines = []
    for v in Y.vertices:
        lab = Y.labels.get(v)
        lines.append(f"vertex {v}" + (f" {lab}" if lab is not None else ""))
    for k in (1, 2, 3):
        for s in Y.simplices(k):
            lines.append(f"{words[k + 1]} " + " ".join(s))
    return "\n".join(lines) + "\n"
