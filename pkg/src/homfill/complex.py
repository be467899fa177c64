"""Finite CW complexes with integer incidence records, and chains on them."""

from __future__ import annotations

import hashlib
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .rings import Ring, RingError, Z, has_canonical_map
from .sparse import SparseIntMatrix

_TOKEN = re.compile(r"^[^\s(),\[\]{}:]+$")
_DIGITS = re.compile(r"(\d+)")


class ComplexError(ValueError):
    pass


def natural_key(text: str):
    """Sort key that orders ``e2`` before ``e10``."""
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in _DIGITS.split(text) if p)


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    boundary: tuple = ()  # ((face_id, incidence), ...), canonical order, no zeros
    label: str | None = None

    def __post_init__(self):
        if not _TOKEN.match(self.id):
            raise ComplexError(f"bad cell id {self.id!r}")
        if self.dim < 0:
            raise ComplexError(f"cell {self.id}: negative dimension")
        if self.label is not None and not _TOKEN.match(self.label):
            raise ComplexError(f"cell {self.id}: bad label {self.label!r}")
        merged: dict[str, int] = {}
        for face, inc in self.boundary:
            merged[face] = merged.get(face, 0) + int(inc)
        recs = tuple(sorted(((f, i) for f, i in merged.items() if i), key=lambda r: natural_key(r[0])))
        object.__setattr__(self, "boundary", recs)
        if self.dim == 0 and recs:
            raise ComplexError(f"vertex {self.id} cannot have a boundary")


class CellComplex:
    """A finite complex: cells graded by dimension, boundaries as incidence records.

    Cells are kept in canonical order (by dimension, then natural order of id),
    so boundary matrices and serializations are deterministic.
    """

    def __init__(self, cells: Iterable[Cell], name: str = "X", provenance: Mapping[str, str] | None = None):
        cells = list(cells)
        self.name = name
        self.provenance = dict(provenance or {})
        self._cells: dict[str, Cell] = {}
        for c in cells:
            if c.id in self._cells:
                raise ComplexError(f"duplicate cell id {c.id}")
            self._cells[c.id] = c
        for c in cells:
            for face, _ in c.boundary:
                f = self._cells.get(face)
                if f is None:
                    raise ComplexError(f"cell {c.id}: boundary references unknown cell {face}")
                if f.dim != c.dim - 1:
                    raise ComplexError(f"cell {c.id}: face {face} has dimension {f.dim}, expected {c.dim - 1}")
        top = max((c.dim for c in cells), default=-1)
        self._by_dim: list[tuple[str, ...]] = []
        for d in range(top + 1):
            ids = sorted((c.id for c in cells if c.dim == d), key=natural_key)
            self._by_dim.append(tuple(ids))
        self._index = {cid: i for ids in self._by_dim for i, cid in enumerate(ids)}
        self._matrices: dict[int, SparseIntMatrix] = {}
        self._cofaces: dict[str, tuple] | None = None

    # access ---------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self._by_dim) - 1

    def cells(self, dim: int | None = None) -> list[Cell]:
        if dim is None:
            return [self._cells[i] for ids in self._by_dim for i in ids]
        if dim < 0 or dim > self.dimension:
            return []
        return [self._cells[i] for i in self._by_dim[dim]]

    def ids(self, dim: int) -> tuple[str, ...]:
        if dim < 0 or dim > self.dimension:
            return ()
        return self._by_dim[dim]

    def cell(self, cid: str) -> Cell:
        try:
            return self._cells[cid]
        except KeyError:
            raise ComplexError(f"unknown cell {cid!r} in {self.name}") from None

    def __contains__(self, cid) -> bool:
        return cid in self._cells

    def index(self, cid: str) -> int:
        return self._index[cid]

    def n_cells(self, dim: int) -> int:
        return len(self.ids(dim))

    def __len__(self) -> int:
        return len(self._cells)

    def by_label(self, label: str) -> Cell:
        found = [c for c in self.cells() if c.label == label]
        if len(found) != 1:
            raise ComplexError(f"label {label!r} matches {len(found)} cells")
        return found[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellComplex):
            return NotImplemented
        return self is other or self._cells == other._cells

    def __hash__(self) -> int:
        return hash(self.digest())

    def __repr__(self) -> str:
        counts = ",".join(str(len(ids)) for ids in self._by_dim)
        return f"CellComplex({self.name!r}, cells=[{counts}])"

    def digest(self) -> str:
        h = hashlib.sha256()
        for c in self.cells():
            h.update(f"{c.id}|{c.dim}|{c.boundary}|{c.label}\n".encode())
        return h.hexdigest()[:16]

    # algebra ---------------------------------------------------------------

    def boundary_matrix(self, k: int) -> SparseIntMatrix:
        """Matrix of the cellular differential C_k -> C_{k-1} (rows: (k-1)-cells)."""
        if k not in self._matrices:
            rows = self.n_cells(k - 1)
            cols = self.n_cells(k)
            entries = {}
            if k >= 1:
                for j, cid in enumerate(self.ids(k)):
                    for face, inc in self._cells[cid].boundary:
                        entries[(self._index[face], j)] = inc
            self._matrices[k] = SparseIntMatrix(rows, cols, entries)
        return self._matrices[k]

    def cofaces(self, cid: str) -> tuple:
        """((coface_id, incidence), ...) for cells having ``cid`` in their boundary."""
        if self._cofaces is None:
            co: dict[str, list] = {i: [] for i in self._cells}
            for c in self.cells():
                for face, inc in c.boundary:
                    co[face].append((c.id, inc))
            self._cofaces = {k: tuple(v) for k, v in co.items()}
        return self._cofaces[cid]

    def check_dd_zero(self) -> None:
        for k in range(2, self.dimension + 1):
            prod = self.boundary_matrix(k - 1).matmul(self.boundary_matrix(k))
            if not prod.is_zero():
                (i, j), v = next(iter(prod.entries.items()))
                raise ComplexError(
                    f"{self.name}: boundary of boundary of {self.ids(k)[j]} has "
                    f"coefficient {v} on {self.ids(k - 2)[i]}"
                )

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(ids) for d, ids in enumerate(self._by_dim))

    # 1-skeleton -------------------------------------------------------------

    def endpoints(self, edge_id: str) -> tuple[str, str] | None:
        """(tail, head) of an edge with boundary head - tail, or None for a loop."""
        c = self.cell(edge_id)
        if c.dim != 1:
            raise ComplexError(f"{edge_id} is not an edge")
        if not c.boundary:
            return None
        tail = [f for f, i in c.boundary if i == -1]
        head = [f for f, i in c.boundary if i == 1]
        if len(c.boundary) != 2 or len(tail) != 1 or len(head) != 1:
            raise ComplexError(f"edge {edge_id} is not a graph edge: {c.boundary}")
        return tail[0], head[0]

    def adjacency(self) -> dict[str, list[tuple[str, str, int]]]:
        """vertex -> sorted [(neighbor, edge_id, sign)], sign=+1 when the edge points to neighbor."""
        adj: dict[str, list] = {v: [] for v in self.ids(0)}
        for e in self.ids(1):
            ends = self.endpoints(e)
            if ends is None:
                continue
            u, v = ends
            adj[u].append((v, e, 1))
            adj[v].append((u, e, -1))
        for v in adj:
            adj[v].sort(key=lambda t: (natural_key(t[0]), natural_key(t[1]), -t[2]))
        return adj

    def distances(self, source: str) -> dict[str, int]:
        adj = self.adjacency()
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v, _, _ in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def geodesic(self, source: str, target: str) -> list[tuple[str, int]]:
        """Lexicographically first shortest edge path as [(edge_id, sign), ...]."""
        adj = self.adjacency()
        parent: dict[str, tuple[str, str, int] | None] = {source: None}
        queue = deque([source])
        while queue and target not in parent:
            u = queue.popleft()
            for v, e, s in adj[u]:
                if v not in parent:
                    parent[v] = (u, e, s)
                    queue.append(v)
        if target not in parent:
            raise ComplexError(f"{target} is not reachable from {source}")
        path = []
        v = target
        while parent[v] is not None:
            u, e, s = parent[v]
            path.append((e, s))
            v = u
        return path[::-1]

    def is_graph(self) -> bool:
        if self.dimension > 1:
            return False
        try:
            for e in self.ids(1):
                if self.endpoints(e) is None:
                    return False
        except ComplexError:
            return False
        return True

    # subcomplexes -----------------------------------------------------------

    def closure(self, ids: Iterable[str]) -> frozenset:
        out = set()
        stack = list(ids)
        while stack:
            cid = stack.pop()
            if cid in out:
                continue
            out.add(cid)
            stack.extend(f for f, _ in self.cell(cid).boundary)
        return frozenset(out)

    def restrict(self, ids: Iterable[str], name: str | None = None) -> "CellComplex":
        """The subcomplex on ``ids`` (which must be closed under taking faces)."""
        ids = frozenset(ids)
        missing = [f for c in ids for f, _ in self.cell(c).boundary if f not in ids]
        if missing:
            raise ComplexError(f"cell set is not closed: missing {sorted(missing, key=natural_key)[:5]}")
        return CellComplex([self._cells[c] for c in ids], name=name or f"{self.name}|sub",
                           provenance={"parent": self.name})


@dataclass(frozen=True, eq=False)
class Subcomplex:
    complex: CellComplex
    cells: frozenset

    def __post_init__(self):
        cells = frozenset(self.cells)
        object.__setattr__(self, "cells", cells)
        for cid in cells:
            for face, _ in self.complex.cell(cid).boundary:
                if face not in cells:
                    raise ComplexError(f"subcomplex not closed: {cid} has face {face} outside")

    @classmethod
    def generated_by(cls, X: CellComplex, ids: Iterable[str]) -> "Subcomplex":
        return cls(X, X.closure(ids))

    @classmethod
    def whole(cls, X: CellComplex) -> "Subcomplex":
        return cls(X, frozenset(c.id for c in X.cells()))

    def __contains__(self, cid) -> bool:
        return cid in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subcomplex) and self.complex == other.complex and self.cells == other.cells

    def __hash__(self) -> int:
        return hash(self.cells)

    def ids(self, dim: int) -> list[str]:
        return [c for c in self.complex.ids(dim) if c in self.cells]

    def as_complex(self, name: str | None = None) -> CellComplex:
        return self.complex.restrict(self.cells, name=name)


class Chain:
    """Sparse formal sum of same-dimensional cells with coefficients in a ring.

    Immutable; zero coefficients are never stored, and iteration follows the
    complex's canonical cell order, so equality is structural.
    """

    __slots__ = ("complex", "dim", "ring", "_coeffs")

    def __init__(self, complex: CellComplex, dim: int, ring: Ring = Z, coeffs: Mapping | None = None):
        clean = {}
        for cid, v in (coeffs or {}).items():
            c = complex.cell(cid)
            if c.dim != dim:
                raise ComplexError(f"cell {cid} has dimension {c.dim}, chain has dimension {dim}")
            v = ring.coerce(v)
            if v != 0:
                clean[cid] = v
        self.complex = complex
        self.dim = dim
        self.ring = ring
        self._coeffs = dict(sorted(clean.items(), key=lambda kv: complex.index(kv[0])))

    @classmethod
    def zero(cls, complex: CellComplex, dim: int, ring: Ring = Z) -> "Chain":
        return cls(complex, dim, ring)

    @classmethod
    def cell(cls, complex: CellComplex, cid: str, ring: Ring = Z, coeff=1) -> "Chain":
        return cls(complex, complex.cell(cid).dim, ring, {cid: coeff})

    # container protocol ----------------------------------------------------

    def __getitem__(self, cid: str):
        return self._coeffs.get(cid, self.ring.zero())

    def __iter__(self):
        return iter(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def support(self) -> frozenset:
        return frozenset(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # equality ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.dim == other.dim and self.ring == other.ring and self._coeffs == other._coeffs
                and (self.complex is other.complex or self.complex == other.complex))

    def __hash__(self) -> int:
        return hash((self.dim, self.ring, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {self.ring.format(v)}" for k, v in self._coeffs.items())
        return f"Chain(dim={self.dim}, ring={self.ring}, {{{body}}})"

    # arithmetic --------------------------------------------------------------

    def _check(self, other: "Chain") -> None:
        if self.dim != other.dim or self.ring != other.ring:
            raise ComplexError(f"cannot combine {self.dim}-chain over {self.ring} with "
                               f"{other.dim}-chain over {other.ring}")
        if self.complex is not other.complex and self.complex != other.complex:
            raise ComplexError("chains live on different complexes")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return Chain(self.complex, self.dim, self.ring, out)

    def __neg__(self) -> "Chain":
        return Chain(self.complex, self.dim, self.ring, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, scalar) -> "Chain":
        s = self.ring.coerce(scalar) if not isinstance(scalar, int) else scalar
        return Chain(self.complex, self.dim, self.ring, {k: v * s for k, v in self._coeffs.items()})

    __rmul__ = __mul__

    def to(self, target: Ring) -> "Chain":
        return change_ring(self, target)

    @property
    def mass(self):
        return mass(self)


def boundary(c: Chain) -> Chain:
    if c.dim == 0:
        # 0-chains have no boundary; the result is the empty chain of dimension -1
        return Chain(c.complex, -1, c.ring)
    X = c.complex
    out: dict[str, object] = {}
    for cid, v in c.items():
        for face, inc in X.cell(cid).boundary:
            out[face] = out.get(face, 0) + inc * v
    return Chain(X, c.dim - 1, c.ring, out)


def mass(c: Chain):
    """l1 norm over Z, Q and (1/q)Z; support size over Z/pZ."""
    if c.ring.is_finite:
        return len(c)
    total = sum((abs(v) for _, v in c.items()), Fraction(0))
    return int(total) if total.denominator == 1 and c.ring.kind == "Z" else total


def restrict_chain(c: Chain, L) -> Chain:
    cells = L.cells if isinstance(L, Subcomplex) else frozenset(L)
    if isinstance(L, Subcomplex) and L.complex is not c.complex and L.complex != c.complex:
        raise ComplexError("subcomplex lives in a different complex")
    return Chain(c.complex, c.dim, c.ring, {k: v for k, v in c.items() if k in cells})


def change_ring(c: Chain, target: Ring) -> Chain:
    if not has_canonical_map(c.ring, target):
        raise RingError(f"no canonical coefficient map {c.ring} -> {target}; use a lift instead")
    if c.ring == target:
        return c
    return Chain(c.complex, c.dim, target, dict(c.items()))


def chain_from_path(X: CellComplex, path: Iterable[tuple[str, int]], ring: Ring = Z) -> Chain:
    out: dict[str, int] = {}
    for e, s in path:
        out[e] = out.get(e, 0) + s
    return Chain(X, 1, ring, out)
