"""Salvetti complexes of right-angled Artin groups, Morse heights and vertex links."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ..complex import Cell, CellComplex, ComplexError
from .flag import FlagComplex

MAX_DIM = 3
BASE = "o"


def cube_id(simplex) -> str:
    return "S" + "|".join(simplex)


@dataclass
class MorseDatum:
    """Height of each generator; the standard choice sends every generator to 1."""

    heights: dict = field(default_factory=dict)

    @classmethod
    def constant(cls, generators, value: int = 1) -> "MorseDatum":
        return cls({g: value for g in generators})

    def __getitem__(self, g) -> int:
        return self.heights[g]


@dataclass
class SalvettiComplex:
    Y: FlagComplex
    complex: CellComplex
    max_dim: int
    truncated: bool

    def link(self) -> FlagComplex:
        """Link of the vertex: x+ and x- per generator, one simplex per sign choice on a simplex of Y."""
        labels = {}
        for v in self.Y.vertices:
            labels[f"{v}+"] = v
            labels[f"{v}-"] = v
        simplices = []
        for k in range(1, self.max_dim):
            for s in self.Y.simplices(k):
                for signs in itertools.product("+-", repeat=len(s)):
                    simplices.append(tuple(f"{v}{e}" for v, e in zip(s, signs)))
        return FlagComplex(labels, simplices, name=f"Lk({self.complex.name})")

    def _half_link(self, heights: MorseDatum, sign: int) -> FlagComplex:
        full = self.link()
        keep = set()
        for v in self.Y.vertices:
            h = heights[v]
            # x+ points up when h(x) > 0, x- when h(x) < 0
            if h * sign > 0:
                keep.add(f"{v}+")
            elif h * sign < 0:
                keep.add(f"{v}-")
        simplices = [s for k in range(1, 4) for s in full.simplices(k) if set(s) <= keep]
        return FlagComplex({v: full.labels[v] for v in keep}, simplices,
                           name=("Lk_up" if sign > 0 else "Lk_down"))

    def ascending_link(self, heights: MorseDatum | None = None) -> FlagComplex:
        return self._half_link(heights or MorseDatum.constant(self.Y.vertices), 1)

    def descending_link(self, heights: MorseDatum | None = None) -> FlagComplex:
        return self._half_link(heights or MorseDatum.constant(self.Y.vertices), -1)


def salvetti_skeleton(Y: FlagComplex, max_dim: int = MAX_DIM) -> SalvettiComplex:
    """One vertex and one k-cube per (k-1)-simplex of Y, for k <= max_dim.

    Every face of a cube is glued to an opposite face of the same cube with
    the opposite orientation, so all cellular differentials vanish.
    """
    if not 1 <= max_dim <= MAX_DIM:
        raise ValueError(f"max_dim must lie in 1..{MAX_DIM}")
    if not Y.is_flag():
        raise ComplexError(f"{Y.name} is not flag: {Y.non_simplex_cliques()[0]}")
    truncated = Y.dimension + 1 > max_dim
    if truncated:
        warnings.warn(f"{Y.name} has dimension {Y.dimension}; cubes above dimension {max_dim} are dropped",
                      stacklevel=2)
    cells = [Cell(BASE, 0)]
    for k in range(0, max_dim):
        for s in Y.simplices(k):
            cells.append(Cell(cube_id(s), k + 1, (), label=s[0] if k == 0 else None))
    X = CellComplex(cells, name=f"Sal({Y.name})", provenance={"builder": "salvetti", "Y": Y.name,
                                                              "max_dim": str(max_dim)})
    return SalvettiComplex(Y, X, max_dim, truncated)


def find_isomorphism(A: FlagComplex, B: FlagComplex, match_labels: bool = True) -> dict | None:
    """A simplicial isomorphism A -> B (vertex map), verified on every simplex, or None."""
    GA, GB = A.graph(), B.graph()
    if match_labels:
        for G, F in ((GA, A), (GB, B)):
            for v in G.nodes:
                G.nodes[v]["label"] = F.labels.get(v) if F.labels.get(v) is not None else v
        node_match = lambda x, y: x["label"] == y["label"]  # noqa: E731
    else:
        node_match = None
    gm = GraphMatcher(GA, GB, node_match=node_match)
    for mapping in gm.isomorphisms_iter():
        ok = all(
            set(tuple(sorted(mapping[v] for v in s)) for s in A.simplices(k))
            == set(tuple(sorted(s)) for s in B.simplices(k))
            for k in range(1, 4)
        )
        if ok:
            return dict(sorted(mapping.items()))
    return None


def octahedralization(Y: FlagComplex) -> FlagComplex:
    return salvetti_skeleton(Y, max(1, min(MAX_DIM, Y.dimension + 1))).link()


def link_graph_h1_rank(L: FlagComplex) -> int:
    """First Betti number of the 1-skeleton of a link (a cheap connectivity probe)."""
    G = L.graph()
    return G.number_of_edges() - G.number_of_nodes() + nx.number_connected_components(G)
