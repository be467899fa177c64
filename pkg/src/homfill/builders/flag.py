"""Flag simplicial complexes and the complexes K_q.

K_q is a circle (subdivided into the four edges a -> u1 -> s -> v1 -> a)
with one 2-cell attached by a map of degree q.
"""

from __future__ import annotations

from itertools import combinations

import networkx as nx

from ..complex import Cell, CellComplex, Chain, ComplexError, natural_key
from ..rings import Z, is_prime

CORE = ("a", "u1", "s", "v1")
MAX_SIMPLEX_DIM = 3


def _sorted(vs) -> tuple[str, ...]:
    return tuple(sorted(vs, key=natural_key))


def simplex_id(vs) -> str:
    return "|".join(_sorted(vs))


class FlagComplex:
    """A simplicial complex given by vertices and simplices (closed under faces).

    Simplices are tuples of vertex ids in natural order; ``is_flag`` checks
    that every clique of the 1-skeleton spans a simplex.
    """

    def __init__(self, vertices, simplices=(), name: str = "Y"):
        if isinstance(vertices, dict):
            self.labels = {v: lab for v, lab in vertices.items()}
        else:
            self.labels = {v: None for v in vertices}
        self.vertices = _sorted(self.labels)
        self.name = name
        faces: set[tuple[str, ...]] = set()
        for s in simplices:
            s = _sorted(set(s))
            if len(s) - 1 > MAX_SIMPLEX_DIM:
                raise ComplexError(f"simplex {s} exceeds dimension {MAX_SIMPLEX_DIM}")
            for v in s:
                if v not in self.labels:
                    raise ComplexError(f"simplex {s} uses unknown vertex {v}")
            for k in range(2, len(s) + 1):
                faces.update(combinations(s, k))
        self._simplices = {k: sorted((f for f in faces if len(f) == k + 1), key=lambda f: tuple(map(natural_key, f)))
                           for k in range(1, MAX_SIMPLEX_DIM + 1)}

    @property
    def dimension(self) -> int:
        return max((k for k, fs in self._simplices.items() if fs), default=0)

    def simplices(self, k: int) -> list[tuple[str, ...]]:
        if k == 0:
            return [(v,) for v in self.vertices]
        return list(self._simplices.get(k, []))

    def all_simplices(self) -> list[tuple[str, ...]]:
        return [s for k in range(MAX_SIMPLEX_DIM + 1) for s in self.simplices(k)]

    def has_simplex(self, vs) -> bool:
        s = _sorted(set(vs))
        return len(s) == 1 and s[0] in self.labels or s in set(self._simplices.get(len(s) - 1, []))

    def graph(self) -> nx.Graph:
        G = nx.Graph()
        for v in self.vertices:
            G.add_node(v, label=self.labels[v])
        G.add_edges_from(self.simplices(1))
        return G

    def non_simplex_cliques(self) -> list[tuple[str, ...]]:
        """Cliques of the 1-skeleton that do not span a simplex (empty iff flag)."""
        bad = []
        present = {s for s in self.all_simplices()}
        for clique in nx.enumerate_all_cliques(self.graph()):
            c = _sorted(clique)
            if c not in present:
                bad.append(c)
        return sorted(bad, key=lambda f: (len(f), tuple(map(natural_key, f))))

    def is_flag(self) -> bool:
        return not self.non_simplex_cliques()

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(self.simplices(k)) for k in range(MAX_SIMPLEX_DIM + 1))

    def to_complex(self, name: str | None = None) -> CellComplex:
        """Simplicial chain complex; simplex [v0..vk] has boundary sum (-1)^i [..^vi..]."""
        cells = [Cell(v, 0, (), self.labels[v]) for v in self.vertices]
        for k in range(1, MAX_SIMPLEX_DIM + 1):
            for s in self.simplices(k):
                bd = tuple((simplex_id(s[:i] + s[i + 1:]), (-1) ** i) for i in range(len(s)))
                cells.append(Cell(simplex_id(s), k, bd))
        return CellComplex(cells, name=name or self.name, provenance={"builder": "flag"})

    def subdivide_edge(self, u: str, v: str, new: str) -> "FlagComplex":
        """Stellar subdivision of edge uv by a new vertex."""
        e = _sorted((u, v))
        out = []
        for k in range(1, MAX_SIMPLEX_DIM + 1):
            for s in self.simplices(k):
                if u in s and v in s:
                    rest = [w for w in s if w not in e]
                    out.append(tuple(rest) + (u, new))
                    out.append(tuple(rest) + (v, new))
                else:
                    out.append(s)
        labels = dict(self.labels)
        labels[new] = None
        return FlagComplex(labels, out, name=self.name)


def make_flag(Y: FlagComplex, max_rounds: int = 1000) -> FlagComplex:
    """Repair flagness by subdividing an edge of the first offending clique, until flag."""
    counter = 0
    for _ in range(max_rounds):
        bad = Y.non_simplex_cliques()
        if not bad:
            return Y
        u, v = bad[0][0], bad[0][1]
        while f"y{counter}" in Y.labels:
            counter += 1
        Y = Y.subdivide_edge(u, v, f"y{counter}")
    raise ComplexError("flag repair did not converge")


def kq_cw(q: int) -> CellComplex:
    """Minimal CW form: four vertices, four edges, one 2-cell of degree q."""
    _check_prime(q)
    cells = [Cell(v, 0, (), v) for v in CORE]
    for i in range(4):
        cells.append(Cell(f"e{i}", 1, ((CORE[i], -1), (CORE[(i + 1) % 4], 1))))
    cells.append(Cell("D", 2, tuple((f"e{i}", q) for i in range(4))))
    return CellComplex(cells, name=f"K{q}", provenance={"builder": "kq", "form": "cw", "q": str(q)})


def kq_flag(q: int) -> FlagComplex:
    """Flag triangulation of K_q.

    The disk has 4q boundary vertices (the i-th one maps to CORE[i mod 4]),
    an inner ring r0..r(4q-1) and a centre c.
    """
    _check_prime(q)
    n = 4 * q
    b = [CORE[i % 4] for i in range(n)]
    r = [f"r{i}" for i in range(n)]
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris.append((b[i], b[j], r[i]))
        tris.append((b[j], r[i], r[j]))
        tris.append((r[i], r[j], "c"))
    labels = {v: v for v in CORE}
    labels.update({v: None for v in r})
    labels["c"] = None
    Y = make_flag(FlagComplex(labels, tris, name=f"K{q}flag"))
    if Y.euler_characteristic() != 1:
        raise ComplexError("triangulation of K_q degenerated")
    return Y


def _check_prime(q: int) -> None:
    if not is_prime(q):
        raise ComplexError(f"K_q needs q prime, got {q}")


class KqBuild:
    """Both forms of K_q with their core loops."""

    def __init__(self, q: int):
        self.q = q
        self.cw = kq_cw(q)
        self.flag = kq_flag(q)
        self.triangulated = self.flag.to_complex(name=f"K{q}flag")
        self.triangulated.provenance.update({"builder": "kq", "form": "flag", "q": str(q)})

    def core_loop(self, X: CellComplex | None = None, ring=Z) -> Chain:
        X = X or self.cw
        return core_loop(X, ring)


def build_kq(q: int) -> KqBuild:
    return KqBuild(q)


def core_loop(X: CellComplex, ring=Z) -> Chain:
    """The loop a -> u1 -> s -> v1 -> a as a 1-chain on either form of K_q."""
    coeffs: dict[str, int] = {}
    for i in range(4):
        u, v = CORE[i], CORE[(i + 1) % 4]
        if f"e{i}" in X:  # CW form
            coeffs[f"e{i}"] = 1
            continue
        eid = simplex_id((u, v))
        # simplex edges point from the smaller to the larger vertex
        coeffs[eid] = 1 if _sorted((u, v))[0] == u else -1
    return Chain(X, 1, ring, coeffs)
