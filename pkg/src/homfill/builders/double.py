"""Doubles: copies of X_G over the vertices of a finite tree, joined by mapping cylinders of X_H.

For a tree edge e = (l, r) and a cell s of X_H, the cylinder s x [0,1] is cut
at 1/2 into ``C{e}.{s}.lo`` and ``C{e}.{s}.hi`` with mid-slice cell ``W{e}.{s}``:

    d(s x lo) = ds x lo + (-1)^dim(s) (W s - phi(s) in copy l)
    d(s x hi) = ds x hi + (-1)^dim(s) (phi(s) in copy r - W s)
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from ..complex import Cell, CellComplex, Chain, ComplexError, Subcomplex, boundary
from ..rings import Z
from .basic import interval


def copy_id(t: int, cid: str) -> str:
    return f"G{t}.{cid}"


def lo_id(e: int, cid: str) -> str:
    return f"C{e}.{cid}.lo"


def hi_id(e: int, cid: str) -> str:
    return f"C{e}.{cid}.hi"


def w_id(e: int, cid: str) -> str:
    return f"W{e}.{cid}"


def _phi_image(phi: dict, cid: str) -> dict:
    return dict(phi.get(cid, {}))


def check_chain_map(XH: CellComplex, XG: CellComplex, phi: dict) -> None:
    """Raise ComplexError naming the first cell where d(phi s) != phi(d s)."""
    for s in XH.cells():
        img = _phi_image(phi, s.id)
        for g in img:
            if g not in XG or XG.cell(g).dim != s.dim:
                raise ComplexError(f"phi({s.id}) uses {g}, not a {s.dim}-cell of {XG.name}")
        lhs = boundary(Chain(XG, s.dim, Z, img)) if s.dim else Chain(XG, -1, Z)
        rhs: dict[str, int] = {}
        for f, inc in s.boundary:
            for g, v in _phi_image(phi, f).items():
                rhs[g] = rhs.get(g, 0) + inc * v
        if s.dim and lhs != Chain(XG, s.dim - 1, Z, rhs):
            raise ComplexError(f"phi is not a chain map at cell {s.id}: d(phi) = {lhs!r}, phi(d) = {rhs}")


@dataclass
class DoubleComplex:
    complex: CellComplex
    XG: CellComplex
    XH: CellComplex
    phi: dict
    tree: tuple  # ((l, r), ...) edges; edge index = position
    vertices: tuple

    @property
    def W(self) -> dict[int, Subcomplex]:
        return {e: self.slice_subcomplex(e) for e in range(len(self.tree))}

    def slice_subcomplex(self, e: int) -> Subcomplex:
        if not 0 <= e < len(self.tree):
            raise ComplexError(f"no cylinder {e}")
        return Subcomplex(self.complex, frozenset(w_id(e, c.id) for c in self.XH.cells()))

    def copy_cells(self, t: int) -> list[str]:
        return [copy_id(t, c.id) for c in self.XG.cells()]

    def piece(self, t: int) -> frozenset:
        """Copy t together with the half-cylinders on its side (mid-slices excluded)."""
        out = set(self.copy_cells(t))
        for e, (l, r) in enumerate(self.tree):
            if t == l:
                out.update(lo_id(e, c.id) for c in self.XH.cells())
            elif t == r:
                out.update(hi_id(e, c.id) for c in self.XH.cells())
        return frozenset(out)

    def cylinder_cells(self, e: int) -> frozenset:
        return frozenset(f(e, c.id) for c in self.XH.cells() for f in (lo_id, hi_id, w_id))

    def neighbors(self, t: int) -> list[tuple[int, int]]:
        """(neighbor, edge index) pairs."""
        out = []
        for e, (l, r) in enumerate(self.tree):
            if l == t:
                out.append((r, e))
            elif r == t:
                out.append((l, e))
        return sorted(out)

    def edge_between(self, a: int, b: int) -> int:
        for e, (l, r) in enumerate(self.tree):
            if {l, r} == {a, b}:
                return e
        raise ComplexError(f"copies {a} and {b} are not adjacent")

    def owner(self, cid: str):
        """('copy', t) | ('lo', e) | ('hi', e) | ('W', e) for a cell of the double."""
        head, _, rest = cid.partition(".")
        if head.startswith("G"):
            return "copy", int(head[1:])
        if head.startswith("W"):
            return "W", int(head[1:])
        side = rest.rsplit(".", 1)[1]
        return side, int(head[1:])

    def phi_vertex_preimage(self, g: str) -> str | None:
        """The X_H vertex mapped by phi onto the single X_G vertex g, if any."""
        hits = [h for h in self.XH.ids(0) if _phi_image(self.phi, h) == {g: 1}]
        return hits[0] if hits else None


def build_double(XG: CellComplex, XH: CellComplex, phi: dict, tree=((0, 1),), name: str | None = None) -> DoubleComplex:
    """Copies of XG at tree vertices, a cylinder XH x [0,1] (cut at 1/2) per tree edge.

    ``phi`` maps each XH cell id to an XG chain {cell: coeff} of the same dimension.
    """
    phi = {k: dict(v) for k, v in phi.items()}
    check_chain_map(XH, XG, phi)
    tree = tuple((int(l), int(r)) for l, r in tree)
    T = nx.Graph()
    T.add_edges_from(tree)
    if not tree:
        T.add_node(0)
    if not nx.is_tree(T):
        raise ComplexError(f"gluing pattern {tree} is not a tree")
    verts = tuple(sorted(T.nodes))
    cells = []
    for t in verts:
        for c in XG.cells():
            cells.append(Cell(copy_id(t, c.id), c.dim, tuple((copy_id(t, f), i) for f, i in c.boundary), c.label))
    for e, (l, r) in enumerate(tree):
        for s in XH.cells():
            d = s.dim
            sign = -1 if d % 2 else 1
            cells.append(Cell(w_id(e, s.id), d, tuple((w_id(e, f), i) for f, i in s.boundary)))
            img = _phi_image(phi, s.id)
            lo = [(lo_id(e, f), i) for f, i in s.boundary] + [(w_id(e, s.id), sign)]
            lo += [(copy_id(l, g), -sign * v) for g, v in img.items()]
            hi = [(hi_id(e, f), i) for f, i in s.boundary] + [(w_id(e, s.id), -sign)]
            hi += [(copy_id(r, g), sign * v) for g, v in img.items()]
            cells.append(Cell(lo_id(e, s.id), d + 1, tuple(lo)))
            cells.append(Cell(hi_id(e, s.id), d + 1, tuple(hi)))
    X = CellComplex(cells, name=name or f"D({XG.name},{XH.name})",
                    provenance={"builder": "double", "XG": XG.name, "XH": XH.name,
                                "tree": ";".join(f"{l}-{r}" for l, r in tree)})
    return DoubleComplex(X, XG, XH, phi, tree, verts)


def inclusion_map(XH: CellComplex, XG: CellComplex) -> dict:
    """phi for XH sitting inside XG with the same cell ids."""
    return {c.id: {c.id: 1} for c in XH.cells() if c.id in XG}


# -- toy distortion family -----------------------------------------------------------


def fan(length: int, prefix: str = "t") -> CellComplex:
    """The path t0..t{length} coned off to an apex z (a contractible 2-complex)."""
    P = interval(length, prefix)
    cells = list(P.cells()) + [Cell("z", 0)]
    for i in range(length + 1):
        cells.append(Cell(f"z{i}", 1, ((f"{prefix}{i}", -1), ("z", 1))))
    for i in range(length):
        # triangle t_i -> t_{i+1} -> z -> t_i
        cells.append(Cell(f"f{i}", 2, ((f"{prefix}e{i}", 1), (f"z{i + 1}", 1), (f"z{i}", -1))))
    return CellComplex(cells, name=f"fan{length}", provenance={"builder": "fan", "length": str(length)})


def toy_double(length: int, tree=((0, 1),)) -> DoubleComplex:
    """Fiber = path of ``length`` edges; each copy = the fan over it, so fiber
    distance length collapses to 2 in the copies."""
    XH = interval(length)
    XG = fan(length)
    return build_double(XG, XH, inclusion_map(XH, XG), tree, name=f"toy{length}")


# -- cycles --------------------------------------------------------------------------


@dataclass(frozen=True)
class HardCycle:
    chain: Chain
    edge: int
    p: str  # X_H vertices with alpha = [wp] - [p]
    wp: str
    path: tuple  # the X_G path from phi(p) to phi(wp), as ((edge, sign), ...)


def _in_copy(D: DoubleComplex, t: int, c: Chain) -> dict:
    return {copy_id(t, k): v for k, v in c.items()}


def suspension_cycle(D: DoubleComplex, alpha: Chain, beta_l: Chain, beta_r: Chain, edge: int = 0) -> Chain:
    """gamma = alpha x [0,1] + (-1)^(n-1) (beta_l - beta_r), an n-cycle for an (n-1)-cycle alpha of X_H."""
    if alpha.complex != D.XH or beta_l.complex != D.XG or beta_r.complex != D.XG:
        raise ComplexError("alpha lives in X_H and the fillings in X_G")
    n = alpha.dim + 1
    if alpha.dim > 0 and not boundary(alpha).is_zero():
        raise ComplexError("alpha is not a cycle")
    target: dict[str, int] = {}
    for s, v in alpha.items():
        for g, w in _phi_image(D.phi, s).items():
            target[g] = target.get(g, 0) + v * w
    want = Chain(D.XG, alpha.dim, alpha.ring, target)
    for side, beta in (("left", beta_l), ("right", beta_r)):
        got = boundary(beta) if beta.dim else Chain(D.XG, -1, beta.ring)
        if got != want:
            diff = (got - want).items()
            raise ComplexError(f"{side} filling has the wrong boundary: differs on "
                               + ", ".join(f"{k}: {v}" for k, v in diff))
    l, r = D.tree[edge]
    sign = -1 if (n - 1) % 2 else 1
    coeffs: dict[str, object] = {}
    for s, v in alpha.items():
        coeffs[lo_id(edge, s)] = v
        coeffs[hi_id(edge, s)] = v
    for k, v in _in_copy(D, l, beta_l).items():
        coeffs[k] = coeffs.get(k, 0) + sign * v
    for k, v in _in_copy(D, r, beta_r).items():
        coeffs[k] = coeffs.get(k, 0) - sign * v
    return Chain(D.complex, n, alpha.ring, coeffs)


def hard_cycle(D: DoubleComplex, path, edge: int = 0) -> HardCycle:
    """Loop: along ``path`` in the left copy, across the cylinder, back along it in the
    right copy, and across again.  The cylinder is cut at 1/2, so each crossing
    uses two edges and the mass is 2 len(path) + 4 (zero for a closed path)."""
    path = tuple((e, int(s)) for e, s in path)
    if not path:
        raise ComplexError("empty path: give the start vertex with hard_cycle_from")
    return hard_cycle_from(D, _walk(D.XG, path)[0], path, edge)


def _walk(X: CellComplex, path) -> list[str]:
    verts = []
    for e, s in path:
        ends = X.endpoints(e)
        if ends is None:
            raise ComplexError(f"{e} is a loop; paths need graph edges")
        a, b = ends if s > 0 else ends[::-1]
        if verts and verts[-1] != a:
            raise ComplexError(f"path is not connected at {e}")
        if not verts:
            verts.append(a)
        verts.append(b)
    return verts


def hard_cycle_from(D: DoubleComplex, start: str, path, edge: int = 0) -> HardCycle:
    path = tuple((e, int(s)) for e, s in path)
    walk = _walk(D.XG, path) if path else [start]
    if walk[0] != start:
        raise ComplexError(f"path starts at {walk[0]}, not {start}")
    p, wp = D.phi_vertex_preimage(walk[0]), D.phi_vertex_preimage(walk[-1])
    if p is None or wp is None:
        bad = walk[0] if p is None else walk[-1]
        raise ComplexError(f"path endpoint {bad} is not on the cylinder (no X_H vertex maps onto it)")
    alpha = Chain(D.XH, 0, Z, {wp: 1, p: -1}) if p != wp else Chain(D.XH, 0, Z)
    beta = Chain(D.XG, 1, Z, {})
    for e, s in path:
        beta = beta + Chain(D.XG, 1, Z, {e: s})
    gamma = suspension_cycle(D, alpha, beta, beta, edge)
    return HardCycle(gamma, edge, p, wp, path)
