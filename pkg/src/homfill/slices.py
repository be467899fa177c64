"""Slice restrictions, distance-cochain lower bounds and the reflect-and-clip filling of doubles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .builders.double import DoubleComplex, HardCycle, copy_id, hi_id, lo_id, w_id
from .complex import Chain, ComplexError, Subcomplex, boundary, mass
from .fill import BUDGET_EXCEEDED, OPTIMAL_STATUS, UNFILLABLE, Budget, FillingProblem, FillingResult, fvol
from .rings import Ring, Z

SUPPORT_COUNT = "SupportCount"
COCHAIN_PAIRING = "CochainPairing"
ORIENTATION = "hi-side"  # slices read the cylinder cell on the [1/2, 1] side


def _slice_edge(D: DoubleComplex, W) -> int:
    if isinstance(W, int):
        D.slice_subcomplex(W)  # validates the index
        return W
    if isinstance(W, Subcomplex):
        for e in range(len(D.tree)):
            if D.slice_subcomplex(e) == W:
                return e
    raise ComplexError("W is not a marked mid-slice of this double")


def slice_chain(eta: Chain, D: DoubleComplex, W) -> Chain:
    """The chain on W whose coefficient on W s is eta's coefficient on s x [1/2, 1]."""
    e = _slice_edge(D, W)
    coeffs = {}
    for s in D.XH.ids(eta.dim - 1):
        v = eta[hi_id(e, s)]
        if v:
            coeffs[w_id(e, s)] = v
    return Chain(D.complex, eta.dim - 1, eta.ring, coeffs)


@dataclass(frozen=True)
class SliceCertificate:
    component: int
    p: str
    wp: str
    multiplicity: int
    certified_bound: int
    method: str
    orientation: str = ORIENTATION
    pairing: Fraction | None = None  # <dc, slice(eta)> for a given witness
    coboundary_norm: int | None = None


def fiber_distance(D: DoubleComplex, p: str, wp: str) -> int:
    dist = D.XH.distances(p)
    if wp not in dist:
        raise ComplexError(f"{wp} is not reachable from {p} in the fiber")
    return dist[wp]


def distance_cochain(D: DoubleComplex, e: int, p: str) -> dict[str, int]:
    """c(W v) = d(p, v) on the vertices of the slice W_e."""
    dist = D.XH.distances(p)
    return {w_id(e, v): d for v, d in dist.items()}


def coboundary(D: DoubleComplex, c: dict[str, int], e: int) -> dict[str, int]:
    """(dc)(edge) = c(head) - c(tail) on the edges of W_e."""
    out = {}
    for s in D.XH.ids(1):
        ends = D.XH.endpoints(s)
        if ends is None:
            continue
        tail, head = (w_id(e, v) for v in ends)
        if tail in c and head in c:
            out[w_id(e, s)] = c[head] - c[tail]
    return out


def certify_lower_bound(D: DoubleComplex, hc: HardCycle, witness: Chain | None = None,
                        method: str = COCHAIN_PAIRING) -> SliceCertificate:
    """Every filling of a hard cycle crosses the slice in a chain with boundary [wp] - [p],
    so its mass is at least the fiber distance d(p, wp)."""
    if not isinstance(hc, HardCycle):
        raise ComplexError("certificates need a cycle built by hard_cycle")
    if method not in (SUPPORT_COUNT, COCHAIN_PAIRING):
        raise ValueError(f"unknown certificate method {method!r}")
    e = hc.edge
    d = fiber_distance(D, hc.p, hc.wp)
    pairing = norm = None
    if method == COCHAIN_PAIRING:
        dc = coboundary(D, distance_cochain(D, e, hc.p), e)
        norm = max((abs(v) for v in dc.values()), default=0)
        if witness is not None:
            s = slice_chain(witness, D, e)
            pairing = sum((Fraction(dc.get(k, 0)) * Fraction(v) for k, v in s.items()), Fraction(0))
    return SliceCertificate(e, hc.p, hc.wp, 1, d, method, ORIENTATION, pairing, norm)


def check_certificate(cert: SliceCertificate, D: DoubleComplex, hc: HardCycle, witness: Chain) -> list[str]:
    """Problems found when validating a witness against a certificate (empty = all good)."""
    problems = []
    if boundary(witness) != hc.chain.to(witness.ring):
        problems.append("witness does not fill the cycle")
    if mass(witness) < cert.certified_bound:
        problems.append(f"witness mass {mass(witness)} below certified bound {cert.certified_bound}")
    s = slice_chain(witness, D, cert.component)
    expect = Chain(D.complex, 0, witness.ring,
                   {w_id(cert.component, cert.wp): 1, w_id(cert.component, cert.p): -1} if cert.p != cert.wp else {})
    if boundary(s) != expect:
        problems.append("slice boundary is not [wp] - [p]")
    if cert.method == COCHAIN_PAIRING and not witness.ring.is_finite:
        if cert.pairing is not None and cert.pairing != cert.certified_bound:
            problems.append(f"pairing {cert.pairing} differs from bound {cert.certified_bound}")
        if cert.coboundary_norm not in (0, 1) or (cert.certified_bound and cert.coboundary_norm != 1):
            problems.append(f"coboundary sup-norm is {cert.coboundary_norm}")
    return problems


# -- reflect and clip ------------------------------------------------------------------


@dataclass
class ClipStep:
    step: int
    leaf: int | None
    into: int | None
    edge: int | None
    mass_before: object
    mass_after: object
    status: str
    fill_mass: object
    filling: Chain | None = field(default=None, repr=False)
    nodes: int = 0


@dataclass
class ClipTranscript:
    steps: list
    status: str
    filling: Chain | None
    cycle: Chain

    def rows(self):
        for s in self.steps:
            yield (s.step, "-" if s.leaf is None else s.leaf, "-" if s.into is None else s.into,
                   s.mass_before, s.mass_after, s.status, "-" if s.fill_mass is None else s.fill_mass)


def _touched(D: DoubleComplex, gamma: Chain) -> set[int]:
    out = set()
    for cid in gamma:
        kind, i = D.owner(cid)
        if kind == "copy":
            out.add(i)
        elif kind == "lo":
            out.add(D.tree[i][0])
        elif kind == "hi":
            out.add(D.tree[i][1])
        else:
            raise ComplexError(f"cycle meets the mid-slice cell {cid}; reflect_clip needs cycles off the slices")
    return out


def _hull(D: DoubleComplex, verts: set[int]) -> set[int]:
    """Smallest subtree containing ``verts``."""
    if len(verts) <= 1:
        return set(verts)
    T = nx.Graph()
    T.add_nodes_from(D.vertices)
    T.add_edges_from(D.tree)
    vs = sorted(verts)
    out = set()
    for v in vs[1:]:
        out.update(nx.shortest_path(T, vs[0], v))
    return out


def reflect(D: DoubleComplex, chain: Chain, leaf: int, into: int) -> Chain:
    """Mirror a chain on the leaf's piece through the slice between ``leaf`` and ``into``."""
    e = D.edge_between(leaf, into)
    out: dict[str, object] = {}
    prefix = f"G{leaf}."
    for cid, v in chain.items():
        if cid.startswith(prefix):
            new, sign = copy_id(into, cid[len(prefix):]), 1
        else:
            kind, i = D.owner(cid)
            if i != e or kind == "W":
                raise ComplexError(f"cell {cid} is not in the reflected piece")
            s = cid[len(f"C{e}."):].rsplit(".", 1)[0]
            new = hi_id(e, s) if kind == "lo" else lo_id(e, s)
            sign = -1
        out[new] = out.get(new, 0) + sign * v
    return Chain(D.complex, chain.dim, chain.ring, out)


def _fill_within(D: DoubleComplex, cells: set[str], gamma: Chain, ring: Ring, budget: Budget) -> FillingResult:
    sub_ids = D.complex.closure(cells)
    S = D.complex.restrict(sub_ids, name=f"{D.complex.name}|part")
    local = Chain(S, gamma.dim, gamma.ring, dict(gamma.items()))
    res = fvol(FillingProblem(local, ring, budget))
    if res.witness is None:
        return res
    lifted = Chain(D.complex, res.witness.dim, res.witness.ring, dict(res.witness.items()))
    return FillingResult(res.status, lifted, res.mass, res.lower_bound, res.nodes, res.note)


def _region(D: DoubleComplex, verts) -> set[str]:
    cells = set()
    for t in verts:
        cells.update(D.copy_cells(t))
    for e, (l, r) in enumerate(D.tree):
        if l in verts and r in verts:
            cells.update(D.cylinder_cells(e))
    return cells


def reflect_clip(D: DoubleComplex, gamma: Chain, ring: Ring = Z, budget: Budget | None = None) -> ClipTranscript:
    """Fill a cycle of a tree double by repeatedly reflecting its leaf-most piece into the
    neighbouring copy, filling each difference inside two adjacent copies, and finishing
    with one solve once at most two copies carry the cycle."""
    budget = budget or Budget()
    if not boundary(gamma.to(ring) if gamma.ring != ring else gamma).is_zero():
        raise ComplexError("reflect_clip needs a cycle")
    cur = gamma
    steps: list[ClipStep] = []
    total: Chain | None = None
    status = OPTIMAL_STATUS
    while True:
        hull = _hull(D, _touched(D, cur))
        if len(hull) <= 2:
            break
        T = nx.Graph()
        T.add_edges_from(e for e in D.tree if e[0] in hull and e[1] in hull)
        leaf = min(v for v in hull if T.degree(v) == 1)
        into = next(iter(T.neighbors(leaf)))
        piece = D.piece(leaf)
        g0 = Chain(D.complex, cur.dim, cur.ring, {k: v for k, v in cur.items() if k in piece})
        nxt = cur - g0 + reflect(D, g0, leaf, into)
        res = _fill_within(D, _region(D, (leaf, into)), g0 - reflect(D, g0, leaf, into), ring, budget)
        steps.append(ClipStep(len(steps) + 1, leaf, into, D.edge_between(leaf, into), mass(cur), mass(nxt),
                              res.status, res.mass, res.witness, res.nodes))
        if res.status != OPTIMAL_STATUS:
            status = BUDGET_EXCEEDED if res.status == BUDGET_EXCEEDED else UNFILLABLE
            return ClipTranscript(steps, status, None, gamma)
        total = res.witness if total is None else total + res.witness
        cur = nxt
    region = _region(D, hull or {D.vertices[0]})
    res = _fill_within(D, region, cur, ring, budget)
    steps.append(ClipStep(len(steps) + 1, None, None, None, mass(cur), mass(cur), res.status, res.mass,
                          res.witness, res.nodes))
    if res.status != OPTIMAL_STATUS:
        status = BUDGET_EXCEEDED if res.status == BUDGET_EXCEEDED else UNFILLABLE
        return ClipTranscript(steps, status, None, gamma)
    total = res.witness if total is None else total + res.witness
    if boundary(total) != gamma.to(total.ring):
        raise AssertionError("assembled filling does not bound the cycle")
    return ClipTranscript(steps, status, total, gamma)
