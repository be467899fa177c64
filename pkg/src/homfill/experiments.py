"""Reproducible experiment drivers: the K_q separation sweep and seeded random instances."""

from __future__ import annotations

import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import metadata

import numpy as np

from .builders.double import DoubleComplex, HardCycle, hard_cycle, toy_double
from .builders.flag import build_kq, core_loop
from .complex import Cell, CellComplex, Chain
from .fill import OPTIMAL_STATUS, Budget, FillingProblem, fvol
from .linalg import FieldSolver
from .rings import Q, Ring, Z, mod, scaled

SEPARATION_PRIMES = (2, 3, 5, 7)


def fmt(v) -> str:
    """Exact text for report cells: integers plainly, rationals as num/den."""
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def versions() -> dict[str, str]:
    out = {"python": "%d.%d" % sys.version_info[:2]}
    for pkg in ("numpy", "scipy", "networkx"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:  # pragma: no cover
            out[pkg] = "missing"
    from . import __version__

    out["homfill"] = __version__
    return out


@dataclass
class ReportRow:
    instance: str
    ring: str
    status: str
    mass: object
    lower_bound: object
    nodes: int
    digest: str
    wall: float | None = None

    def key(self):
        return (self.instance, self.ring)

    def cells(self, timings: bool) -> list[str]:
        out = [self.instance, self.ring, self.status, fmt(self.mass), fmt(self.lower_bound), str(self.nodes),
               self.digest]
        if timings:
            out.append(f"{self.wall:.6f}")
        return out


@dataclass
class ExperimentReport:
    rows: list[ReportRow]
    summary: list[tuple]  # (instance, ring_a, ring_b, ratio)
    provenance: dict[str, str] = field(default_factory=dict)

    HEADER = ("instance", "ring", "status", "mass", "lower_bound", "nodes", "digest")

    def sort(self) -> "ExperimentReport":
        self.rows.sort(key=ReportRow.key)
        self.summary.sort(key=lambda r: r[:3])
        return self

    def to_csv(self, timings: bool = False) -> str:
        lines = [f"# {k}={v}" for k, v in sorted(self.provenance.items())]
        lines.append(",".join(self.HEADER + (("wall_secs",) if timings else ())))
        lines += [",".join(r.cells(timings)) for r in self.rows]
        if self.summary:
            lines.append("")
            lines.append("instance,numerator_ring,denominator_ring,ratio")
            lines += [",".join((i, a, b, fmt(v))) for i, a, b, v in self.summary]
        return "\n".join(lines) + "\n"

    def to_record(self, timings: bool = False) -> str:
        lines = [f"provenance.{k}: {v}" for k, v in sorted(self.provenance.items())]
        for r in self.rows:
            lines.append("")
            for name, val in zip(self.HEADER + (("wall_secs",) if timings else ()), r.cells(timings)):
                lines.append(f"{name}: {val}")
        for i, a, b, v in self.summary:
            lines.append("")
            lines.append(f"ratio: {i} {a}/{b} = {fmt(v)}")
        return "\n".join(lines) + "\n"


def _solve_row(instance: str, alpha: Chain, ring: Ring, budget: Budget) -> ReportRow:
    t0 = time.perf_counter()
    res = fvol(FillingProblem(alpha, ring, budget))
    wall = time.perf_counter() - t0
    return ReportRow(instance, str(ring), res.status, res.mass, res.lower_bound, res.nodes,
                     alpha.complex.digest(), wall)


def separation_instances(qs=(2, 3, 5), forms=("cw", "flag")):
    """(instance id, cycle, rings) for the core loop and q times it on each build of K_q."""
    out = []
    for q in qs:
        kb = build_kq(q)
        rings = [Z, Q, scaled(q)] + [mod(p) for p in sorted(set(SEPARATION_PRIMES) | {q})]
        for form in forms:
            X = kb.cw if form == "cw" else kb.triangulated
            loop = core_loop(X)
            out.append((f"K{q}.{form}.core", loop, rings))
            out.append((f"K{q}.{form}.{q}core", loop * q, rings))
    return out


def run_separation(qs=(2, 3, 5), forms=("cw", "flag"), budget: Budget | None = None, workers: int = 1,
                   config: dict | None = None) -> ExperimentReport:
    budget = budget or Budget()
    jobs = [(name, alpha, R) for name, alpha, rings in separation_instances(qs, forms) for R in rings]

    def work(job):
        return _solve_row(job[0], job[1], job[2], budget)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(work, jobs))
    else:
        rows = [work(j) for j in jobs]
    by = {(r.instance, r.ring): r for r in rows}
    summary = []
    for (inst, ring), r in sorted(by.items()):
        if ring != "Z" or r.status != OPTIMAL_STATUS:
            continue
        for (inst2, ring2), r2 in sorted(by.items()):
            if inst2 == inst and ring2 != "Z" and r2.status == OPTIMAL_STATUS and r2.mass:
                summary.append((inst, "Z", ring2, Fraction(r.mass) / Fraction(r2.mass)))
    prov = {f"version.{k}": v for k, v in versions().items()}
    prov.update({f"config.{k}": v for k, v in (config or {}).items()})
    prov["config.qs"] = " ".join(map(str, qs))
    prov["config.forms"] = " ".join(forms)
    prov["config.budget"] = f"nodes={budget.nodes} kernel={budget.kernel} secs={budget.secs}"
    for q in qs:
        kb = build_kq(q)
        prov[f"digest.K{q}.cw"] = kb.cw.digest()
        prov[f"digest.K{q}.flag"] = kb.triangulated.digest()
    return ExperimentReport(rows, summary, prov).sort()


# -- seeded random instances -------------------------------------------------------


def random_graph(rng: np.random.Generator, max_edges: int = 40, loops: bool = True, name: str = "G") -> CellComplex:
    """A connected multigraph with at most ``max_edges`` edges (a spanning tree plus extra edges)."""
    n_vertices = int(rng.integers(2, max(3, max_edges // 2) + 1))
    cells = [Cell(f"v{i}", 0) for i in range(n_vertices)]
    edges = []
    for i in range(1, n_vertices):
        edges.append((int(rng.integers(0, i)), i))
    extra = int(rng.integers(1, max(2, max_edges - len(edges)) + 1))
    for _ in range(min(extra, max_edges - len(edges))):
        a, b = (int(x) for x in rng.integers(0, n_vertices, size=2))
        if a == b and not loops:
            continue
        edges.append((a, b))
    for k, (a, b) in enumerate(edges):
        bd = () if a == b else ((f"v{a}", -1), (f"v{b}", 1))
        cells.append(Cell(f"e{k}", 1, bd))
    return CellComplex(cells, name=name)


def random_modp_cycle(X: CellComplex, p: int, rng: np.random.Generator) -> Chain:
    """A random nonzero 1-cycle over Z/pZ drawn from the cycle space (zero if there is none)."""
    R = mod(p)
    basis = FieldSolver(X.boundary_matrix(1), R).kernel()
    ids = X.ids(1)
    while basis:
        coeffs = rng.integers(0, p, size=len(basis))
        acc: dict[int, int] = {}
        for c, vec in zip(coeffs, basis):
            for j, v in vec.items():
                acc[j] = (acc.get(j, 0) + int(c) * int(v)) % p
        chain = Chain(X, 1, R, {ids[j]: v for j, v in acc.items() if v})
        if not chain.is_zero():
            return chain
    return Chain(X, 1, R)


def lift_trials(seed: int, n: int, primes=(2, 3, 5), max_edges: int = 40):
    """Seeded (graph, p, cycle) triples for lift experiments."""
    rng = np.random.default_rng(seed)
    out = []
    for t in range(n):
        X = random_graph(rng, max_edges, name=f"g{t}")
        p = int(primes[t % len(primes)])
        out.append((X, p, random_modp_cycle(X, p, rng)))
    return out


@dataclass(frozen=True)
class DoubleInstance:
    name: str
    D: DoubleComplex
    hc: HardCycle
    distance: int


def double_trials(seed: int, n: int = 24, max_length: int = 6) -> list[DoubleInstance]:
    """Hard cycles on toy doubles with fiber distances 1..max_length cycled through."""
    rng = np.random.default_rng(seed)
    out = []
    for t in range(n):
        d = 1 + t % max_length
        length = d + int(rng.integers(0, 3))
        start = int(rng.integers(0, length - d + 1))
        D = toy_double(length)
        hc = hard_cycle(D, [(f"z{start}", 1), (f"z{start + d}", -1)])
        out.append(DoubleInstance(f"toy{length}.{start}-{start + d}", D, hc, d))
    return out

