"""Minimal-mass fillings of cycles over Z, Q, (1/q)Z and Z/pZ, and filling profiles."""

from __future__ import annotations

import heapq
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import CellComplex, Chain, boundary, change_ring, mass
from .linalg import FieldSolver, NotACycleError, chain_vector, solve_exact
from .lp import OPTIMAL, solve_lp
from .rings import Q, Ring, RingError, Z
from .sparse import SparseIntMatrix

OPTIMAL_STATUS = "Optimal"
UNFILLABLE = "Unfillable"
BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class Budget:
    nodes: int = 20000  # branch-and-bound nodes, or support subsets tried over Z/pZ
    kernel: int = 1 << 20  # largest kernel coset enumerated exhaustively over Z/pZ
    secs: float | None = None  # wall-clock cap

    def __post_init__(self):
        if self.nodes <= 0 or self.kernel <= 0 or (self.secs is not None and self.secs <= 0):
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class FillingProblem:
    alpha: Chain
    ring: Ring
    budget: Budget = field(default_factory=Budget)

    def __post_init__(self):
        a, R = self.alpha, self.ring
        allowed = a.ring == R or a.ring == Z
        if not allowed:
            raise RingError(f"a cycle over {a.ring} cannot be filled over {R}")
        if not boundary(self.target).is_zero():
            raise NotACycleError(f"alpha is not a cycle over {R}")

    @property
    def target(self) -> Chain:
        """The cycle with coefficients moved into the filling ring."""
        return change_ring(self.alpha, self.ring)


@dataclass(frozen=True)
class FillingResult:
    status: str
    witness: Chain | None = None
    mass: Fraction | int | None = None
    lower_bound: Fraction | int | None = None
    nodes: int = 0
    note: str = ""

    def __post_init__(self):
        if self.status == OPTIMAL_STATUS and (self.witness is None or self.mass != mass(self.witness)):
            raise ValueError("an optimal result carries its witness and its mass")

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL_STATUS


def _witness(X: CellComplex, dim: int, ring: Ring, vec) -> Chain:
    ids = X.ids(dim)
    return Chain(X, dim, ring, {ids[j]: v for j, v in enumerate(vec) if v})


def _deadline(budget: Budget):
    return None if budget.secs is None else time.monotonic() + budget.secs


def fvol(problem: FillingProblem) -> FillingResult:
    """Minimal mass of a chain whose boundary is the problem's cycle."""
    alpha = problem.target
    R = problem.ring
    X = alpha.complex
    k = alpha.dim + 1
    if alpha.is_zero():
        return FillingResult(OPTIMAL_STATUS, Chain.zero(X, k, R), mass(Chain.zero(X, k, R)), 0)
    M = X.boundary_matrix(k)
    b = chain_vector(alpha)
    if R.kind == "Q":
        return _fvol_rational(X, k, M, b)
    if R.kind == "Z":
        return _fvol_integral(X, k, M, b, problem.budget)
    if R.kind == "scaled":
        q = R.param
        inner = _fvol_integral(X, k, M, [int(v * q) for v in b], problem.budget)
        w = None if inner.witness is None else Chain(X, k, R, {c: Fraction(v, q) for c, v in inner.witness.items()})
        scale = lambda v: None if v is None else Fraction(v) / q  # noqa: E731
        return FillingResult(inner.status, w, None if w is None else mass(w), scale(inner.lower_bound),
                             inner.nodes, inner.note)
    return _fvol_modp(X, k, R, M, b, problem.budget)


def fill_scaled(alpha: Chain, q: int, budget: Budget | None = None) -> FillingResult:
    """Filling over (1/q)Z: the integral filling of q*alpha, divided by q."""
    if alpha.ring != Z:
        raise RingError("fill_scaled takes an integral cycle")
    return fvol(FillingProblem(alpha, Ring.scaled(q), budget or Budget()))


# -- Q -----------------------------------------------------------------------


def _l1_lp(M, b, extra_rows=(), extra_rhs=()):
    """LP over the split x = x+ - x-, minimizing sum(x+ + x-)."""
    n = M.cols
    rows = []
    for r in M.row_dicts():
        row = {}
        for j, v in r.items():
            row[j] = v
            row[n + j] = -v
        rows.append(row)
    rows.extend(extra_rows)
    width = 2 * n + len(extra_rows)
    return solve_lp(rows, list(b) + list(extra_rhs), [1] * (2 * n) + [0] * (width - 2 * n))


def _fvol_rational(X, k, M, b) -> FillingResult:
    fs = FieldSolver(M, Q)
    sol = fs.solve({i: v for i, v in enumerate(b) if v})
    if sol is None:
        return FillingResult(UNFILLABLE, note="not a boundary over Q")
    if fs.rank == M.cols:
        w = _witness(X, k, Q, [sol.get(j, 0) for j in range(M.cols)])
        return FillingResult(OPTIMAL_STATUS, w, mass(w), mass(w), note="unique filling")
    res = _l1_lp(M, b)
    n = M.cols
    w = _witness(X, k, Q, [res.x[j] - res.x[n + j] for j in range(n)])
    dual_value = sum((y * v for y, v in zip(res.dual, b)), Fraction(0))
    return FillingResult(OPTIMAL_STATUS, w, mass(w), dual_value, note=f"lp pivots={res.pivots}")


# -- Z ------------------------------------------------------------------------


def _fvol_integral(X, k, M, b, budget: Budget) -> FillingResult:
    sol = solve_exact(M, b, Z)
    if not sol.feasible:
        return FillingResult(UNFILLABLE, note="not a boundary over Z")
    if not sol.kernel:
        w = _witness(X, k, Z, sol.particular)
        return FillingResult(OPTIMAL_STATUS, w, mass(w), mass(w), note="unique filling")
    n = M.cols
    best_vec = list(sol.particular)
    best = sum(abs(v) for v in best_vec)
    deadline = _deadline(budget)
    counter = itertools.count()

    def bound_rows(bounds):
        rows, rhs = [], []
        for s, (var, lo, hi) in enumerate(bounds):
            slack = 2 * n + s
            if hi is not None:
                rows.append({var: 1, slack: 1})
                rhs.append(hi)
            else:
                rows.append({var: 1, slack: -1})
                rhs.append(lo)
        return rows, rhs

    def relax(bounds):
        rows, rhs = bound_rows(bounds)
        return _l1_lp(M, b, rows, rhs)

    root = relax(())
    root_bound = root.value
    heap = [(root.value, next(counter), (), root)]
    nodes = 0
    while heap:
        value, _, bounds, res = heapq.heappop(heap)
        if -(-value.numerator // value.denominator) >= best:
            continue
        if nodes >= budget.nodes or (deadline is not None and time.monotonic() > deadline):
            open_bound = min([value] + [h[0] for h in heap])
            w = _witness(X, k, Z, best_vec)
            return FillingResult(BUDGET_EXCEEDED, w, mass(w), max(root_bound, open_bound), nodes,
                                 note=f"stopped after {nodes} nodes")
        nodes += 1
        x = res.x
        frac = [j for j in range(2 * n) if x[j].denominator != 1]
        if not frac:
            vec = [int(x[j] - x[n + j]) for j in range(n)]
            m = sum(abs(v) for v in vec)
            if m < best:
                best, best_vec = m, vec
            continue
        # largest denominator first; ties by cell order, then x+ before x-
        j = min(frac, key=lambda v: (-x[v].denominator, v % n, v // n))
        fl = x[j].numerator // x[j].denominator
        for child in (bounds + ((j, None, fl),), bounds + ((j, fl + 1, None),)):
            r = relax(child)
            if r.status == OPTIMAL and -(-r.value.numerator // r.value.denominator) < best:
                heapq.heappush(heap, (r.value, next(counter), child, r))
    w = _witness(X, k, Z, best_vec)
    return FillingResult(OPTIMAL_STATUS, w, mass(w), root_bound, nodes, note=f"branch and bound nodes={nodes}")


# -- Z/pZ ---------------------------------------------------------------------


def _fvol_modp(X, k, R: Ring, M, b, budget: Budget) -> FillingResult:
    p = R.characteristic
    fs = FieldSolver(M, R)
    sol = fs.solve({i: v for i, v in enumerate(b) if v % p})
    if sol is None:
        return FillingResult(UNFILLABLE, note=f"not a boundary over {R}")
    n = M.cols
    x0 = np.array([sol.get(j, 0) for j in range(n)], dtype=np.int64)
    kern = fs.kernel()
    if not kern:
        w = _witness(X, k, R, x0.tolist())
        return FillingResult(OPTIMAL_STATUS, w, mass(w), mass(w), note="unique filling")
    K = np.array([[vec.get(j, 0) for j in range(n)] for vec in kern], dtype=np.int64)
    dim = len(kern)
    if p ** dim <= budget.kernel:
        best_vec, total = _enumerate_coset(x0, K, p)
        w = _witness(X, k, R, best_vec)
        return FillingResult(OPTIMAL_STATUS, w, mass(w), mass(w), nodes=total,
                             note=f"kernel coset of size {total} enumerated")
    return _support_search(X, k, R, M, b, x0, budget)


def _enumerate_coset(x0, K, p, chunk: int = 1 << 14):
    """Minimum-support element of x0 + span(K) over Z/pZ by full enumeration.

    Coefficient vectors are visited in base-p counting order (first kernel
    vector fastest); the first minimizer wins.
    """
    dim = K.shape[0]
    total = p ** dim
    powers = p ** np.arange(dim, dtype=np.int64)
    best, best_vec = None, None
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p
        X = (x0[None, :] + digits @ K) % p
        support = np.count_nonzero(X, axis=1)
        i = int(np.argmin(support))
        if best is None or support[i] < best:
            best, best_vec = int(support[i]), X[i].tolist()
    return best_vec, total


def _support_search(X, k, R, M, b, x0, budget: Budget) -> FillingResult:
    """Smallest support solving M x = b over Z/pZ by increasing support size."""
    cols = M.columns()
    n = M.cols
    upper = int(np.count_nonzero(x0))
    deadline = _deadline(budget)
    nodes = 0
    for size in range(1, upper):
        for combo in itertools.combinations(range(n), size):
            if nodes >= budget.nodes or (deadline is not None and time.monotonic() > deadline):
                w = _witness(X, k, R, x0.tolist())
                return FillingResult(BUDGET_EXCEEDED, w, mass(w), size, nodes,
                                     note=f"support search stopped after {nodes} subsets")
            nodes += 1
            sub = SparseIntMatrix(M.rows, size, {(i, c): v for c, j in enumerate(combo) for i, v in cols[j].items()})
            fs = FieldSolver(sub, R)
            y = fs.solve({i: v for i, v in enumerate(b) if v % R.characteristic})
            if y is not None and len(y) == size:
                vec = [0] * n
                for c, j in enumerate(combo):
                    vec[j] = y[c]
                w = _witness(X, k, R, vec)
                return FillingResult(OPTIMAL_STATUS, w, mass(w), size, nodes, note="support search")
    w = _witness(X, k, R, x0.tolist())
    return FillingResult(OPTIMAL_STATUS, w, mass(w), mass(w), nodes, note="support search")


# -- profiles -------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileTable:
    ring: Ring
    dim: int
    rows: tuple  # (x, max_mass, n_unfillable) for x = 0..x_max
    complete: bool  # False when the cycle enumeration hit its cap
    cycles: int
    truncated_by_window: bool  # integral sweeps only see a coefficient window

    @property
    def is_lower_bound(self) -> bool:
        return self.truncated_by_window or not self.complete


def enumerate_cycles(X: CellComplex, n: int, ring: Ring, max_mass, window: int, cap: int | None = None):
    """Nonzero n-cycles of mass <= max_mass, one per sign/scalar class.

    Over Z/pZ all coefficients are used and the first nonzero one is 1; otherwise
    integer coefficients in [-window, window] with first nonzero coefficient
    positive.  Returns (cycles, complete).
    """
    ids = X.ids(n)
    M = X.boundary_matrix(n)
    cols = M.columns()
    p = ring.characteristic
    if ring.is_finite:
        values = list(range(1, p))
        cost = lambda v: 1  # noqa: E731
    else:
        values = [v for w in range(1, window + 1) for v in (w, -w)]
        cost = abs
    last = {}
    for j, col in enumerate(cols):
        for i in col:
            last[i] = j
    closing = [[] for _ in ids]
    for i, j in last.items():
        closing[j].append(i)
    out = []
    vec = [0] * len(ids)
    acc = [0] * M.rows
    state = {"complete": True}

    def ok_rows(j):
        for i in closing[j]:
            if (acc[i] % p) if p else acc[i]:
                return False
        return True

    def dfs(j, budget, started):
        if cap is not None and len(out) >= cap:
            state["complete"] = False
            return
        if j == len(ids):
            if started:
                out.append(Chain(X, n, ring if ring.is_finite else Z, {ids[t]: v for t, v in enumerate(vec) if v}))
            return
        if not started:
            opts = [0] + ([1] if ring.is_finite else list(range(1, window + 1)))
        else:
            opts = [0] + values
        for v in opts:
            c = cost(v) if v else 0
            if c > budget:
                continue
            vec[j] = v
            for i, inc in cols[j].items():
                acc[i] += inc * v
            if ok_rows(j):
                dfs(j + 1, budget - c, started or v != 0)
            for i, inc in cols[j].items():
                acc[i] -= inc * v
            vec[j] = 0

    if n == 0:
        # every 0-chain is a cycle
        closing = [[] for _ in ids]
    dfs(0, max_mass, False)
    return out, state["complete"]


def fv_profile(X: CellComplex, n: int, ring: Ring, x_max: int, coeff_window: int = 1,
               budget: Budget | None = None, mode: str = "ring", workers: int = 1) -> ProfileTable:
    """Largest filling volume among cycles of mass <= x, for x = 0..x_max.

    ``mode="ring"`` enumerates cycles over Z/pZ itself when the ring is finite;
    ``mode="reduction"`` uses reductions of windowed integral cycles instead.
    """
    budget = budget or Budget()
    if mode not in ("ring", "reduction"):
        raise ValueError(f"unknown profile mode {mode!r}")
    enum_ring = ring if (ring.is_finite and mode == "ring") else Z
    cycles, complete = enumerate_cycles(X, n, enum_ring, x_max, coeff_window, cap=budget.kernel)
    if ring.is_finite and mode == "reduction":
        seen, reduced = set(), []
        for c in cycles:
            r = change_ring(c, ring)
            if r and r not in seen:
                seen.add(r)
                reduced.append((mass(r), r))
        items = reduced
    else:
        items = [(mass(c), c) for c in cycles]

    def solve(item):
        m, c = item
        return m, fvol(FillingProblem(c, ring, budget))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, items))
    else:
        results = [solve(it) for it in items]
    rows = []
    any_budget = False
    for x in range(x_max + 1):
        best = 0
        unf = 0
        for m, res in results:
            if m > x:
                continue
            if res.status == UNFILLABLE:
                unf += 1
            else:
                any_budget |= res.status == BUDGET_EXCEEDED
                best = max(best, res.mass)
        rows.append((x, best, unf))
    return ProfileTable(ring, n, tuple(rows), complete and not any_budget, len(items),
                        truncated_by_window=not (ring.is_finite and mode == "ring"))
