"""Exact rational simplex method (two-phase, Bland's rule).

Solves ``min c.x  s.t.  A x = b, x >= 0`` with Fraction arithmetic and
returns an optimal dual vector alongside the primal solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple | None = None
    value: Fraction | None = None
    dual: tuple | None = None  # y with y.A <= c and y.b == value
    pivots: int = 0


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows  # list of dict col -> Fraction
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r, col):
        row = self.rows[r]
        inv = 1 / row[col]
        if inv != 1:
            for j in row:
                row[j] *= inv
            self.rhs[r] *= inv
        for k, other in enumerate(self.rows):
            f = other.get(col)
            if k == r or not f:
                continue
            for j, v in row.items():
                nv = other.get(j, 0) - f * v
                if nv:
                    other[j] = nv
                else:
                    other.pop(j, None)
            self.rhs[k] -= f * self.rhs[r]
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost, allowed):
        """c_j - c_B B^-1 A_j for columns in ``allowed``."""
        red = {j: Fraction(cost.get(j, 0)) for j in allowed}
        for r, row in enumerate(self.rows):
            cb = cost.get(self.basis[r], 0)
            if not cb:
                continue
            for j, v in row.items():
                if j in red:
                    red[j] -= cb * v
        return red

    def run(self, cost, allowed):
        """Simplex iterations with Bland's rule; returns False when unbounded."""
        allowed = sorted(allowed)
        while True:
            red = self.reduced_costs(cost, allowed)
            enter = next((j for j in allowed if red[j] < 0), None)
            if enter is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row.get(enter)
                if a is not None and a > 0:
                    key = (self.rhs[r] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], enter)


def solve_lp(A, b, c) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0``, exactly.

    ``A`` is a list of m rows (sequences or {col: value} dicts) over n columns,
    where n = len(c).
    """
    n = len(c)
    m = len(b)
    art = list(range(n, n + m))
    rows, rhs, signs = [], [], []
    for i in range(m):
        src = A[i] if isinstance(A[i], dict) else {j: v for j, v in enumerate(A[i]) if v}
        s = -1 if b[i] < 0 else 1
        row = {j: Fraction(v) * s for j, v in src.items() if v}
        row[n + i] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(b[i]) * s)
        signs.append(s)
    T = _Tableau(rows, rhs, list(art))

    # phase 1: minimize the sum of artificials
    T.run({j: 1 for j in art}, range(n + m))
    if any(T.rhs[r] for r in range(m) if T.basis[r] >= n):
        return LPResult(INFEASIBLE, pivots=T.pivots)
    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(T.rows):
        if T.basis[r] >= n:
            col = next((j for j in sorted(T.rows[r]) if j < n), None)
            if col is None:
                del T.rows[r], T.rhs[r], T.basis[r]
                continue
            T.pivot(r, col)
        r += 1

    cost = {j: Fraction(v) for j, v in enumerate(c) if v}
    if not T.run(cost, range(n)):
        return LPResult(UNBOUNDED, pivots=T.pivots)

    x = [Fraction(0)] * n
    for r, j in enumerate(T.basis):
        x[j] = T.rhs[r]
    value = sum((cost.get(j, 0) * x[j] for j in range(n)), Fraction(0))
    # y' = c_B B^-1 is read off the artificial columns, then undo the row signs
    y = [Fraction(0)] * m
    for r, row in enumerate(T.rows):
        cb = cost.get(T.basis[r], 0)
        if cb:
            for i in range(m):
                v = row.get(n + i)
                if v:
                    y[i] += cb * v
    y = [yi * s for yi, s in zip(y, signs)]
    return LPResult(OPTIMAL, tuple(x), value, tuple(y), T.pivots)
