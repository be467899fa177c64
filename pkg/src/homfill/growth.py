"""Growth-rate bookkeeping: the exponents e_n, the family f_{d,n}, finite-scale domination
checks and log-log slope fits.

Domination: f <= g when f(x) <= C g(Cx + C) + Cx + C for some C > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

POWER_LAW = "PowerLaw"
STRETCHED_EXP = "StretchedExp"
TABLE = "TableData"
INF = math.inf

SPARSE_CAVEAT = (
    "caveat: these points are sparse; agreement on a sparse sequence of x does not "
    "show domination for all large x, because growth can oscillate between the sampled points"
)


# -- exponents ---------------------------------------------------------------------------


def u_exponent(n: int) -> Fraction:
    """e_1 = 5 and e_n = 1 + (n+1)/n * e_{n-1}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    e = Fraction(5)
    for k in range(2, n + 1):
        e = 1 + Fraction(k + 1, k) * e
    return e


def u_exponent_closed(n: int) -> Fraction:
    """(n+1) [5/2 + sum_{k=3}^{n+1} 1/k]."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return (n + 1) * (Fraction(5, 2) + sum((Fraction(1, k) for k in range(3, n + 2)), Fraction(0)))


def u_exponents(n_max: int) -> list[Fraction]:
    out, e = [], Fraction(5)
    for k in range(1, n_max + 1):
        if k > 1:
            e = 1 + Fraction(k + 1, k) * e
        out.append(e)
    return out


def log_bound(n: int) -> float:
    """(n+1)(ln(n+1) + 2)."""
    return (n + 1) * (math.log(n + 1) + 2)


def bound_margin(n: int, e: Fraction | None = None) -> float:
    e = u_exponent(n) if e is None else e
    return log_bound(n) - float(e)


# -- growth functions --------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthSpec:
    kind: str
    exponent: Fraction | None = None  # PowerLaw
    root: int | None = None  # StretchedExp: exp(x^(1/root))
    points: tuple = ()  # TableData: ((x, y), ...) with x strictly increasing
    provenance: str = ""

    def __post_init__(self):
        if self.kind == POWER_LAW:
            object.__setattr__(self, "exponent", Fraction(self.exponent))
        elif self.kind == STRETCHED_EXP:
            if not self.root or self.root < 1:
                raise ValueError("stretched exponential needs a root n >= 1")
        elif self.kind == TABLE:
            pts = tuple((Fraction(x), Fraction(y)) for x, y in self.points)
            if any(pts[i + 1][0] <= pts[i][0] for i in range(len(pts) - 1)):
                raise ValueError("table x values must be strictly increasing")
            object.__setattr__(self, "points", pts)
        else:
            raise ValueError(f"unknown growth kind {self.kind!r}")

    @classmethod
    def power(cls, exponent, provenance: str = "") -> "GrowthSpec":
        return cls(POWER_LAW, exponent=exponent, provenance=provenance)

    @classmethod
    def stretched(cls, n: int, provenance: str = "") -> "GrowthSpec":
        return cls(STRETCHED_EXP, root=n, provenance=provenance)

    @classmethod
    def table(cls, points, provenance: str = "") -> "GrowthSpec":
        return cls(TABLE, points=tuple(points), provenance=provenance)

    @property
    def is_symbolic(self) -> bool:
        return self.kind != TABLE

    def __call__(self, x) -> float:
        if self.kind == POWER_LAW:
            return float(x) ** float(self.exponent)
        if self.kind == STRETCHED_EXP:
            return math.exp(float(x) ** (1.0 / self.root))
        # step function: the last table value at or below x (tables are nondecreasing in practice)
        val = None
        for px, py in self.points:
            if px <= x:
                val = py
        if val is None:
            raise ValueError(f"{x} lies below the table")
        return float(val)


def f_dn_spec(d, n: int) -> GrowthSpec:
    if n < 1:
        raise ValueError("n must be at least 1")
    if d == INF or d is None:
        return GrowthSpec.stretched(n)
    return GrowthSpec.power(Fraction(d, n))


@dataclass(frozen=True)
class FValue:
    value: Fraction | float
    exact: bool


def _exact_root(x: Fraction, k: int) -> Fraction | None:
    def iroot(m: int):
        if m < 0:
            return None
        r = round(m ** (1.0 / k)) if m else 0
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** k == m:
                return c
        lo, hi = 0, m
        while lo <= hi:
            mid = (lo + hi) // 2
            v = mid ** k
            if v == m:
                return mid
            if v < m:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    a, b = iroot(x.numerator), iroot(x.denominator)
    return None if a is None or b is None else Fraction(a, b)


def f_dn(d, n: int, x) -> FValue:
    """exp(x^(1/n)) when d is infinite, x^(d/n) otherwise.

    Exact (a Fraction) when the power is rational at a rational point; a float
    otherwise, flagged by ``exact=False``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    x = Fraction(x)
    if x < 0:
        raise ValueError("x must be non-negative")
    if d == INF or d is None:
        if x == 0:
            return FValue(Fraction(1), True)
        return FValue(math.exp(float(x) ** (1.0 / n)), False)
    e = Fraction(d, n)
    r = _exact_root(x, e.denominator)
    if r is not None:
        return FValue(r ** e.numerator, True)
    return FValue(float(x) ** float(e), False)


# -- domination ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreceqReport:
    holds: bool
    C: Fraction | None
    x_max: Fraction | None
    violating_x: Fraction | None
    message: str
    caveat: str | None = None


def _symbolic_preceq(f: GrowthSpec, g: GrowthSpec) -> bool:
    if f.kind == POWER_LAW and g.kind == POWER_LAW:
        return f.exponent <= g.exponent
    if f.kind == POWER_LAW:
        return True  # every power is below exp(x^(1/n))
    if g.kind == POWER_LAW:
        return False
    return f.root >= g.root  # exp(x^(1/n)) <= exp(x^(1/m)) iff 1/n <= 1/m, up to rescaling


def _first_violation(f: GrowthSpec, g: GrowthSpec, c: Fraction):
    for k in range(0, 1025):
        x = Fraction(2) ** k
        try:
            lhs, rhs = f(x), float(c) * g(c * x + c) + float(c * x + c)
        except OverflowError:
            return None
        if lhs > rhs:
            return x
    return None


DEFAULT_GRID = tuple(Fraction(2) ** k for k in range(0, 21))


def _is_sparse(xs) -> bool:
    if len(xs) < 4:
        return True
    return any(xs[i + 1] > 2 * xs[i] for i in range(len(xs) - 1) if xs[i] > 0)


def preceq_check(f: GrowthSpec, g: GrowthSpec, C=None, grid=DEFAULT_GRID) -> PreceqReport:
    """Test f(x) <= C g(Cx + C) + Cx + C.

    Two symbolic specs are compared by growth class.  Otherwise f must be a
    table and the inequality is checked at its points, for the given C or for
    the smallest C on ``grid`` that works; the verdict only covers the sampled
    range.
    """
    if f.is_symbolic and g.is_symbolic:
        ok = _symbolic_preceq(f, g)
        c = Fraction(C) if C is not None else Fraction(1)
        if ok:
            if C is None:
                return PreceqReport(True, None, None, None, "holds by comparison of growth classes")
            bad = _first_violation(f, g, c)
            if bad is None:
                return PreceqReport(True, c, None, None,
                                    f"holds by comparison of growth classes; C={c} shows no violation on x = 2^k")
            return PreceqReport(True, None, None, bad,
                                f"holds by comparison of growth classes, but C={c} is too small "
                                f"(violated at x={bad}); a larger C works")
        bad = _first_violation(f, g, c)
        return PreceqReport(False, None, None, bad,
                            f"fails by comparison of growth classes; with C={c} the first violation "
                            f"on x = 2^k is x={bad}")
    if f.is_symbolic:
        raise ValueError("compare a table against a table or a symbolic spec, not the reverse")
    xs = [x for x, _ in f.points]
    cands = [Fraction(C)] if C is not None else list(grid)
    caveat = SPARSE_CAVEAT if _is_sparse(xs) else None
    worst = None
    for c in cands:
        bad = None
        checked = []
        for x, y in f.points:
            arg = c * x + c
            if not g.is_symbolic and arg > g.points[-1][0]:
                continue  # beyond the comparison table
            rhs = float(c) * g(arg) + float(c * x + c)
            checked.append(x)
            if float(y) > rhs:
                bad = x
                break
        if bad is None and checked:
            return PreceqReport(True, c, max(checked), None,
                                f"holds up to x_max={max(checked)} with C={c}", caveat)
        worst = bad if bad is not None else worst
    return PreceqReport(False, None, max(xs), worst,
                        f"no C on the grid works; first violation at x={worst}" if worst is not None
                        else "no table point could be compared", caveat)


# -- slope fits ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual: float  # root-mean-square residual in log-log space
    n_points: int


def slope_fit(points) -> SlopeFit:
    """Least-squares slope of log y against log x."""
    if isinstance(points, GrowthSpec):
        points = points.points
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise ValueError("slope fit needs at least 3 points")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("slope fit needs positive data")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    if np.ptp(lx) == 0 or np.ptp(ly) == 0:
        raise ValueError("degenerate table: constant x or y")
    A = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, intercept]) - ly) ** 2)))
    return SlopeFit(float(slope), float(intercept), resid, len(pts))
