"""Brute-force reference solvers, sharing no code with the package's solvers.

Every oracle searches coefficient vectors directly: depth-first over the
cells, closing each boundary row as soon as its last cell is fixed, with an
iterative-deepening mass budget so the first hit is the minimum.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def _columns(X, k):
    ids = X.ids(k)
    rows = {c: i for i, c in enumerate(X.ids(k - 1))}
    cols = []
    for cid in ids:
        col = {}
        for face, inc in X.cell(cid).boundary:
            col[rows[face]] = col.get(rows[face], 0) + inc
        cols.append({i: v for i, v in col.items() if v})
    return ids, cols, len(rows)


def _closing(cols, n_rows):
    last = {}
    for j, col in enumerate(cols):
        for i in col:
            last[i] = j
    out = [[] for _ in cols]
    for i, j in last.items():
        out[j].append(i)
    untouched = [i for i in range(n_rows) if i not in last]
    return out, untouched


def _search(cols, n_rows, target, values, cost, budget, p=None):
    """Some vector with M x = target and total cost <= budget, or None."""
    closing, untouched = _closing(cols, n_rows)
    red = (lambda v: v % p) if p else (lambda v: v)
    if any(red(target[i]) for i in untouched):
        return "never"
    acc = [0] * n_rows
    x = [0] * len(cols)

    def dfs(j, left):
        if j == len(cols):
            return True
        for v in values:
            c = cost(v)
            if c > left:
                continue
            for i, a in cols[j].items():
                acc[i] += a * v
            if all(red(acc[i] - target[i]) == 0 for i in closing[j]) and dfs(j + 1, left - c):
                x[j] = v
                return True
            for i, a in cols[j].items():
                acc[i] -= a * v
        return False

    return list(x) if dfs(0, budget) else None


def _deepen(cols, n_rows, target, values, cost, max_budget, p=None):
    for b in range(0, max_budget + 1):
        got = _search(cols, n_rows, target, values, cost, b, p)
        if got == "never":
            return None, None
        if got is not None:
            return b, got
    return None, None


def _target(alpha, X, k, scale=1):
    rows = {c: i for i, c in enumerate(X.ids(k - 1))}
    t = [0] * len(rows)
    for cid, v in alpha.items():
        t[rows[cid]] = Fraction(v) * scale
    if any(Fraction(v).denominator != 1 for v in t):
        raise ValueError("oracle targets must be integral")
    return [int(v) for v in t]


def _window(w):
    return sorted(range(-w, w + 1), key=lambda v: (abs(v), -v))


def fvol_integral(alpha, window=3):
    """Minimal l1 filling with coefficients in [-window, window], or None."""
    X, k = alpha.complex, alpha.dim + 1
    ids, cols, n = _columns(X, k)
    t = _target(alpha, X, k)
    m, _ = _deepen(cols, n, t, _window(window), abs, window * len(cols))
    return m


def fvol_scaled(alpha, q, window=3):
    """Over (1/q)Z: integral fillings of q*alpha with window q*window, divided by q."""
    X, k = alpha.complex, alpha.dim + 1
    ids, cols, n = _columns(X, k)
    t = _target(alpha, X, k, scale=q)
    w = q * window
    m, _ = _deepen(cols, n, t, _window(w), abs, w * len(cols))
    return None if m is None else Fraction(m, q)


def fvol_modp(alpha, p):
    """Minimal support of a filling over Z/pZ, exhaustively."""
    X, k = alpha.complex, alpha.dim + 1
    ids, cols, n = _columns(X, k)
    t = _target(alpha, X, k)
    values = list(range(p))
    m, _ = _deepen(cols, n, t, values, lambda v: 1 if v else 0, len(cols), p)
    return m


def _solve_square(A, b):
    """Exact Gauss-Jordan on a list-of-rows system; the unique solution or None."""
    n_rows, n_cols = len(A), len(A[0]) if A else 0
    M = [[Fraction(v) for v in row] + [Fraction(bb)] for row, bb in zip(A, b)]
    r = 0
    piv = []
    for c in range(n_cols):
        k = next((i for i in range(r, n_rows) if M[i][c] != 0), None)
        if k is None:
            return None  # dependent columns
        M[r], M[k] = M[k], M[r]
        s = M[r][c]
        M[r] = [v / s for v in M[r]]
        for i in range(n_rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    if any(M[i][-1] != 0 for i in range(r, n_rows)):
        return None
    return [M[i][-1] for i in range(n_cols)]


def fvol_rational(alpha):
    """Over Q: the l1 minimum is attained at a basic solution, so try every independent support."""
    X, k = alpha.complex, alpha.dim + 1
    ids, cols, n = _columns(X, k)
    t = _target(alpha, X, k) if all(Fraction(v).denominator == 1 for _, v in alpha.items()) else None
    if t is None:
        rows = {c: i for i, c in enumerate(X.ids(k - 1))}
        t = [Fraction(0)] * n
        for cid, v in alpha.items():
            t[rows[cid]] = Fraction(v)
    if not any(t):
        return Fraction(0)
    best = None
    for size in range(1, min(len(cols), n) + 1):
        for S in itertools.combinations(range(len(cols)), size):
            A = [[cols[j].get(i, 0) for j in S] for i in range(n)]
            x = _solve_square(A, t)
            if x is not None:
                m = sum(abs(v) for v in x)
                best = m if best is None or m < best else best
    return best


def min_lift(X, alpha, p):
    """Least-mass integral 1-cycle reducing to alpha mod p, searching |coeff| <= p * mass(alpha)."""
    ids, cols, n = _columns(X, 1)
    base = {cid: int(v) % p for cid, v in alpha.items()}
    bound = p * sum(1 for v in base.values() if v)
    values_for = []
    for cid in ids:
        r = base.get(cid, 0)
        vals = [v for v in range(-bound, bound + 1) if (v - r) % p == 0]
        values_for.append(sorted(vals, key=abs))
    # search with per-column value lists
    closing, _ = _closing(cols, n)
    acc = [0] * n

    def dfs(j, left):
        if j == len(cols):
            return True
        for v in values_for[j]:
            if abs(v) > left:
                break
            for i, a in cols[j].items():
                acc[i] += a * v
            ok = all(acc[i] == 0 for i in closing[j]) and dfs(j + 1, left - abs(v))
            for i, a in cols[j].items():
                acc[i] -= a * v
            if ok:
                return True
        return False

    for b in range(0, bound + 1):
        if dfs(0, b):
            return b
    return None
