"""Exact linear algebra over Z, Q and Z/pZ: Smith normal form, ranks, solves, homology.

Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .complex import CellComplex, Chain, boundary
from .rings import Q, Ring, Z
from .sparse import SparseIntMatrix

DENSE_LIMIT = 64


class NotACycleError(ValueError):
    pass


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    diag: tuple[int, ...]  # length min(rows, cols), divisibility chain, zeros last
    U: tuple[tuple[int, ...], ...]  # rows x rows, unimodular
    V: tuple[tuple[int, ...], ...]  # cols x cols, unimodular

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diag if d)


def _min_entry(A, t, rows, cols):
    best = None
    for i in rows:
        Ai = A[i]
        for j in cols:
            v = Ai[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return best


def smith_normal_form(M: SparseIntMatrix) -> SmithForm:
    """Dense Smith normal form with unimodular transforms, ``U @ M @ V == diag``.

    Pivot choice: smallest absolute value, ties broken by (row, col).
    """
    m, n = M.rows, M.cols
    A = M.to_dense()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst, src, k):  # row_dst += k * row_src
        Ad, As, Ud, Us = A[dst], A[src], U[dst], U[src]
        for j in range(n):
            if As[j]:
                Ad[j] += k * As[j]
        for j in range(m):
            if Us[j]:
                Ud[j] += k * Us[j]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for row in A:
            if row[src]:
                row[dst] += k * row[src]
        for row in V:
            if row[src]:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        best = _min_entry(A, t, range(t, m), range(t, n))
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
    diag = tuple(A[t][t] for t in range(min(m, n)))
    return SmithForm(diag, tuple(map(tuple, U)), tuple(map(tuple, V)))


def _normalize_divisibility(values: list[int]) -> list[int]:
    d = sorted(abs(v) for v in values if v)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return sorted(d)


def _sparse_invariant_factors(M: SparseIntMatrix) -> list[int]:
    rows = {i: r for i, r in enumerate(M.row_dicts()) if r}
    colrows: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            colrows.setdefault(j, set()).add(i)

    def add_row(dst, src, k):
        rd, rs = rows[dst], rows[src]
        for j, v in rs.items():
            nv = rd.get(j, 0) + k * v
            if nv:
                if j not in rd:
                    colrows[j].add(dst)
                rd[j] = nv
            elif j in rd:
                del rd[j]
                colrows[j].discard(dst)

    diag = []
    while rows:
        _, i, j = min((abs(v), i, j) for i, r in rows.items() for j, v in r.items())
        while True:
            p = rows[i][j]
            # clear column j with row operations
            for r in sorted(colrows[j] - {i}):
                add_row(r, i, -(rows[r][j] // p))
            rest = [(abs(rows[r][j]), r) for r in colrows[j] if r != i]
            if rest:
                i = min(rest)[1]
                continue
            # column j now meets only row i, so column operations touch row i alone
            for c in sorted(k for k in rows[i] if k != j):
                nv = rows[i][c] - (rows[i][c] // p) * p
                if nv:
                    rows[i][c] = nv
                else:
                    del rows[i][c]
                    colrows[c].discard(i)
            rest = [(abs(v), c) for c, v in rows[i].items() if c != j]
            if not rest:
                break
            j = min(rest)[1]
        diag.append(abs(rows[i][j]))
        del rows[i]
        colrows[j].discard(i)
        for r in [r for r, row in rows.items() if not row]:
            del rows[r]
    return _normalize_divisibility(diag)


def invariant_factors(M: SparseIntMatrix) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    if M.rows <= DENSE_LIMIT and M.cols <= DENSE_LIMIT:
        return list(smith_normal_form(M).invariant_factors)
    return _sparse_invariant_factors(M)


# --------------------------------------------------------------------------
# Field elimination


class _Field:
    def __init__(self, ring: Ring):
        if not ring.is_field:
            raise ValueError(f"{ring} is not a field")
        self.p = ring.characteristic

    def conv(self, v):
        return v % self.p if self.p else Fraction(v)

    def inv(self, v):
        return pow(v, -1, self.p) if self.p else 1 / v

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b


class FieldSolver:
    """Reduced row echelon form of a matrix over Q or Z/pZ, reusable across right-hand sides."""

    def __init__(self, M: SparseIntMatrix, ring: Ring):
        F = _Field(ring)
        self.ring = ring
        self.shape = (M.rows, M.cols)
        rows = []
        for i, r in enumerate(M.row_dicts()):
            rr = {j: F.conv(v) for j, v in r.items()}
            rows.append(({j: v for j, v in rr.items() if v}, {i: F.conv(1)}))
        pivots: list[int] = []
        rank = 0
        for col in range(M.cols):
            piv = next((k for k in range(rank, len(rows)) if col in rows[k][0]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            a, t = rows[rank]
            s = F.inv(a[col])
            a = {j: F.mul(v, s) for j, v in a.items()}
            t = {j: F.mul(v, s) for j, v in t.items()}
            rows[rank] = (a, t)
            for k in range(len(rows)):
                if k == rank:
                    continue
                ak, tk = rows[k]
                f = ak.get(col)
                if not f:
                    continue
                for j, v in a.items():
                    nv = F.sub(ak.get(j, 0), F.mul(f, v))
                    if nv:
                        ak[j] = nv
                    else:
                        ak.pop(j, None)
                for j, v in t.items():
                    nv = F.sub(tk.get(j, 0), F.mul(f, v))
                    if nv:
                        tk[j] = nv
                    else:
                        tk.pop(j, None)
            pivots.append(col)
            rank += 1
        self._F = F
        self.rank = rank
        self.pivots = tuple(pivots)
        self._rows = rows

    def solve(self, b: dict[int, object]):
        """Particular solution (free variables zero) as {col: value}, or None if infeasible."""
        F = self._F
        b = {i: F.conv(v) for i, v in b.items() if F.conv(v)}
        if not b:
            return {}
        tb = []
        for _, t in self._rows:
            acc = F.conv(0)
            for i, v in t.items():
                if i in b:
                    acc = acc + F.mul(v, b[i])
            tb.append(F.conv(acc))
        if any(tb[k] for k in range(self.rank, len(tb))):
            return None
        return {self.pivots[k]: tb[k] for k in range(self.rank) if tb[k]}

    def kernel(self) -> list[dict[int, object]]:
        F = self._F
        pivset = set(self.pivots)
        basis = []
        for f in range(self.shape[1]):
            if f in pivset:
                continue
            vec = {f: F.conv(1)}
            for k in range(self.rank):
                v = self._rows[k][0].get(f)
                if v:
                    vec[self.pivots[k]] = F.sub(0, v)
            basis.append(vec)
        return basis


def rank(M: SparseIntMatrix, ring: Ring = Z) -> int:
    if ring.is_field:
        return FieldSolver(M, ring).rank
    return len(invariant_factors(M))


# --------------------------------------------------------------------------
# Exact solves


@dataclass(frozen=True)
class SolveResult:
    feasible: bool
    particular: tuple | None  # dense solution vector, or None when infeasible
    kernel: tuple  # basis of the solution space of M x = 0 (Z-basis over Z)
    ring: Ring


def solve_exact(M: SparseIntMatrix, b, ring: Ring) -> SolveResult:
    """All solutions of ``M x = b`` over ``ring`` as particular + span(kernel)."""
    bvec = list(b)
    if len(bvec) != M.rows:
        raise ValueError(f"right-hand side has length {len(bvec)}, matrix has {M.rows} rows")
    n = M.cols
    if ring.is_field:
        fs = FieldSolver(M, ring)
        sol = fs.solve({i: v for i, v in enumerate(bvec) if v})
        zero = ring.zero()
        kernel = tuple(tuple(vec.get(j, zero) for j in range(n)) for vec in fs.kernel())
        if sol is None:
            return SolveResult(False, None, kernel, ring)
        return SolveResult(True, tuple(sol.get(j, zero) for j in range(n)), kernel, ring)
    if ring.kind == "scaled":
        # (1/q)Z-solutions of Mx = b are (1/q) times Z-solutions of My = q b
        q = ring.param
        inner = solve_exact(M, [int(Fraction(v) * q) for v in bvec], Z)
        part = None if inner.particular is None else tuple(Fraction(v, q) for v in inner.particular)
        kern = tuple(tuple(Fraction(v, q) for v in k) for k in inner.kernel)
        return SolveResult(inner.feasible, part, kern, ring)
    bvec = [int(v) for v in bvec]
    # rational solve first: infeasible over Q means infeasible over Z, and a
    # trivial kernel means the unique rational solution decides integrality
    fs = FieldSolver(M, Q)
    qsol = fs.solve({i: v for i, v in enumerate(bvec) if v})
    if qsol is None:
        return SolveResult(False, None, (), ring)
    if fs.rank == n:
        x = [qsol.get(j, Fraction(0)) for j in range(n)]
        if all(v.denominator == 1 for v in x):
            return SolveResult(True, tuple(int(v) for v in x), (), ring)
        return SolveResult(False, None, (), ring)
    snf = smith_normal_form(M)
    r = snf.rank
    y = [sum(u * v for u, v in zip(row, bvec)) for row in snf.U]
    kernel = tuple(tuple(snf.V[i][j] for i in range(n)) for j in range(r, n))
    if any(y[i] % snf.diag[i] for i in range(r)) or any(y[i] for i in range(r, M.rows)):
        return SolveResult(False, None, kernel, ring)
    z = [y[i] // snf.diag[i] for i in range(r)] + [0] * (n - r)
    x = tuple(sum(snf.V[i][j] * z[j] for j in range(n)) for i in range(n))
    return SolveResult(True, x, kernel, ring)


# --------------------------------------------------------------------------
# Homology


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    ring: Ring
    free_rank: int | None = None
    torsion: tuple[int, ...] | None = None
    field_dim: int | None = None

    def __post_init__(self):
        if self.ring.is_field:
            if self.field_dim is None or self.free_rank is not None or self.torsion is not None:
                raise ValueError("homology over a field records only field_dim")
            if self.field_dim < 0:
                raise ValueError("dimension must be non-negative")
        else:
            if self.free_rank is None or self.torsion is None or self.field_dim is not None:
                raise ValueError("integral homology records free_rank and torsion")
            if self.free_rank < 0:
                raise ValueError("free rank must be non-negative")
            t = self.torsion
            if any(d < 2 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
                raise ValueError(f"torsion {t} is not a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        if self.ring.is_field:
            return self.field_dim == 0
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        if self.ring.is_field:
            if not self.field_dim:
                return "0"
            base = "Q" if self.ring.kind == "Q" else f"F{self.ring.param}"
            return base if self.field_dim == 1 else f"{base}^{self.field_dim}"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def homology(X: CellComplex, k: int, ring: Ring = Z) -> HomologyGroup:
    if not 0 <= k <= X.dimension:
        raise ValueError(f"degree {k} outside 0..{X.dimension}")
    n_k = X.n_cells(k)
    d_k = X.boundary_matrix(k)
    d_k1 = X.boundary_matrix(k + 1)
    if ring.is_field:
        dim = n_k - rank(d_k, ring) - rank(d_k1, ring)
        return HomologyGroup(k, ring, field_dim=dim)
    inv = invariant_factors(d_k1)
    free = n_k - rank(d_k, Z) - len(inv)
    return HomologyGroup(k, Z if ring.kind == "scaled" else ring, free_rank=free,
                         torsion=tuple(d for d in inv if d > 1))


def chain_vector(c: Chain) -> list:
    X = c.complex
    vec = [c.ring.zero()] * X.n_cells(c.dim)
    for cid, v in c.items():
        vec[X.index(cid)] = v
    return vec


def is_boundary(alpha: Chain) -> bool:
    """Whether the cycle ``alpha`` bounds over its own ring."""
    if not boundary(alpha).is_zero():
        raise NotACycleError("is_boundary needs a cycle")
    if alpha.is_zero():
        return True
    X = alpha.complex
    M = X.boundary_matrix(alpha.dim + 1)
    return solve_exact(M, chain_vector(alpha), alpha.ring).feasible
