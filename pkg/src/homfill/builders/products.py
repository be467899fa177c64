"""Cellular products, with d(s x t) = ds x t + (-1)^dim(s) s x dt."""

from __future__ import annotations

from ..complex import Cell, CellComplex
from .basic import wedge_of_circles


def product_id(a: str, b: str) -> str:
    return f"{a}*{b}"


def product(X: CellComplex, Y: CellComplex, name: str | None = None) -> CellComplex:
    cells = []
    for s in X.cells():
        for t in Y.cells():
            bd = [(product_id(f, t.id), i) for f, i in s.boundary]
            sign = -1 if s.dim % 2 else 1
            bd += [(product_id(s.id, f), sign * i) for f, i in t.boundary]
            cells.append(Cell(product_id(s.id, t.id), s.dim + t.dim, tuple(bd)))
    return CellComplex(cells, name=name or f"{X.name}x{Y.name}",
                       provenance={"builder": "product", "left": X.name, "right": Y.name})


def product_with_wedge(X: CellComplex, copies: int) -> CellComplex:
    """X times (S1 v S1)^copies."""
    if copies < 0:
        raise ValueError("copies must be non-negative")
    out = X
    for i in range(copies):
        W = wedge_of_circles(2)
        W = CellComplex([Cell(f"{c.id}{i}" if c.dim else f"o{i}", c.dim) for c in W.cells()], name="W2")
        out = product(out, W, name=f"{X.name}xW2^{i + 1}")
    if copies:
        out.provenance.update({"builder": "product_with_wedge", "base": X.name, "copies": str(copies)})
    return out
