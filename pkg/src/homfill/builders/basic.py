"""Small hand-built complexes: squares, grids, surfaces, intervals and circles."""

from __future__ import annotations

from ..complex import Cell, CellComplex, Chain, boundary
from ..rings import Z


def point() -> CellComplex:
    return CellComplex([Cell("o", 0)], name="point", provenance={"builder": "point"})


def interval(n: int = 1, prefix: str = "t") -> CellComplex:
    """A path of n edges t0 -> t1 -> ... -> tn."""
    cells = [Cell(f"{prefix}{i}", 0) for i in range(n + 1)]
    cells += [Cell(f"{prefix}e{i}", 1, ((f"{prefix}{i}", -1), (f"{prefix}{i + 1}", 1))) for i in range(n)]
    return CellComplex(cells, name=f"I{n}", provenance={"builder": "interval", "n": str(n)})


def circle(n: int = 1, prefix: str = "c") -> CellComplex:
    """A circle with n vertices and n edges (one loop edge when n = 1)."""
    cells = [Cell(f"{prefix}{i}", 0) for i in range(n)]
    if n == 1:
        cells.append(Cell(f"{prefix}e0", 1))
    else:
        cells += [Cell(f"{prefix}e{i}", 1, ((f"{prefix}{i}", -1), (f"{prefix}{(i + 1) % n}", 1))) for i in range(n)]
    return CellComplex(cells, name=f"S1_{n}", provenance={"builder": "circle", "n": str(n)})


def wedge_of_circles(k: int) -> CellComplex:
    cells = [Cell("o", 0)] + [Cell(f"l{i}", 1) for i in range(1, k + 1)]
    return CellComplex(cells, name=f"W{k}", provenance={"builder": "wedge", "k": str(k)})


def _grid(nx_: int, ny: int, wrap_x=False, wrap_y=False, twist_y=False, name="grid") -> CellComplex:
    """Square grid on [0,nx] x [0,ny] with optional identifications.

    ``twist_y`` glues the top to the bottom with x reversed (Klein bottle).
    """

    def flip(i):  # x-coordinate after crossing the top edge of a twisted grid
        return (-i) % nx_ if wrap_x else nx_ - i

    def vert(i, j):
        if wrap_y and j == ny:
            j = 0
            if twist_y:
                i = flip(i)
        if wrap_x and i == nx_:
            i = 0
        return f"v{i}_{j}"

    cols_x = nx_ + (0 if wrap_x else 1)
    rows_y = ny + (0 if wrap_y else 1)
    cells = {}
    for i in range(cols_x):
        for j in range(rows_y):
            cells[f"v{i}_{j}"] = Cell(f"v{i}_{j}", 0)

    def hedge(i, j):  # edge (i,j) -> (i+1,j) as (id, sign)
        if wrap_y and j == ny:
            if twist_y:
                # the top row is the bottom row traversed backwards
                return f"h{flip(i + 1)}_0", -1
            return f"h{i}_0", 1
        return f"h{i}_{j}", 1

    def vedge(i, j):
        if wrap_x and i == nx_:
            return f"u0_{j}", 1
        return f"u{i}_{j}", 1

    for i in range(nx_):
        for j in range(rows_y):
            hid = f"h{i}_{j}"
            cells[hid] = Cell(hid, 1, ((vert(i, j), -1), (vert(i + 1, j), 1)))
    for i in range(cols_x):
        for j in range(ny):
            uid = f"u{i}_{j}"
            cells[uid] = Cell(uid, 1, ((vert(i, j), -1), (vert(i, j + 1), 1)))
    for i in range(nx_):
        for j in range(ny):
            b, sb = hedge(i, j)
            t, st = hedge(i, j + 1)
            r, sr = vedge(i + 1, j)
            l_, sl = vedge(i, j)
            sid = f"s{i}_{j}"
            cells[sid] = Cell(sid, 2, ((b, sb), (r, sr), (t, -st), (l_, -sl)))
    return CellComplex(cells.values(), name=name, provenance={"builder": name, "nx": str(nx_), "ny": str(ny)})


def grid_disk(k: int) -> CellComplex:
    """The k x k square grid (a disk of k^2 squares, perimeter 4k)."""
    return _grid(k, k, name=f"disk{k}")


def rectangle(a: int, b: int) -> CellComplex:
    return _grid(a, b, name=f"rect{a}x{b}")


def square() -> CellComplex:
    return _grid(1, 1, name="square")


def torus(a: int = 2, b: int = 2) -> CellComplex:
    return _grid(a, b, wrap_x=True, wrap_y=True, name=f"torus{a}x{b}")


def annulus(a: int = 4, b: int = 1) -> CellComplex:
    return _grid(a, b, wrap_x=True, name=f"annulus{a}x{b}")


def klein_bottle(a: int = 2, b: int = 2) -> CellComplex:
    return _grid(a, b, wrap_x=True, wrap_y=True, twist_y=True, name=f"klein{a}x{b}")


def sphere() -> CellComplex:
    """Two squares glued along their common boundary."""
    X = square()
    cells = list(X.cells())
    top = X.cell("s0_0")
    cells.append(Cell("s1", 2, top.boundary))
    return CellComplex(cells, name="sphere", provenance={"builder": "sphere"})


def cube_surface() -> CellComplex:
    """Boundary of the unit cube: 8 vertices, 12 edges, 6 squares."""
    from .products import product

    I = interval(1)  # noqa: E741
    block = product(product(I, interval(1, "p")), interval(1, "w"))
    faces = [c.id for c in block.cells() if c.dim < 3]
    return block.restrict(faces, name="cube_surface")


def block3(n: int = 2) -> CellComplex:
    """A row of n unit cubes."""
    from .products import product

    return product(product(interval(n), interval(1, "p")), interval(1, "w"))


def grid_boundary_loop(X: CellComplex, k: int) -> Chain:
    """Boundary loop of ``grid_disk(k)``."""
    squares = Chain(X, 2, Z, {f"s{i}_{j}": 1 for i in range(k) for j in range(k)})
    return boundary(squares)
