"""Fixture complexes (at most 12 top cells) and the cycles tested on them."""

from __future__ import annotations

import json
import math
import random
from fractions import Fraction
from pathlib import Path

from homfill.builders.basic import (
    annulus, block3, circle, cube_surface, grid_disk, interval, klein_bottle, sphere, square, torus,
    wedge_of_circles,
)
from homfill.builders.double import fan, toy_double
from homfill.builders.flag import core_loop, kq_cw
from homfill.complex import Chain, boundary
from homfill.linalg import FieldSolver
from homfill.rings import Q, Z

FROZEN = Path(__file__).parent / "data" / "oracle_values.json"
RINGS = ("Z", "Q", "mod:2", "mod:3", "scaled:3")


def fixture_complexes():
    return [
        circle(3), interval(3), wedge_of_circles(2), grid_disk(2), grid_disk(3), square(), torus(2, 2),
        klein_bottle(2, 2), annulus(4, 1), sphere(), cube_surface(), block3(2), fan(3),
        toy_double(1).complex, toy_double(2).complex, kq_cw(2), kq_cw(3), kq_cw(5),
    ]


def _small_cycles(X, k):
    """Integral k-cycles with entries in {-2..2} from a rational kernel basis."""
    out = []
    for vec in FieldSolver(X.boundary_matrix(k), Q).kernel():
        den = 1
        for v in vec.values():
            den = math.lcm(den, Fraction(v).denominator)
        ints = {j: int(Fraction(v) * den) for j, v in vec.items()}
        if all(abs(v) <= 2 for v in ints.values()):
            ids = X.ids(k)
            out.append(Chain(X, k, Z, {ids[j]: v for j, v in ints.items()}))
    return out


def fixture_cycles(X, seed=7):
    """(label, cycle) pairs: boundaries of seeded top-cell combinations plus homology cycles."""
    rng = random.Random(f"{seed}:{X.name}")
    n = X.dimension
    tops = X.ids(n)
    out = [("d_first", boundary(Chain.cell(X, tops[0])))]
    if len(tops) > 1:
        out.append(("d_all", boundary(Chain(X, n, Z, {c: 1 for c in tops}))))
    for t in range(3):
        coeffs = {c: rng.choice((-1, 0, 1, 1)) for c in tops}
        ch = Chain(X, n, Z, coeffs)
        if not ch.is_zero():
            out.append((f"d_rand{t}", boundary(ch)))
    if len(tops) > 1:
        out.append(("d_mixed", boundary(Chain(X, n, Z, {tops[0]: 2, tops[-1]: -1}))))
    for i, c in enumerate(_small_cycles(X, n - 1)[:2]):
        out.append((f"ker{i}", c))
    if X.name.startswith("K"):
        q = int(X.name[1:])
        loop = core_loop(X)
        out.append(("core", loop))
        out.append((f"{q}core", loop * q))
    seen, uniq = set(), []
    for label, c in out:
        key = tuple(c.items())
        if key not in seen and not c.is_zero():
            seen.add(key)
            uniq.append((f"{X.name}/{label}", c))
    return uniq


def all_instances():
    return [(name, c) for X in fixture_complexes() for name, c in fixture_cycles(X)]


def load_frozen():
    with open(FROZEN, encoding="utf-8") as fh:
        return json.load(fh)
