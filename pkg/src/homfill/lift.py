"""Lifting mod-p 1-cycles on graphs to integral cycles of controlled mass."""

from __future__ import annotations

import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment

from .complex import CellComplex, Chain, ComplexError, boundary
from .linalg import NotACycleError
from .rings import Z


def windowed(value: int, p: int) -> int:
    """Representative of value mod p in (-p/2, p/2]."""
    r = value % p
    return r - p if 2 * r > p else r


def _check_graph(X: CellComplex) -> None:
    if X.dimension > 1:
        raise ComplexError(f"{X.name} has cells of dimension {X.dimension}; lifting needs a graph")
    for e in X.ids(1):
        X.endpoints(e)  # raises on edges that are not graph edges


def _window_and_excess(X: CellComplex, alpha: Chain):
    p = alpha.ring.characteristic
    eta = {e: windowed(v, p) for e, v in alpha.items()}
    div = boundary(Chain(X, 1, Z, eta))
    # boundary of eta vanishes mod p, so it is p times an integral 0-chain
    excess = {v: c // p for v, c in div.items()}
    return eta, excess


def lift_modp_cycle(X: CellComplex, alpha: Chain, method: str = "flow") -> Chain:
    """An integral 1-cycle reducing to ``alpha`` with mass at most p * mass(alpha).

    The windowed lift eta is corrected by p * theta where d(theta) = d(eta) / p.
    ``method="flow"`` picks theta by an exact min-cost flow, which yields the
    minimum-mass lift; ``method="geodesic"`` matches excess points by a
    min-cost assignment on breadth-first distances and joins them by
    lexicographically first geodesics.
    """
    if not alpha.ring.is_finite or alpha.dim != 1:
        raise ValueError("lift_modp_cycle takes a 1-chain over Z/pZ")
    _check_graph(X)
    if not boundary(alpha).is_zero():
        raise NotACycleError("alpha is not a cycle mod p")
    p = alpha.ring.characteristic
    eta, excess = _window_and_excess(X, alpha)
    if method == "flow":
        theta = _theta_flow(X, eta, excess, p)
    elif method == "geodesic":
        theta = _theta_geodesic(X, excess)
    else:
        raise ValueError(f"unknown lift method {method!r}")
    out = dict(eta)
    for e, t in theta.items():
        out[e] = out.get(e, 0) - p * t
    lifted = Chain(X, 1, Z, out)
    if not boundary(lifted).is_zero():
        raise AssertionError("lift is not a cycle")
    return lifted


def _theta_flow(X, eta, excess, p):
    # node demand = inflow - outflow matches d(theta) = head - tail
    G = nx.MultiDiGraph()
    for v in X.ids(0):
        G.add_node(v, demand=excess.get(v, 0))
    arcs = []
    for e in X.ids(1):
        ends = X.endpoints(e)
        if ends is None:
            continue
        tail, head = ends
        h = eta.get(e, 0)
        # |h - p t| is convex in t: first unit each way costs the marginal, later units cost p
        for a, b, first, sign in ((tail, head, p - 2 * h if h >= 0 else p, 1),
                                  (head, tail, p + 2 * h if h <= 0 else p, -1)):
            k1 = G.add_edge(a, b, capacity=1, weight=first)
            k2 = G.add_edge(a, b, weight=p)
            arcs.append((e, sign, a, b, k1))
            arcs.append((e, sign, a, b, k2))
    if not any(excess.values()):
        return {}
    _, flow = nx.network_simplex(G)
    theta: dict[str, int] = {}
    for e, sign, a, b, key in arcs:
        f = flow[a][b][key]
        if f:
            theta[e] = theta.get(e, 0) + sign * f
    return theta


def _theta_geodesic(X, excess):
    pos = [v for v in X.ids(0) for _ in range(max(excess.get(v, 0), 0))]
    neg = [v for v in X.ids(0) for _ in range(max(-excess.get(v, 0), 0))]
    if not pos:
        return {}
    dist = {u: X.distances(u) for u in set(neg)}
    big = 1 + len(X.ids(1)) * (len(pos) + 1)
    cost = np.array([[dist[u].get(v, big) for v in pos] for u in neg], dtype=np.int64)
    rows, cols = linear_sum_assignment(cost)
    theta: dict[str, int] = {}
    for r, c in zip(rows, cols):
        # a path from u to v has boundary v - u
        for e, s in X.geodesic(neg[r], pos[c]):
            theta[e] = theta.get(e, 0) + s
    return theta
