import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from homfill.builders.basic import grid_disk
from homfill.complex import Cell, CellComplex, Chain, ComplexError, boundary, change_ring, mass
from homfill.experiments import lift_trials, random_graph, random_modp_cycle
from homfill.lift import lift_modp_cycle, windowed
from homfill.linalg import NotACycleError
from homfill.rings import Z, mod


def triangle():
    return CellComplex([Cell("a", 0), Cell("b", 0), Cell("c", 0),
                        Cell("e1", 1, (("a", -1), ("b", 1))), Cell("e2", 1, (("b", -1), ("c", 1))),
                        Cell("e3", 1, (("c", -1), ("a", 1)))], name="tri")


def parallel():
    return CellComplex([Cell("a", 0), Cell("b", 0),
                        Cell("e", 1, (("a", -1), ("b", 1))), Cell("f", 1, (("a", -1), ("b", 1)))], name="par")


def test_windowing_prefers_plus_half():
    assert windowed(1, 2) == 1
    assert windowed(2, 4) == 2
    assert windowed(3, 4) == -1
    assert [windowed(v, 5) for v in range(5)] == [0, 1, 2, -2, -1]


def test_triangle_example():
    X = triangle()
    alpha = Chain(X, 1, mod(2), {"e1": 1, "e2": 1, "e3": 1})
    lift = lift_modp_cycle(X, alpha)
    assert mass(lift) == 3 <= 2 * mass(alpha)
    assert all(abs(v) == 1 for _, v in lift.items())
    assert boundary(lift).is_zero()


def test_parallel_edges_example():
    X = parallel()
    lift = lift_modp_cycle(X, Chain(X, 1, mod(2), {"e": 1, "f": 1}))
    assert mass(lift) == 2
    assert lift["e"] == -lift["f"]


def test_zero_lifts_to_zero():
    X = triangle()
    assert lift_modp_cycle(X, Chain.zero(X, 1, mod(3))).is_zero()


def test_preconditions():
    X = triangle()
    with pytest.raises(NotACycleError):
        lift_modp_cycle(X, Chain(X, 1, mod(3), {"e1": 1}))
    with pytest.raises(ValueError):
        lift_modp_cycle(X, Chain(X, 1, Z, {"e1": 1, "e2": 1, "e3": 1}))
    D = grid_disk(1)
    with pytest.raises(ValueError):
        lift_modp_cycle(D, Chain.zero(D, 2, mod(2)))
    with pytest.raises(ComplexError):
        lift_modp_cycle(D, Chain.zero(D, 1, mod(2)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5]))
def test_lift_properties(seed, p):
    rng = np.random.default_rng(seed)
    X = random_graph(rng, 12)
    alpha = random_modp_cycle(X, p, rng)
    for method in ("flow", "geodesic"):
        lift = lift_modp_cycle(X, alpha, method)
        assert lift.ring == Z
        assert boundary(lift).is_zero()
        assert change_ring(lift, mod(p)) == alpha
        assert mass(lift) <= p * mass(alpha)
    assert mass(lift_modp_cycle(X, alpha)) == oracles.min_lift(X, alpha, p)


def test_flow_never_worse_than_geodesic():
    for X, p, alpha in lift_trials(3, 80, max_edges=20):
        assert mass(lift_modp_cycle(X, alpha, "flow")) <= mass(lift_modp_cycle(X, alpha, "geodesic"))


def test_loops_are_handled():
    X = CellComplex([Cell("v", 0), Cell("l", 1, ())], name="loop")
    lift = lift_modp_cycle(X, Chain(X, 1, mod(5), {"l": 3}))
    assert dict(lift.items()) == {"l": -2}
