import warnings

import networkx as nx
import pytest

from homfill.builders.basic import circle, interval, point, wedge_of_circles
from homfill.builders.double import (
    HardCycle, build_double, fan, hard_cycle, hard_cycle_from, inclusion_map, suspension_cycle, toy_double,
)
from homfill.builders.flag import FlagComplex, build_kq, kq_flag, make_flag
from homfill.builders.products import product, product_with_wedge
from homfill.builders.salvetti import (
    MorseDatum, find_isomorphism, link_graph_h1_rank, octahedralization, salvetti_skeleton,
)
from homfill.builders.words import WordError, WordMap, format_word, parse_word
from homfill.complex import Chain, ComplexError, boundary, mass
from homfill.fileio import dumps_flag, loads_flag
from homfill.linalg import homology
from homfill.rings import Z, mod


@pytest.mark.parametrize("q", [2, 3, 5])
def test_kq_builds(q):
    kb = build_kq(q)
    assert kb.flag.is_flag()
    assert kb.triangulated.euler_characteristic() == kb.cw.euler_characteristic() == 1
    assert str(homology(kb.triangulated, 1, Z)) == f"Z/{q}"
    kb.triangulated.check_dd_zero()


def test_kq_rejects_composite():
    with pytest.raises(ComplexError):
        kq_flag(4)


def test_make_flag_repairs_empty_triangle():
    Y = FlagComplex(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert not Y.is_flag()
    Z2 = make_flag(Y)
    assert Z2.is_flag()
    assert Z2.euler_characteristic() == Y.euler_characteristic()


def test_flag_text_roundtrip():
    Y = build_kq(2).flag
    assert dumps_flag(loads_flag(dumps_flag(Y))) == dumps_flag(Y)


def test_salvetti_examples():
    S = salvetti_skeleton(FlagComplex(["x"], []))
    assert [S.complex.n_cells(k) for k in range(2)] == [1, 1]
    T = salvetti_skeleton(FlagComplex(["x", "y"], [("x", "y")]))
    assert [T.complex.n_cells(k) for k in range(3)] == [1, 2, 1]
    assert str(homology(T.complex, 1, Z)) == "Z^2"
    assert str(homology(T.complex, 2, Z)) == "Z"


def test_salvetti_links_of_kq():
    Y = build_kq(3).flag
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        S = salvetti_skeleton(Y)
    up, down = S.ascending_link(), S.descending_link()
    assert find_isomorphism(up, Y) is not None
    assert find_isomorphism(down, Y) is not None
    assert len(S.link().vertices) == 2 * len(Y.vertices)
    assert link_graph_h1_rank(up) == link_graph_h1_rank(Y)


def test_salvetti_mixed_heights():
    Y = FlagComplex(["x", "y"], [("x", "y")])
    S = salvetti_skeleton(Y)
    up = S.ascending_link(MorseDatum({"x": 1, "y": -1}))
    assert sorted(up.vertices) == ["x+", "y-"]


def test_salvetti_truncation_warns():
    Y = FlagComplex(list("abcd"), [tuple("abcd")])
    with pytest.warns(UserWarning):
        S = salvetti_skeleton(Y, max_dim=2)
    assert S.truncated


def test_salvetti_rejects_non_flag():
    with pytest.raises(ComplexError):
        salvetti_skeleton(FlagComplex(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]))


def test_octahedralization_of_edge_is_square():
    L = octahedralization(FlagComplex(["x", "y"], [("x", "y")]))
    assert nx.is_isomorphic(L.graph(), nx.cycle_graph(4))


def test_products():
    assert product_with_wedge(circle(2), 0).digest() == circle(2).digest()
    P = product_with_wedge(circle(1), 1)
    assert P.euler_characteristic() == 0
    assert str(homology(product_with_wedge(point(), 1), 1, Z)) == "Z^2"
    T = product(circle(1), circle(1))
    T.check_dd_zero()
    assert str(homology(T, 1, Z)) == "Z^2"
    assert product_with_wedge(wedge_of_circles(2), 1).euler_characteristic() == 1


def test_double_structure():
    C = circle(3)
    D = build_double(C, C, inclusion_map(C, C), tree=((0, 1), (1, 2)))
    D.complex.check_dd_zero()
    W0, W1 = D.slice_subcomplex(0), D.slice_subcomplex(1)
    assert not set(W0.cells) & set(W1.cells)
    with pytest.raises(ComplexError):
        build_double(C, C, inclusion_map(C, C), tree=((0, 1), (1, 2), (2, 0)))
    with pytest.raises(ComplexError):
        build_double(C, C, {"c0": {"c0": 1}, "ce0": {"ce0": 1}})  # not a chain map on all of C


def test_hard_cycle_masses():
    C = circle(4)
    D = build_double(C, C, inclusion_map(C, C))
    walk = [("ce0", 1), ("ce1", 1)]
    hc = hard_cycle(D, walk)
    assert isinstance(hc, HardCycle)
    assert boundary(hc.chain).is_zero()
    assert mass(hc.chain) == 2 * len(walk) + 4
    assert hard_cycle_from(D, "c0", ()).chain.is_zero()


def test_suspension_cycle_checks_boundaries():
    D = toy_double(3)
    XH, XG = D.XH, D.XG
    alpha = Chain(XH, 0, Z, {"t3": 1, "t0": -1})
    beta = Chain(XG, 1, Z, {"te0": 1, "te1": 1, "te2": 1})
    gamma = suspension_cycle(D, alpha, beta, beta)
    assert boundary(gamma).is_zero()
    with pytest.raises(ComplexError) as err:
        suspension_cycle(D, alpha, beta, Chain(XG, 1, Z, {"te0": 1}))
    assert "right" in str(err.value)
    z = Chain(XH, 0, Z)
    loop = Chain(XG, 1, Z, {"te0": 1, "z1": 1, "z0": -1})
    assert boundary(suspension_cycle(D, z, loop, loop * 0)).is_zero()


def test_fan_is_contractible():
    F = fan(4)
    assert F.euler_characteristic() == 1
    assert str(homology(F, 1, Z)) == "0"
    assert interval(2).n_cells(1) == 2


def test_word_translation():
    wm = WordMap(MorseDatum({"a": 1, "b": 1, "c": 0}))
    assert wm.translate(parse_word("a_l")) == [("a", 1), ("u", -1)]
    assert wm.translate([]) == []
    out = wm.translate(parse_word("a_l b_r"))
    assert format_word(out) == "a u^-1 b v^-1"
    assert wm.h_prime(out) == 0
    assert wm.translate(parse_word("a_l^-1")) == [("u", 1), ("a", -1)]
    with pytest.raises(WordError):
        parse_word("a_x")
    with pytest.raises(WordError):
        WordMap(MorseDatum({"a": 2}))
    with pytest.raises(WordError):
        wm.translate(parse_word("d_l"))


def test_mod_homology_of_double():
    C = circle(1)
    D = build_double(C, C, {"c0": {"c0": 1}, "ce0": {"ce0": 2}})
    assert str(homology(D.complex, 1, mod(2))) == "F2^2"
