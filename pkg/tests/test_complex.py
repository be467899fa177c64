from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homfill.builders.basic import circle, cube_surface, grid_disk, klein_bottle, sphere, square, torus
from homfill.builders.double import toy_double
from homfill.builders.flag import build_kq, core_loop, kq_cw
from homfill.complex import Cell, CellComplex, Chain, ComplexError, Subcomplex, boundary, change_ring, mass, restrict_chain
from homfill.fileio import ParseError, dumps_chain, dumps_complex, loads_chain, loads_complex
from homfill.rings import Q, Ring, RingError, Z, has_canonical_map, mod, scaled
from homfill.sparse import SparseIntMatrix


def test_ring_parse_and_format():
    assert str(Ring.parse("mod:7")) == "mod:7"
    assert Ring.parse("scaled:3") == scaled(3)
    assert Ring.parse("scaled:1") == Z
    for bad in ("mod:4", "R", "scaled:0", "mod:x"):
        with pytest.raises(RingError):
            Ring.parse(bad)
    assert mod(3).coerce(-1) == 2
    assert mod(3).format(2) == "2 mod 3"
    assert Q.format(Fraction(-2, 6)) == "-1/3"
    with pytest.raises(RingError):
        scaled(3).coerce(Fraction(1, 2))


def test_canonical_maps():
    assert has_canonical_map(Z, mod(5))
    assert has_canonical_map(scaled(3), Q)
    assert not has_canonical_map(Q, Z)


def test_square_boundary_reads_incidences():
    X = square()
    d = boundary(Chain.cell(X, X.ids(2)[0]))
    assert mass(d) == 4
    assert dict(d.items()) == {c: v for c, v in X.cell(X.ids(2)[0]).boundary}


def test_kq_two_cell_is_q_times_loop():
    X = kq_cw(3)
    assert boundary(Chain.cell(X, "D")) == core_loop(X) * 3


@pytest.mark.parametrize("X", [square(), grid_disk(3), torus(), klein_bottle(), sphere(), cube_surface(),
                               kq_cw(5), build_kq(3).triangulated, toy_double(3).complex],
                         ids=lambda X: X.name)
def test_dd_is_zero(X):
    X.check_dd_zero()
    for cid in X.ids(2):
        assert boundary(boundary(Chain.cell(X, cid))).is_zero()


def test_mass_examples():
    X = circle(2)
    e1, e2 = X.ids(1)
    assert mass(Chain(X, 1, Z, {e1: 3, e2: -2})) == 5
    assert mass(Chain(X, 1, mod(3), {e1: 1, e2: 2})) == 2
    assert mass(Chain(X, 1, scaled(3), {e1: Fraction(5, 3)})) == Fraction(5, 3)


def test_change_ring_examples():
    X = circle(2)
    e, f = X.ids(1)
    assert dict(change_ring(Chain(X, 1, Z, {e: 1, f: -1}), mod(2)).items()) == {e: 1, f: 1}
    assert change_ring(Chain(X, 1, Z, {e: 2}), mod(2)).is_zero()
    with pytest.raises(RingError):
        change_ring(Chain(X, 1, Q, {e: Fraction(1, 2)}), Z)


def test_unit_coefficients_keep_mass_mod_q():
    X = grid_disk(3)
    gamma = boundary(Chain(X, 2, Z, {c: 1 for c in X.ids(2)}))
    assert mass(change_ring(gamma, mod(3))) == mass(gamma)


def test_restrict_partition_reassembles():
    X = grid_disk(3)
    tau = Chain(X, 2, Z, {c: i + 1 for i, c in enumerate(X.ids(2))})
    cells = X.ids(2)
    parts = [cells[:4], cells[4:]]
    total = Chain.zero(X, 2)
    for part in parts:
        total = total + restrict_chain(tau, Subcomplex.generated_by(X, part))
    assert total == tau
    assert restrict_chain(Chain.zero(X, 2), Subcomplex.generated_by(X, parts[0])).is_zero()
    half = restrict_chain(tau, Subcomplex.generated_by(X, parts[0]))
    assert set(half.support()) == set(parts[0])


def test_chain_rejects_wrong_dimension_and_unknown_cells():
    X = square()
    with pytest.raises(ComplexError):
        Chain(X, 1, Z, {X.ids(0)[0]: 1})
    with pytest.raises((ComplexError, KeyError)):
        Chain(X, 1, Z, {"nope": 1})


def test_complex_validation():
    with pytest.raises(ComplexError):
        CellComplex([Cell("a", 0), Cell("e", 1, (("b", 1),))])
    with pytest.raises(ComplexError):
        CellComplex([Cell("a", 0), Cell("a", 0)])


def test_boundary_of_zero_chain_dimension():
    X = square()
    assert boundary(Chain.zero(X, 0)).dim == -1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 5), st.integers(-3, 3)), max_size=12))
def test_sparse_matrix_text_roundtrip(entries):
    M = SparseIntMatrix(5, 6, {(i, j): v for i, j, v in entries if v})
    assert SparseIntMatrix.loads(M.dumps()) == M
    assert M.transpose().transpose() == M


def test_complex_file_roundtrip_and_digest():
    for X in (kq_cw(3), build_kq(2).triangulated, toy_double(2).complex, klein_bottle()):
        text = dumps_complex(X)
        Y = loads_complex(text)
        assert dumps_complex(Y) == text
        assert Y.digest() == X.digest()


def test_permuted_file_canonicalizes():
    text = dumps_complex(kq_cw(3))
    head = [ln for ln in text.splitlines() if ":" in ln.split()[0]]
    body = [ln for ln in text.splitlines() if ln not in head]
    shuffled = "\n".join(head + body[::-1]) + "\n"
    Y = loads_complex(shuffled)
    assert dumps_complex(Y) == text


def test_truncated_file_reports_line():
    text = dumps_complex(kq_cw(3))
    lines = text.splitlines()
    cut = "\n".join(lines[:-1]) + "\nD 2 [(e0, 3), (e1"
    with pytest.raises(ParseError) as err:
        loads_complex(cut)
    assert err.value.line == len(lines)


def test_empty_and_bad_references():
    with pytest.raises(ParseError):
        loads_complex("")
    with pytest.raises(ParseError) as err:
        loads_complex("name: X\ndimension: 1\na 0 []\ne 1 [(b, 1)]\n")
    assert err.value.line == 4


def test_chain_roundtrip():
    X = kq_cw(3)
    for c in (core_loop(X, mod(2)), core_loop(X) * 3, Chain(X, 1, scaled(3), {"e0": Fraction(2, 3)})):
        assert loads_chain(dumps_chain(c), X) == c
    with pytest.raises(ParseError):
        loads_chain("1 mod:2 {e0: 1}", X)  # elements of Z/2 are written "k mod 2"
