import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homfill.builders.basic import grid_boundary_loop, grid_disk
from homfill.builders.flag import kq_cw
from homfill.fill import FillingProblem, fv_profile, fvol
from homfill.growth import (
    INF, SPARSE_CAVEAT, GrowthSpec, f_dn, f_dn_spec, log_bound, preceq_check, slope_fit, u_exponent,
    u_exponent_closed, u_exponents,
)
from homfill.rings import Z, mod


def test_exponent_values():
    assert u_exponent(1) == 5
    assert u_exponent(2) == Fraction(17, 2)
    assert u_exponent_closed(2) == 3 * (Fraction(5, 2) + Fraction(1, 3)) == Fraction(17, 2)
    assert u_exponents(5) == [u_exponent(n) for n in range(1, 6)]
    with pytest.raises(ValueError):
        u_exponent(0)


def test_log_bound_margin_positive():
    for n, e in enumerate(u_exponents(2000), start=1):
        assert float(e) <= log_bound(n) + 1e-9


def test_f_dn_examples():
    assert f_dn(2, 2, 4) == f_dn(2, 2, 4) and f_dn(2, 2, 4).value == 4
    assert f_dn(INF, 1, 0).value == 1
    assert f_dn(3, 2, Fraction(9, 4)).value == Fraction(27, 8)
    assert not f_dn(1, 2, 2).exact
    with pytest.raises(ValueError):
        f_dn(1, 1, -1)


@pytest.mark.parametrize("d", [1, 2, 3, INF])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_f_dn_composition_identity(d, n):
    for x in (0.5, 1.0, 2.0, 7.3, 30.0):
        lhs = float(f_dn(d, n - 1, Fraction(x ** ((n - 1) / n))).value)
        rhs = float(f_dn(d, n, Fraction(x)).value)
        assert math.isclose(lhs, rhs, rel_tol=1e-12)


def test_preceq_symbolic():
    x2, x3 = GrowthSpec.power(2), GrowthSpec.power(3)
    assert preceq_check(x2, x3).holds
    bad = preceq_check(x3, x2)
    assert not bad.holds and bad.violating_x is not None
    assert preceq_check(f_dn_spec(2, 1), f_dn_spec(INF, 3)).holds
    assert not preceq_check(f_dn_spec(INF, 1), f_dn_spec(5, 1)).holds


def test_preceq_symbolic_given_constant():
    x2 = GrowthSpec.power(2)
    assert preceq_check(x2, x2, C=2).C == 2
    small = preceq_check(x2, x2, C=Fraction(1, 4))
    assert small.holds and small.C is None and small.violating_x == 1


_SPECS = st.one_of(st.fractions(0, 8, max_denominator=6).map(GrowthSpec.power),
                   st.integers(1, 5).map(GrowthSpec.stretched))


@given(_SPECS, _SPECS, _SPECS)
def test_preceq_reflexive_transitive(f, g, h):
    assert preceq_check(f, f).holds
    if preceq_check(f, g).holds and preceq_check(g, h).holds:
        assert preceq_check(f, h).holds


def test_preceq_tables_never_claim_asymptotics():
    tab = GrowthSpec.table([(x, x ** 2) for x in range(1, 40)])
    rep = preceq_check(tab, GrowthSpec.power(2), C=1)
    assert rep.holds and rep.message.startswith("holds up to x_max=39")
    assert rep.caveat is None
    sparse = GrowthSpec.table([(10 ** k, 100 ** k) for k in range(6)])
    rep = preceq_check(sparse, GrowthSpec.power(2))
    assert rep.caveat == SPARSE_CAVEAT
    cubic = GrowthSpec.table([(x, x ** 3) for x in range(1, 200)])
    rep = preceq_check(cubic, GrowthSpec.power(2), C=1)
    assert not rep.holds and rep.violating_x is not None


def test_profile_against_power_law():
    t = fv_profile(kq_cw(3), 1, mod(2), 8)
    pts = [(x, max(m, 1)) for x, m, _ in t.rows if x > 0]
    rep = preceq_check(GrowthSpec.table(pts), GrowthSpec.power(2))
    assert rep.holds


def test_slope_fit_examples():
    fit = slope_fit([(x, x * x) for x in range(1, 10)])
    assert abs(fit.slope - 2) < 1e-12 and fit.residual < 1e-12
    assert abs(slope_fit([(x, 7 * x ** 3) for x in range(1, 6)]).slope - 3) < 1e-12
    with pytest.raises(ValueError):
        slope_fit([(1, 1), (1, 2), (1, 3)])
    with pytest.raises(ValueError):
        slope_fit([(1, 1), (2, 1)])


def test_grid_disk_slope_tends_to_two():
    pts = []
    for k in range(1, 7):
        X = grid_disk(k)
        pts.append((4 * k, fvol(FillingProblem(grid_boundary_loop(X, k), Z)).mass))
    assert abs(slope_fit(pts).slope - 2) < 1e-9


def test_table_rejects_unsorted():
    with pytest.raises(ValueError):
        GrowthSpec.table([(2, 1), (1, 1)])
