import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from wilsonloops.closedform import (
    TABLE1,
    FormalSeries,
    NonRealClosedForm,
    OutOfRegime,
    UnknownClass,
    UnsupportedClosedForm,
    c3_factor,
    c_n,
    grid,
    lattice_winding_value,
    levy_continuum,
    series_identity_residual,
    spectral_density,
    spectral_mass,
    table1_entry,
    table1_polynomial,
    tail_ratio,
    tilde_c,
    tilde_recursion,
    winding_series,
)
from wilsonloops.polynomial import BetaPolynomial

# frozen by hand from (-1)^(n+1)/n * binom(na - 2, n - 1)
C_N_ORACLE = {
    (1, 1): 1, (2, 1): 0, (3, 1): 0, (4, 1): 0,
    (1, 2): 1, (2, 2): -1, (3, 2): 2, (4, 2): -5,
    (1, 3): 1, (2, 3): -2, (3, 3): 7, (4, 3): -30,
    (1, 4): 1, (2, 4): -3, (3, 4): 15,
    (1, 5): 1, (2, 5): -4,
}


@pytest.mark.parametrize("na,value", sorted(C_N_ORACLE.items()))
def test_c_n_frozen(na, value):
    n, a = na
    assert c_n(n, a) == value


def test_c_n_rejects_nonpositive():
    with pytest.raises(ValueError):
        c_n(0, 2)
    with pytest.raises(ValueError):
        c_n(1, 0)


@pytest.mark.parametrize("u", range(1, 11))
def test_triple_factor_is_third_winding_coefficient(u):
    # catalogue rows carrying (3u - 3)(3u - 2) / 6 agree with c_3 at area u
    assert c3_factor(u) == c_n(3, u)


def test_c_n_integral():
    for n in range(1, 13):
        for a in range(1, 9):
            assert c_n(n, a).denominator == 1, (n, a)


# -- formal series ------------------------------------------------------------


def test_formal_series_arithmetic():
    t = FormalSeries.t(4)
    one = FormalSeries.one(4)
    assert (one + t) ** 2 == FormalSeries([1, 2, 1], 4)
    assert (one - t) * FormalSeries([1, 1, 1, 1, 1], 4) == one
    assert (t ** 5).is_zero()
    with pytest.raises(ValueError):
        t + FormalSeries.t(5)
    with pytest.raises(ValueError):
        t ** -1


def test_winding_series_head():
    C = winding_series(2, 4)
    assert [C[k] for k in range(5)] == [1, 1, -1, 2, -5]


@pytest.mark.parametrize("a", range(1, 7))
def test_series_identity_exact(a):
    assert series_identity_residual(a, 12).is_zero()


def test_series_identity_detects_wrong_coefficients():
    C = winding_series(3, 6)
    C.c[4] += 1
    bad = C ** 3 - C ** 2 - FormalSeries.t(6)
    assert not bad.is_zero()


def test_tilde_recursion_matches_c_n():
    table = tilde_recursion(5, 8)
    for a in range(1, 6):
        for n in range(1, 9):
            assert tilde_c(n, a, table) == c_n(n, a)


def test_tilde_c_standalone():
    assert tilde_c(4, 3) == -30


# -- catalogue ---------------------------------------------------------------------


def test_catalogue_has_28_rows():
    assert sorted(TABLE1) == list(range(1, 29))
    counts = {r: TABLE1[r].k_count for r in TABLE1}
    assert [r for r, k in counts.items() if k == 4] == [11, 15, 28]
    assert [r for r, k in counts.items() if k == 2] == [6, 20, 22, 23, 24, 26]


def test_catalogue_spot_values():
    b = BetaPolynomial.monomial
    assert table1_polynomial(1, s=3) == b(3)
    assert table1_polynomial(2, s1=2, s2=5) == b(7)
    for s, t in [(1, 1), (2, 2), (3, 4)]:
        assert table1_polynomial(3, s=s, t=t) == BetaPolynomial({s + 2 * t: 1 - t})
    assert table1_polynomial(6, s=1, t1=1, t2=1) == b(3) - b(5)
    assert table1_polynomial(8, s=1, t=1, u=2) == BetaPolynomial({9: 3})
    assert table1_polynomial(5, s=1, t1=2, t2=3) == BetaPolynomial({11: 2})


def test_catalogue_rational_coefficients():
    # quadruple winding row at t = u = 1, v = 2, summed by hand:
    # (1 - 5/2 + 3/2) + (-26/3 - 64/3) + (13 - 3 + 24 - 16) - (2 + 1) = -15
    assert table1_polynomial(13, s=1, t=1, u=1, v=2) == BetaPolynomial({14: -15})
    # at t = u = v = 1 every term cancels: 0 - 7 + 5 + 2 - t * 0
    assert table1_polynomial(13, s=1, t=1, u=1, v=1).is_zero


def test_catalogue_lookup_and_validation():
    assert table1_entry("limacon").row == 3
    assert table1_entry("3").row == 3
    with pytest.raises(UnknownClass):
        table1_entry(29)
    with pytest.raises(UnknownClass):
        table1_entry("no-such-class")
    with pytest.raises(ValueError):
        table1_polynomial(3, s=1)
    with pytest.raises(ValueError):
        table1_polynomial(3, s=1, t=1, u=1)
    with pytest.raises(ValueError):
        table1_polynomial(3, s=0, t=1)
    with pytest.raises(ValueError):
        table1_polynomial(3, s=1.5, t=1)


@given(st.sampled_from(sorted(TABLE1)), st.lists(st.integers(1, 7), min_size=4, max_size=4))
def test_catalogue_coefficients_are_integers(row, values):
    entry = TABLE1[row]
    poly = entry.polynomial(**dict(zip(entry.params, values)))
    assert poly.is_integral()


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6))
def test_chain_rows_are_monomials(s1, s2, s3):
    assert table1_polynomial(4, s1=s1, s2=s2, s3=s3) == BetaPolynomial.monomial(s1 + s2 + s3)


# -- continuum ---------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("a", range(1, 6))
def test_continuum_agrees_for_one_and_two_windings(n, a):
    assert abs(lattice_winding_value(n, a) - levy_continuum(n, a)) <= 1e-12


def test_continuum_gap_at_three_windings():
    gap = lattice_winding_value(3, 2) - levy_continuum(3, 2)
    assert gap == pytest.approx(0.0497870684, abs=1e-9)
    with pytest.raises(ValueError):
        levy_continuum(0, 1.0)


def test_levy_single_winding_is_exponential():
    assert levy_continuum(1, 2.5) == pytest.approx(math.exp(-1.25), abs=1e-15)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.0, 4.5])
def test_levy_two_windings(alpha):
    assert levy_continuum(2, alpha) == pytest.approx((1 - alpha) * math.exp(-alpha), abs=1e-15)


# -- spectral densities ----------------------------------------------------------------


def test_area_one_density_closed_form():
    for x in grid(16):
        want = (1 + 0.5 * math.cos(x)) / (2 * math.pi)
        assert spectral_density(1, 0.25, x, mode="closed") == pytest.approx(want, abs=1e-15)
        assert spectral_density(1, 0.25, x) == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize("a", [1, 2, 3, 5])
def test_zero_beta_is_uniform(a):
    for x in (0.0, 1.0, 3.0):
        assert spectral_density(a, 0.0, x) == pytest.approx(1 / (2 * math.pi), abs=1e-15)


def test_area_two_density_at_zero():
    # 1 + 4b^2 + sqrt(1 + 8b^2 + 16b^4) = 2 + 8b^2 at x = 0
    b = 0.25
    want = math.sqrt(1 + 4 * b * b) / (2 * math.pi)
    assert spectral_density(2, b, 0.0, mode="closed") == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize("a", [1, 2, 3])
@pytest.mark.parametrize("beta", [0.05, 0.25, 0.5])
def test_series_matches_closed(a, beta):
    for x in grid(64):
        fs = spectral_density(a, beta, x)
        fc = spectral_density(a, beta, x, mode="closed")
        assert abs(fs - fc) <= 1e-10
        assert fs >= -1e-12
    assert abs(spectral_mass(a, beta) - 1) <= 1e-8


@pytest.mark.parametrize("a,n", [(2, 1), (2, 3), (3, 2)])
def test_fourier_moments_are_winding_coefficients(a, n):
    beta = 0.3
    m, _ = quad(lambda x: spectral_density(a, beta, x, mode="closed") * math.cos(n * x),
                0, 2 * math.pi, epsabs=1e-13, limit=200)
    assert m == pytest.approx(float(c_n(n, a)) * beta ** (n * a), abs=1e-11)


def test_regime_and_mode_errors():
    with pytest.raises(OutOfRegime):
        spectral_density(4, 0.6, 0.0)
    with pytest.raises(UnsupportedClosedForm):
        spectral_density(4, 0.25, 0.0, mode="closed")
    with pytest.raises(ValueError):
        spectral_density(2, 0.25, 0.0, mode="other")
    assert issubclass(NonRealClosedForm, ArithmeticError)


def test_tail_ratio_boundary():
    assert tail_ratio(1, 0.9) == 0
    assert tail_ratio(2, 0.5) == pytest.approx(1.0)
    assert tail_ratio(3, 0.25) < 1


def test_area_four_series_mass():
    assert abs(spectral_mass(4, 0.3) - 1) <= 1e-8


def test_grid():
    g = grid(4)
    assert g == [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]
