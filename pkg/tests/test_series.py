from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wildmckay.errors import HenselConditionFailed, NotInvertible, PrecisionExhausted
from wildmckay.fields import GF, QQ
from wildmckay.series import TruncSeries, disc_valuation, hensel_root, t_var

F5 = GF(5)


def S(field, coeffs, val=0, prec=float("inf")):
    return TruncSeries(field, coeffs, val, prec)


# ------------------------------------------------------------ valuation / inv

def test_valuation_examples():
    t = t_var(QQ)
    assert (t ** 2 + t ** 3).valuation() == 2
    assert TruncSeries.zero(QQ, 8).valuation() is None
    assert TruncSeries.zero(QQ, 8).prec == 8
    assert ((1 + t) * t.inv()).valuation() == -1


def test_inverse_examples():
    t = t_var(QQ)
    assert str((1 - t).inv(4)) == "1 + t + t^2 + t^3 + O(t^4)"
    assert t.inv() == TruncSeries.monomial(QQ, -1)
    inv = (2 + t).inv(3)
    # 1/(2 + t) = sum (-1)^k t^k / 2^(k+1)
    assert [inv[k] for k in range(3)] == [Fraction((-1) ** k, 2 ** (k + 1)) for k in range(3)]
    assert inv.prec == 3


def test_inverse_of_unknown_raises():
    with pytest.raises(NotInvertible):
        TruncSeries.zero(QQ, 5).inv()


def test_coefficient_past_precision_raises():
    f = S(QQ, [1, 2, 3], 0, 3)
    with pytest.raises(PrecisionExhausted):
        f[3]


def test_precision_propagation():
    t = t_var(F5)
    f = S(F5, [1, 1], 0, 10)          # 1 + t + O(t^10)
    g = S(F5, [0, 0, 1], 0, 6)        # t^2 + O(t^6)
    assert (f * g).prec == 6          # min(10 + 2, 6 + 0)
    assert (f + g).prec == 6
    assert (g / t).prec == 5
    assert (g / t).valuation() == 1


series_coeffs = st.lists(st.integers(0, 4), min_size=1, max_size=20)


@settings(max_examples=60, deadline=None)
@given(series_coeffs, series_coeffs, series_coeffs, st.sampled_from([8, 16, 32]))
def test_ring_axioms_mod_tN(a, b, c, N):
    x, y, z = S(F5, a, 0, N), S(F5, b, 0, N), S(F5, c, 0, N)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert (x - x).valuation() is None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=12), st.integers(-3, 3),
       st.sampled_from([8, 16, 32]))
def test_inverse_properties_over_q(coeffs, val, N):
    assume(coeffs[0] != 0)
    f = S(QQ, coeffs, val, val + N)
    g = f.inv()
    assert (f * g - 1).valuation() is None
    assert g.inv() == f


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=30))
def test_inverse_over_prime_field(coeffs):
    F7 = GF(7)
    assume(coeffs[0] % 7)
    f = S(F7, coeffs, 0, 40)
    assert (f * f.inv() - 1).is_zero()


# ------------------------------------------------------------ hensel

def _binom_half(k):
    out = Fraction(1)
    for i in range(k):
        out *= (Fraction(1, 2) - i) / (i + 1)
    return out


def test_hensel_square_root_of_one_plus_t():
    t = t_var(QQ)
    one = TruncSeries.one(QQ)
    root = hensel_root([-(1 + t), TruncSeries.zero(QQ), one], one, 10)
    assert [root[k] for k in range(10)] == [_binom_half(k) for k in range(10)]
    assert root[1] == Fraction(1, 2) and root[2] == Fraction(-1, 8)


def test_hensel_trivial_cases():
    t = t_var(QQ)
    one = TruncSeries.one(QQ)
    assert hensel_root([-t, one], TruncSeries.zero(QQ), 12) == t
    exact = hensel_root([-one, TruncSeries.zero(QQ), one], one)
    assert exact == one and exact.exact


def test_hensel_condition_checked():
    t = t_var(QQ)
    one = TruncSeries.one(QQ)
    # x^2 - t near 0: g(0) = -t has valuation 1, g'(0) = 0
    with pytest.raises(HenselConditionFailed):
        hensel_root([-t, TruncSeries.zero(QQ), one], TruncSeries.zero(QQ))


# ------------------------------------------------------------ discriminants

def _quad_disc(b, c):
    return b * b - 4 * c


def test_disc_valuation_examples():
    t = t_var(F5)
    one, zero = TruncSeries.one(F5), TruncSeries.zero(F5)
    assert disc_valuation([-t, zero, one]) == 1                    # disc 4t
    assert disc_valuation([S(F5, [2]), zero, one]) == 0            # x^2 - 3, unramified
    F2 = GF(2)
    s = t_var(F2)
    # x^2 + t x + t over F_2: disc = t^2 - 4t = t^2
    assert disc_valuation([s, s, TruncSeries.one(F2)]) == 2
    assert disc_valuation([t, t, one]) == _quad_disc(t, t).valuation()


def _cubic_disc(b, c, d):
    return b * b * c * c - 4 * c ** 3 - 4 * b ** 3 * d - 27 * d * d + 18 * b * c * d


def _shift(poly, a):
    """Coefficients of g(x + a) for a monic cubic g, low -> high."""
    c0, c1, c2, _ = poly
    one = TruncSeries.one(a.field)
    return [c0 + c1 * a + c2 * a * a + a ** 3,
            c1 + c2 * a * 2 + a * a * 3,
            c2 + a * 3,
            one]


poly_coeffs = st.lists(st.integers(0, 4), min_size=1, max_size=5)


@settings(max_examples=40, deadline=None)
@given(poly_coeffs, poly_coeffs, poly_coeffs, poly_coeffs, st.integers(0, 2))
def test_cubic_disc_oracle_and_translation_invariance(b, c, d, a, shift):
    b, c, d = S(F5, b), S(F5, c), S(F5, [0] * shift + d)
    disc = _cubic_disc(b, c, d)
    assume(not disc.is_zero())
    one = TruncSeries.one(F5)
    poly = [d, c, b, one]
    assert disc_valuation(poly) == disc.valuation()
    shifted = _shift(poly, S(F5, a))
    assert disc_valuation(shifted) == disc.valuation()


# ------------------------------------------------------------ forms

def test_text_and_json_round_trip():
    f = S(QQ, [1, Fraction(-1, 2), 0, 3], -1, 5)
    assert str(f) == "t^-1 + (-1/2) + 3*t^2 + O(t^5)"
    g = TruncSeries.from_json(f.to_json())
    assert g == f and g.prec == 5 and g.val == -1
    h = S(GF(4), [2, 3], 0, 4)
    assert TruncSeries.from_json(h.to_json()) == h
    assert h.to_json()["field"] == {"kind": "finite", "p": 2, "e": 2, "modulus": [1, 1, 1]}


def test_compose():
    t = t_var(QQ)
    f = S(QQ, [1, 1, 1])                    # 1 + t + t^2
    g = f.compose(t * 2 + t * t)            # 1 + (2t + t^2) + (2t + t^2)^2
    assert g == 1 + 2 * t + 5 * t ** 2 + 4 * t ** 3 + t ** 4
