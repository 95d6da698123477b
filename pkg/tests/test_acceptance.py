"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (with its runtime and budget)
straight to the terminal, bypassing pytest's capture.  Runtime budgets are
part of each criterion and are asserted.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

from wildmckay import stringy
from wildmckay.actions import ModularCyclicAction, TameCyclicAction
from wildmckay.covers import as_cover, as_reduce, kummer_cover, wp, jump
from wildmckay.etale import serre_mass_check
from wildmckay.fields import GF
from wildmckay.motivic import L, ONE, ZERO, MotPoly
from wildmckay.stringy import (bhargava_lhs, bhargava_rhs, discrepancy, hilb_class,
                               is_log_terminal, mckay_Zp_integral, stringy_Sn,
                               validate_stratum_class)
from wildmckay.tuning import v_invariant


def _clear_caches():
    stringy._tame_v.cache_clear()
    stringy._wild_v.cache_clear()
    stringy.validate_stratum_class.cache_clear()


@contextmanager
def criterion(capsys, label, budget):
    _clear_caches()
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n[{status}] {label}  ({elapsed:.2f}s, budget {budget}s)")


# 1 ---------------------------------------------------------------------------

def test_1_hilbert_scheme_identity(capsys):
    with criterion(capsys, "1 Hilbert scheme: stringy_Sn(n) == hilb_class(n), n = 1..8", 1):
        for n in range(1, 9):
            assert stringy_Sn(n) == hilb_class(n)


# 2 ---------------------------------------------------------------------------

def test_2_bhargava_point_counts(capsys):
    pairs = [(2, q) for q in (2, 3, 4, 5, 7, 8, 9)] + [(3, q) for q in (2, 4, 5, 7)]
    with criterion(capsys, "2 Bhargava mass, point counts, n=2 and n=3", 30):
        for n, q in pairs:
            assert bhargava_lhs(n, q) == bhargava_rhs(n, q), (n, q)


def test_2_stretch_cubic_towers_in_char_3(capsys):
    with criterion(capsys, "2 (stretch) Bhargava mass, n=3, q in {3, 9} via S3 towers", 30):
        for q in (3, 9):
            assert bhargava_lhs(3, q) == bhargava_rhs(3, q) == 1 + Fraction(1, q) + Fraction(1, q * q)


# 3 ---------------------------------------------------------------------------

def test_3_v_equals_age_for_tame_covers(capsys):
    rng = random.Random(2024)
    with criterion(capsys, "3 v = age, 50 random tame cyclic actions, all Kummer power covers", 60):
        checked = 0
        for _ in range(50):
            l = rng.randrange(2, 13)
            action = TameCyclicAction(l, [rng.randrange(l) for _ in range(rng.randrange(1, 7))])
            for k in range(l):
                order, exps = action.restrict(k)
                if order == 1:
                    assert action.age(k) == 0
                    continue
                v = v_invariant(TameCyclicAction(order, exps), kummer_cover(order)).v
                assert v == action.age(k), (action, k)
                checked += 1
        assert checked > 50


# 4 ---------------------------------------------------------------------------

def test_4_v_equals_artin_conductor(capsys):
    with criterion(capsys, "4 v = Artin conductor for Z/2 [2,2] and Z/3 [3,3]", 120):
        for j in (1, 3, 5, 7, 9):
            assert v_invariant(ModularCyclicAction(2, [2, 2]), as_cover(2, j)).v == j + 1
        for j in (1, 2, 4, 5, 7, 8):
            assert v_invariant(ModularCyclicAction(3, [3, 3]), as_cover(3, j)).v == 2 * (j + 1)


# 5 ---------------------------------------------------------------------------

def test_5_wild_mckay_closed_form(capsys):
    with criterion(capsys, "5 wild McKay: blocks [2,2], p=2, J=9 converges to L^4 + L^3", 60):
        rep = mckay_Zp_integral(ModularCyclicAction(2, [2, 2]), 9)
        assert rep.converges is True
        assert rep.value == L ** 4 + L ** 3


# 6 ---------------------------------------------------------------------------

def test_6_discrepancy(capsys):
    with criterion(capsys, "6 discrepancy: Z/2(1,1) -> 0, Z/3(1,1) -> -1/3, Z/3(1,2) -> 0", 5):
        for exps, want in (((2, [1, 1]), 0), ((3, [1, 1]), Fraction(-1, 3)), ((3, [1, 2]), 0)):
            action = TameCyclicAction(*exps)
            assert discrepancy(action).discrepancy == want
            assert is_log_terminal(action)


# 7 ---------------------------------------------------------------------------

def test_7_oracle_sanity(capsys):
    with criterion(capsys, "7 Serre mass = n for all supported (n, q); stratum classes vs torsor counts",
                   30):
        for n in (2, 3):
            for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16):
                assert serre_mass_check(n, q) == n, (n, q)
        for p in (2, 3):
            for j in range(1, 10):
                if j % p:
                    for q in (p, p * p):
                        assert validate_stratum_class(p, j, q), (p, j, q)


# 8 ---------------------------------------------------------------------------

def _random_poly(rng):
    r = rng.choice([1, 1, 2, 3])
    return MotPoly({Fraction(rng.randint(-6 * r, 6 * r), r): rng.randint(-5, 5)
                    for _ in range(rng.randint(0, 5))}, r)


def _motivic_cases(rng, count):
    for _ in range(count):
        a, b, c = _random_poly(rng), _random_poly(rng), _random_poly(rng)
        assert (a + b) + c == a + (b + c) and a + b == b + a
        assert (a * b) * c == a * (b * c) and a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + ZERO == a and a * ONE == a and a - a == ZERO
        slack = 1 + 1e-12
        assert (a * b).seminorm() <= a.seminorm() * b.seminorm() * slack
        assert (a + b).seminorm() <= max(a.seminorm(), b.seminorm()) * slack
        r = max(a.r, b.r)
        for base in (2, 3):
            q = base ** (6 if r > 1 else 1)
            assert (a * b).realize_point_count(q) == a.realize_point_count(q) * b.realize_point_count(q)
            assert (a + b).realize_point_count(q) == a.realize_point_count(q) + b.realize_point_count(q)


def _jump_shift_cases(rng, p, count):
    F = GF(p)
    for _ in range(count):
        f = {-i: rng.randrange(p) for i in range(rng.randrange(1, 12) + 1)}
        g = {e: rng.randrange(p) for e in range(-rng.randrange(0, 6), 3)}
        shifted = dict(f)
        for e, c in wp(F, g).items():
            shifted[e] = F.add(shifted.get(e, 0), c)
        a, b = as_reduce(F, f).cover, as_reduce(F, shifted).cover
        assert a == b
        if a.f_terms:
            assert jump(a) == jump(b)


def _twist_cases(rng, p, count):
    F = GF(p)
    twist = next(c for c in F.elements() if F.trace(c))
    for _ in range(count):
        j = rng.choice([k for k in range(1, 6) if k % p])
        blocks = [rng.randrange(1, p + 1) for _ in range(rng.randrange(1, 3))]
        lower = {i: rng.randrange(p) for i in range(1, j) if i % p}
        action = ModularCyclicAction(p, blocks)
        assert (v_invariant(action, as_cover(p, j, coeffs=lower)).v
                == v_invariant(action, as_cover(p, j, f0=twist, coeffs=lower)).v)


def _additivity_cases(rng, count):
    for i in range(count):
        if i % 2:
            p = rng.choice([2, 3])
            j = rng.choice([k for k in range(1, 6) if k % p])
            cover = as_cover(p, j)
            m1 = ModularCyclicAction(p, [rng.randrange(1, p + 1)])
            m2 = ModularCyclicAction(p, [rng.randrange(1, p + 1) for _ in range(rng.randrange(1, 3))])
        else:
            l = rng.randrange(2, 9)
            cover = kummer_cover(l)
            m1 = TameCyclicAction(l, [rng.randrange(l) for _ in range(2)])
            m2 = TameCyclicAction(l, [rng.randrange(l) for _ in range(2)])
        assert v_invariant(m1.direct_sum(m2), cover).v == (v_invariant(m1, cover).v
                                                           + v_invariant(m2, cover).v)


def test_8_property_suites(capsys):
    rng = random.Random(8)
    with criterion(capsys, "8 properties: ring axioms/norm/realization (200), AS shifts (100/p), "
                           "twists (20/p), additivity (20)", 120):
        _motivic_cases(rng, 200)
        for p in (2, 3, 5):
            _jump_shift_cases(rng, p, 100)
        for p in (2, 3):
            _twist_cases(rng, p, 20)
        _additivity_cases(rng, 20)
