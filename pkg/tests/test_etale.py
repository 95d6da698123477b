from fractions import Fraction

import pytest

from wildmckay.covers import class_count_upto
from wildmckay.errors import UnsupportedDegree, UnsupportedTower, ValidationError
from wildmckay.etale import (EtaleFamily, Factor, artin_conductor, enumerate_etale, eval_expr,
                             family_sum, mass, serre_mass_check)

ALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_eval_expr():
    assert eval_expr("2*(q-1)*q^((j-1)/2)", q=4, j=3) == 24
    assert eval_expr("floor((j-1)/3)", j=5) == 1
    assert eval_expr("3*(q-1)*q^(j-floor(j/3)-1)/2", q=3, j=4) == 27
    assert eval_expr("-j + 1/2", j=1) == Fraction(-1, 2)
    with pytest.raises(ValidationError):
        eval_expr("x + 1", q=2)
    with pytest.raises(ValidationError):
        eval_expr("__import__('os')")
    with pytest.raises(ValidationError):
        eval_expr("q^(1/2)", q=4)
    with pytest.raises(ValidationError):
        eval_expr("q +", q=4)


def test_degree_one():
    (fam,) = enumerate_etale(1, 7)
    assert fam.aut_order == 1 and artin_conductor(fam) == 0 and fam.count_at(7) == 1


def test_degree_two_odd_q():
    fams = enumerate_etale(2, 3)
    assert [f.aut_order for f in fams] == [2, 2, 2, 2]
    assert [artin_conductor(f) for f in fams] == [0, 0, 1, 1]
    assert sum(1 for f in fams if f.totally_ramified_field) == 2


def test_degree_two_even_q():
    fams = enumerate_etale(2, 2)
    wild = [f for f in fams if f.jumps is not None]
    assert len(wild) == 1
    (fam,) = wild
    assert fam.aut_order == 2 and fam.jumps.values(9) == [1, 3, 5, 7, 9]
    assert [artin_conductor(fam, j) for j in (1, 3, 5)] == [2, 4, 6]
    assert fam.count == "2*(q-1)*q^((j-1)/2)"


def test_artin_conductor_examples():
    unr = EtaleFamily("unr", 2, (Factor("unram", 2),), 2, "0", "1")
    assert artin_conductor(unr) == 0
    assert artin_conductor(enumerate_etale(2, 5)[2]) == 1
    (asq,) = [f for f in enumerate_etale(2, 4) if f.jumps]
    assert artin_conductor(asq, 1) == 2
    bad = EtaleFamily("bad", 2, (Factor("tame", 2),), 2, "2", "1")
    with pytest.raises(UnsupportedTower):
        artin_conductor(bad)


@pytest.mark.parametrize("q", ALL_Q)
@pytest.mark.parametrize("n", [2, 3])
def test_serre_mass_formula(n, q):
    assert serre_mass_check(n, q) == n


@pytest.mark.parametrize("q", ALL_Q)
def test_total_mass(q):
    assert mass(2, q) == 1 + Fraction(1, q)
    assert mass(3, q) == 1 + Fraction(1, q) + Fraction(1, q * q)


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_as_quadratic_counts_match_class_counts(q):
    (fam,) = [f for f in enumerate_etale(2, q) if f.jumps]
    for j in fam.jumps.values(9):
        exact = class_count_upto(q, j) - class_count_upto(q, j - 1)
        assert fam.count_at(q, j) == exact          # p - 1 = 1 class per field


@pytest.mark.parametrize("q", [3, 9])
def test_cyclic_cubic_counts_match_class_counts(q):
    (fam,) = [f for f in enumerate_etale(3, q) if f.label.startswith("cyclic cubic")]
    for j in fam.jumps.values(10):
        exact = class_count_upto(q, j) - class_count_upto(q, j - 1)
        assert fam.count_at(q, j) == Fraction(exact, 2)   # x and -x give the same field


@pytest.mark.parametrize("q", ALL_Q)
def test_family_invariants(q):
    for n in (1, 2, 3):
        for fam in enumerate_etale(n, q):
            assert sum(f.degree for f in fam.factors) == n
            assert {1: 1, 2: 2, 3: 6}[n] % fam.aut_order == 0
            js = fam.jumps.values(12) if fam.jumps else [None]
            for j in js:
                c = fam.count_at(q, j)
                assert c > 0 and c.denominator == 1
                artin_conductor(fam, j)


def test_family_sum_rejects_non_geometric():
    fam = [f for f in enumerate_etale(2, 2) if f.jumps][0]
    with pytest.raises(ValidationError):
        family_sum(fam, lambda j: j)
    with pytest.raises(ValidationError):
        family_sum(fam, lambda j: Fraction(2) ** j)


def test_unsupported():
    with pytest.raises(UnsupportedDegree):
        enumerate_etale(4, 5)
    with pytest.raises(UnsupportedDegree):
        enumerate_etale(2, 17)
    with pytest.raises(UnsupportedDegree):
        serre_mass_check(1, 5)
