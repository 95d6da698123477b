"""Stringy motives of linear quotients, the wild Z/p McKay integral, and mass identities."""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .actions import (ModularCyclicAction, PermAction, TameCyclicAction, partitions,
                      perm_as_cyclic)
from .covers import as_cover, kummer_cover, stratum_exponent, torsor_mass_with_jump
from .errors import (NonAffineTail, PseudoReflectionPresent, UndeterminedTail, ValidationError,
                     WildGroup, WildMcKayError)
from .etale import mass
from .motivic import MotPoly, MotSeries, NEG_INFINITY
from .tuning import v_invariant


class JumpDependence(WildMcKayError):
    """Two covers with the same jump produced different v-invariants."""


def L_pow(e, c: int = 1) -> MotPoly:
    return MotPoly.L(Fraction(e), c)


# ------------------------------------------------------------ tame sums

def _faithful_tame(action: TameCyclicAction) -> TameCyclicAction:
    """The induced faithful action of G / (kernel)."""
    g = action.kernel_order()
    if g == 1:
        return action
    return TameCyclicAction(action.l // g, [a // g for a in action.exponents])


def _check_tame(action, char: int):
    if action.has_pseudo_reflection():
        raise PseudoReflectionPresent(f"{action!r} contains a pseudo-reflection")
    if char and action.order % char == 0:
        raise WildGroup(f"group order {action.order} is divisible by the characteristic {char}")


def stringy_tame(action, char: int = 0) -> MotPoly:
    """Sum over group elements (classes, for S_n) of L^(d - age)."""
    if isinstance(action, TameCyclicAction):
        action = _faithful_tame(action)
        _check_tame(action, char)
        total = MotPoly()
        for k in range(action.l):
            total = total + L_pow(action.d - action.age(k))
        return total
    if isinstance(action, PermAction):
        _check_tame(action, char)
        total = MotPoly()
        for cls in action.conj_classes():
            total = total + L_pow(action.d - action.age(cls.rep))
        return total
    raise ValidationError(f"stringy_tame does not handle {action!r}")


@functools.lru_cache(maxsize=None)
def _tame_v(l: int, exps: tuple) -> Fraction:
    if l == 1:
        return Fraction(0)
    return v_invariant(TameCyclicAction(l, exps), kummer_cover(l)).v


def _element_terms(action):
    """(fixed_dim, v) per group element or conjugacy class, v from the tuning module."""
    if isinstance(action, TameCyclicAction):
        for k in range(action.l):
            l, exps = action.restrict(k)
            yield action.fixed_dim(k), _tame_v(l, tuple(exps))
    else:
        for cls in action.conj_classes():
            cyc = perm_as_cyclic(cls.rep, action.m)
            yield action.fixed_dim(cls.rep), _tame_v(cyc.l, cyc.exponents)


def stringy_tame_inertia(action, char: int = 0) -> MotPoly:
    """Sum over inertia components of L^fixed * L^codim * L^(-v)."""
    if isinstance(action, TameCyclicAction):
        action = _faithful_tame(action)
    _check_tame(action, char)
    total = MotPoly()
    for fixed, v in _element_terms(action):
        total = total + L_pow(fixed) * L_pow(action.d - fixed) * L_pow(-v)
    return total


# ------------------------------------------------------------ partitions etc

@functools.lru_cache(maxsize=None)
def partition_count(n: int, m: int) -> int:
    """P(n, m): partitions of n into exactly m parts."""
    if n == 0 and m == 0:
        return 1
    if n <= 0 or m <= 0 or m > n:
        return 0
    return partition_count(n - 1, m - 1) + partition_count(n - m, m)


def hilb_class(n: int) -> MotPoly:
    total = MotPoly()
    for i in range(n):
        total = total + L_pow(2 * n - i, partition_count(n, n - i))
    return total


def stringy_Sn(n: int) -> MotPoly:
    total = MotPoly()
    for lam in partitions(n):
        total = total + L_pow(n + len(lam))
    return total


def bhargava_rhs(n: int, q: int | None = None):
    """sum_j P(n, n-j) L^-j, or its value at L = q."""
    poly = MotPoly()
    for j in range(n):
        poly = poly + L_pow(-j, partition_count(n, n - j))
    return poly if q is None else poly.realize_point_count(q)


def bhargava_lhs(n: int, q: int) -> Fraction:
    """Point-count mass of degree-n etale algebras weighted by q^-conductor / |Aut|."""
    return mass(n, q)


# ------------------------------------------------------------ wild strata

def stratum_class(p: int, j: int) -> MotPoly:
    """Coarse class of the jump-j stratum (1 for the trivial stratum)."""
    if j == 0:
        return MotPoly.const(1)
    if j % p == 0:
        raise ValidationError("jumps are prime to p")
    m = stratum_exponent(p, j)
    return L_pow(m) - L_pow(m - 1)


@functools.lru_cache(maxsize=None)
def validate_stratum_class(p: int, j: int, q: int) -> bool:
    """Weighted torsor count over F_q equals the stratum class at L = q."""
    return torsor_mass_with_jump(q, j) == stratum_class(p, j).realize_point_count(q)


@functools.lru_cache(maxsize=None)
def _wild_v(action: ModularCyclicAction, p: int, j: int, f0: int, lower: tuple,
            precision) -> Fraction:
    cover = as_cover(p, j, f0=f0, coeffs=dict(lower))
    return v_invariant(action, cover, precision).v


def wild_v(action: ModularCyclicAction, j: int, samples: int = 10, seed: int = 0,
           precision=None) -> Fraction:
    """v for the jump-j cover t^-j, checked against random covers with the same jump."""
    p = action.p
    v = _wild_v(action, p, j, 0, (), precision)
    rng = random.Random(f"{seed}:{p}:{j}")
    for _ in range(samples):
        lower = tuple((i, rng.randrange(p)) for i in range(1, j) if i % p)
        f0 = rng.randrange(p)
        top = 1 + rng.randrange(p - 1)
        w = _wild_v(action, p, j, f0, lower + ((j, top),), precision)
        if w != v:
            raise JumpDependence(f"v differs between covers of jump {j}: {v} vs {w}")
    return v


@dataclass
class Stratum:
    label: str
    coarse_class: MotPoly
    v: Fraction
    contribution: object

    @property
    def dim(self):
        return self.coarse_class.dim()

    def to_json(self):
        return {"label": self.label, "class": str(self.coarse_class), "v": _q(self.v),
                "dim": _q(self.dim), "contribution": str(self.contribution)}


@dataclass
class StringyReport:
    value: object
    converges: bool | None
    dim: object
    strata: list = dc_field(default_factory=list)
    tail: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    def realizations(self) -> dict:
        out = {}
        val = self.value
        r = val.r if hasattr(val, "r") else 1
        q = 2 ** r
        try:
            out[f"q={q}"] = _q(val.realize_point_count(q))
        except WildMcKayError as exc:
            out[f"q={q}"] = f"undefined: {exc}"
        if isinstance(val, MotPoly):
            out["poincare"] = val.poincare_str()
            out["E"] = val.e_poly_str()
        return out

    def to_json(self):
        return {
            "value": self.value.to_json(),
            "value_text": str(self.value),
            "converges": None if self.converges is None else bool(self.converges),
            "dim": _q(self.dim),
            "strata": [s.to_json() for s in self.strata],
            "tail": self.tail,
            "notes": self.notes,
            "realizations": self.realizations(),
        }


def _q(x) -> str:
    if x == NEG_INFINITY:
        return "-inf"
    return str(Fraction(x))


def _check_modular(action: ModularCyclicAction):
    if not action.is_faithful():
        raise ValidationError("action is trivial (all Jordan blocks have size 1)")
    if action.has_pseudo_reflection():
        raise PseudoReflectionPresent(f"{action!r} contains a pseudo-reflection")


def mckay_Zp_integral(action: ModularCyclicAction, jump_cap: int, samples: int = 10,
                      precision=None, validate_q=True) -> StringyReport:
    """L^d + sum over jumps j of {stratum_j} L^(d - v_j), tail closed when v is affine."""
    _check_modular(action)
    p, d = action.p, action.d
    strata = [Stratum("trivial", MotPoly.const(1), Fraction(0), L_pow(d))]
    finite = L_pow(d)
    by_class = {r: [] for r in range(1, p)}
    for j in range(1, jump_cap + 1):
        if j % p == 0:
            continue
        if validate_q:
            for q in (p, p * p):
                if not validate_stratum_class(p, j, q):
                    raise ValidationError(f"stratum class for jump {j} fails the count over F_{q}")
        v = wild_v(action, j, samples, precision=precision)
        cls = stratum_class(p, j)
        contrib = cls * L_pow(d - v)
        strata.append(Stratum(f"wild(p={p},j={j})", cls, v, contrib))
        finite = finite + contrib
        by_class[j % p].append((j, v))
    report = StringyReport(finite, None, finite.dim(), strata)
    tail = MotSeries(MotPoly())
    converges = True
    for r, vals in by_class.items():
        if len(vals) < 3:
            converges = None
            report.notes.append(f"jumps = {r} mod {p}: fewer than 3 values, tail undetermined")
            continue
        (j1, v1), (j2, v2), (j3, v3) = vals[-3:]
        if v3 - v2 != v2 - v1:
            converges = None
            report.notes.append(str(NonAffineTail(f"v is not affine on jumps {j1}, {j2}, {j3}")))
            continue
        beta = v3 - v2                    # change of v per step of p in j
        gamma = (p - 1) - beta            # change of the term's exponent per step
        jn = j3 + p
        first = stratum_class(p, jn) * L_pow(d - (v3 + beta))
        entry = {"residue": str(r), "next_jump": str(jn), "v_step": _q(beta),
                 "exponent_step": _q(gamma)}
        if gamma >= 0:
            converges = False if converges is not None else None
            entry["status"] = "divergent"
        else:
            tail = tail + MotSeries(first, [-gamma])
            entry["status"] = "geometric"
        report.tail.append(entry)
    if converges:
        total = (MotSeries(finite) + tail).simplify()
        report.value = total
        report.dim = total.dim()
    elif converges is False and any(e["status"] == "divergent" for e in report.tail):
        converges = False
    report.converges = converges
    return report


# ------------------------------------------------------------ discrepancy

@dataclass
class DiscrepancyResult:
    discrepancy: object
    log_terminal: bool
    dim_sing: int
    dim_integral: object


def _tame_strata(action):
    """(stratum dim, v) for nontrivial elements / classes of a tame action."""
    if isinstance(action, TameCyclicAction):
        for k in range(1, action.l):
            yield action.fixed_dim(k), action.age(k)
    else:
        for cls in action.conj_classes():
            if any(x > 1 for x in cls.rep):
                yield action.fixed_dim(cls.rep), action.age(cls.rep)


def discrepancy(action, jump_cap: int = 9, samples: int = 10) -> DiscrepancyResult:
    """d - 1 - max(dim X_sing, dim of the integral away from the trivial point)."""
    d = action.d
    if isinstance(action, (TameCyclicAction, PermAction)):
        if isinstance(action, TameCyclicAction):
            action = _faithful_tame(action)
        if action.has_pseudo_reflection():
            raise PseudoReflectionPresent(f"{action!r} contains a pseudo-reflection")
        rows = list(_tame_strata(action))
        if not rows:
            raise UndeterminedTail("trivial group: no nontrivial strata")
        dim_sing = max(fx for fx, _ in rows)
        # tame strata are points of the inertia stack
        dim_int = max(d - v for _, v in rows)
        disc = d - 1 - max(dim_sing, dim_int)
        return DiscrepancyResult(disc, True, dim_sing, dim_int)
    if isinstance(action, ModularCyclicAction):
        rep = mckay_Zp_integral(action, jump_cap, samples=samples)
        if rep.converges is None:
            raise UndeterminedTail("; ".join(rep.notes) or "wild tail undetermined")
        dim_sing = action.fixed_dim(1)
        if not rep.converges:
            return DiscrepancyResult(NEG_INFINITY, False, dim_sing, float("inf"))
        # along each residue class the exponents decrease, so the sup is attained
        dim_int = max(s.contribution.dim() for s in rep.strata[1:])
        disc = d - 1 - max(dim_sing, dim_int)
        return DiscrepancyResult(disc, True, dim_sing, dim_int)
    raise ValidationError(f"unsupported action {action!r}")


def is_log_terminal(action, jump_cap: int = 9) -> bool:
    return discrepancy(action, jump_cap).log_terminal
