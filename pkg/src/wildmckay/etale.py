"""Isomorphism-class families of degree <= 3 etale algebras over F_q((t)).

Each family records its automorphism group order, its Artin conductor
(discriminant valuation) and how many isomorphism classes it contains, the
latter two possibly depending on a ramification jump j.  Counts and
conductors are stored as expressions in a small grammar over q and j
(integers, + - * /, ^, parentheses, floor(...)) so they can be reported and
evaluated exactly.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import UnsupportedDegree, UnsupportedTower, ValidationError
from .fields import prime_power


# ------------------------------------------------------------ expressions

_ALLOWED_BIN = {ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow}


def _eval_node(node, env):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ValidationError(f"unknown symbol {node.id!r}")
        return Fraction(env[node.id])
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BIN:
        a = _eval_node(node.left, env)
        b = _eval_node(node.right, env)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if b.denominator != 1:
            raise ValidationError(f"non-integral exponent {b}")
        return a ** int(b)
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id == "floor" and len(node.args) == 1 and not node.keywords):
        v = _eval_node(node.args[0], env)
        return Fraction(v.numerator // v.denominator)
    raise ValidationError(f"unsupported expression element {ast.dump(node)}")


def eval_expr(expr: str, **env) -> Fraction:
    """Exact value of an expression such as "2*(q-1)*q^((j-1)/2)"."""
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValidationError(f"bad expression {expr!r}") from exc
    return _eval_node(tree, env)


# ------------------------------------------------------------ families

@dataclass(frozen=True)
class Factor:
    """One field factor: kind in {split, unram, tame, as, s3_unram, s3_ram}."""

    kind: str
    degree: int
    p: int = 0

    def conductor(self, j=None) -> int:
        if self.kind in ("split", "unram"):
            return 0
        if self.kind == "tame":
            return self.degree - 1
        if j is None:
            raise ValidationError(f"{self.kind} factor needs a jump")
        if self.kind == "as":
            return (self.p - 1) * (j + 1)
        if self.kind == "s3_unram":
            return 2 * (j + 1)
        if self.kind == "s3_ram":
            return j + 2
        raise UnsupportedTower(f"no conductor rule for factor kind {self.kind!r}")

    def to_json(self):
        out = {"kind": self.kind, "degree": str(self.degree)}
        if self.p:
            out["p"] = str(self.p)
        return out


@dataclass(frozen=True)
class JumpRange:
    """j >= jmin with j mod period in residues."""

    jmin: int
    period: int
    residues: tuple

    def __contains__(self, j):
        return j >= self.jmin and j % self.period in self.residues

    def values(self, upto: int):
        return [j for j in range(self.jmin, upto + 1) if j in self]

    def to_json(self):
        return {"min": str(self.jmin), "period": str(self.period),
                "residues": [str(r) for r in self.residues]}


@dataclass(frozen=True)
class EtaleFamily:
    label: str
    n: int
    factors: tuple
    aut_order: int
    conductor: str
    count: str
    jumps: JumpRange | None = None

    @property
    def totally_ramified_field(self) -> bool:
        return len(self.factors) == 1 and self.factors[0].kind not in ("split", "unram")

    def count_at(self, q: int, j=None) -> Fraction:
        return eval_expr(self.count, q=q, j=j if j is not None else 0)

    def conductor_at(self, j=None) -> int:
        val = eval_expr(self.conductor, j=j if j is not None else 0)
        return int(val)

    def to_json(self):
        return {
            "label": self.label,
            "n": str(self.n),
            "factors": [f.to_json() for f in self.factors],
            "aut": str(self.aut_order),
            "conductor": self.conductor,
            "count": self.count,
            "jump": None if self.jumps is None else self.jumps.to_json(),
        }


def artin_conductor(family: EtaleFamily, j=None) -> int:
    """Discriminant valuation of one algebra in the family, from its factors.

    Cross-checked against the family's stored conductor expression.
    """
    total = sum(f.conductor(j) for f in family.factors)
    stored = family.conductor_at(j)
    if total != stored:
        raise UnsupportedTower(f"conductor mismatch for {family.label}: {total} vs {stored}")
    return total


def _quadratic_families(p: int):
    """Ramified quadratic extensions: (factor, label, conductor, count, jump range)."""
    if p != 2:
        return [(Factor("tame", 2), f"x^2 = u t, u square class {i}", "1", "1", None)
                for i in range(2)]
    # x^2 - x = f with odd jump j; fields correspond to nonzero classes of exact jump j
    return [(Factor("as", 2, 2), "Artin-Schreier quadratic, jump j", "j+1",
             "2*(q-1)*q^((j-1)/2)", JumpRange(1, 2, (1,)))]


def enumerate_etale(n: int, q: int) -> list:
    """Every isomorphism-class family of degree-n etale algebras over F_q((t))."""
    p, e = prime_power(q)
    if q > 16:
        raise UnsupportedDegree("enumeration supports q <= 16")
    if n not in (1, 2, 3):
        raise UnsupportedDegree(f"degree {n} is not supported")
    fams = []
    if n == 1:
        return [EtaleFamily("F", 1, (Factor("split", 1),), 1, "0", "1")]
    if n == 2:
        fams.append(EtaleFamily("F x F", 2, (Factor("split", 1), Factor("split", 1)), 2, "0", "1"))
        fams.append(EtaleFamily("unramified quadratic", 2, (Factor("unram", 2),), 2, "0", "1"))
        for fac, label, cond, count, jr in _quadratic_families(p):
            fams.append(EtaleFamily(label, 2, (fac,), 2, cond, count, jr))
        return fams
    # n == 3
    split = Factor("split", 1)
    fams.append(EtaleFamily("F x F x F", 3, (split, split, split), 6, "0", "1"))
    fams.append(EtaleFamily("F x unramified quadratic", 3, (split, Factor("unram", 2)), 2, "0", "1"))
    for fac, label, cond, count, jr in _quadratic_families(p):
        fams.append(EtaleFamily("F x " + label, 3, (split, fac), 2, cond, count, jr))
    fams.append(EtaleFamily("unramified cubic", 3, (Factor("unram", 3),), 3, "0", "1"))
    if p != 3:
        g = gcd(3, q - 1)
        aut = 3 if g == 3 else 1
        for i in range(g):
            fams.append(EtaleFamily(f"x^3 = u t, u cube class {i}", 3, (Factor("tame", 3),),
                                    aut, "2", "1"))
        return fams
    # p == 3: wild cubics, m_j = j - floor(j/3)
    jr = JumpRange(1, 3, (1, 2))
    fams.append(EtaleFamily("cyclic cubic (Artin-Schreier), jump j", 3, (Factor("as", 3, 3),), 3,
                            "2*(j+1)", "3*(q-1)*q^(j-floor(j/3)-1)/2", jr))
    fams.append(EtaleFamily("S3 cubic, unramified quadratic resolvent, jump j", 3,
                            (Factor("s3_unram", 3, 3),), 1,
                            "2*(j+1)", "(q-1)*q^(j-floor(j/3)-1)/2", jr))
    fams.append(EtaleFamily("S3 cubic, ramified quadratic resolvent, jump j", 3,
                            (Factor("s3_ram", 3, 3),), 1,
                            "j+2", "(q-1)*q^floor((j-1)/3)", JumpRange(1, 6, (1, 5))))
    return fams


def family_sum(family: EtaleFamily, term) -> Fraction:
    """Sum term(j) over the family's jump range (or term(None) if it has none).

    Along each residue class the terms must form a geometric progression with
    ratio in (0, 1); this is checked on several terms before the closed form
    a / (1 - r) is used.
    """
    if family.jumps is None:
        return Fraction(term(None))
    jr = family.jumps
    total = Fraction(0)
    for r in jr.residues:
        j0 = jr.jmin
        while j0 % jr.period != r:
            j0 += 1
        seq = [Fraction(term(j0 + k * jr.period)) for k in range(6)]
        if seq[0] == 0:
            if any(seq):
                raise ValidationError("family terms are not geometric")
            continue
        ratio = seq[1] / seq[0]
        if any(seq[k] != seq[0] * ratio ** k for k in range(6)):
            raise ValidationError(f"terms of {family.label} are not geometric")
        if not 0 <= ratio < 1:
            raise ValidationError(f"terms of {family.label} do not converge")
        total += seq[0] / (1 - ratio)
    return total


def mass(n: int, q: int) -> Fraction:
    """Sum over all degree-n etale algebras of q^(-conductor) / |Aut|."""
    total = Fraction(0)
    for fam in enumerate_etale(n, q):
        total += family_sum(
            fam, lambda j, fam=fam: fam.count_at(q, j) / fam.aut_order
            * Fraction(q) ** (-artin_conductor(fam, j)))
    return total


def serre_mass_check(n: int, q: int) -> Fraction:
    """Sum over totally ramified degree-n fields of (n/|Aut|) q^-(d - n + 1); equals n."""
    if n not in (2, 3):
        raise UnsupportedDegree("mass check is implemented for n in {2, 3}")
    total = Fraction(0)
    for fam in enumerate_etale(n, q):
        if not fam.totally_ramified_field:
            continue
        total += family_sum(
            fam, lambda j, fam=fam: Fraction(n, fam.aut_order) * fam.count_at(q, j)
            * Fraction(q) ** (-(artin_conductor(fam, j) - n + 1)))
    return total

