"""Exact arithmetic with Laurent polynomials in L^(1/r) and geometric denominators.

``MotPoly`` is a finite integer combination of rational powers of L.
``MotSeries`` is a MotPoly numerator times prod (1 - L^(-d_i))^(-1) with all
d_i > 0; those factors converge in the dimension-completed ring.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from math import gcd

from .errors import DivergentEvaluation, NonIntegralRoot, ValidationError

NEG_INFINITY = -math.inf


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("exponents must be exact")
    return Fraction(x)


def _needed_root(exponents) -> int:
    r = 1
    for e in exponents:
        r = _lcm(r, e.denominator)
    return r


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def _fmt_terms(terms: dict, var: str = "L", pow_fmt=None) -> str:
    if not terms:
        return "0"
    out = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{_fmt_exp(e)}"
            body = mono if a == 1 else f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


class MotPoly:
    """Integer combination of powers L^e, e in (1/r)Z."""

    __slots__ = ("r", "coeffs")

    def __init__(self, coeffs=None, r: int | None = None):
        clean = {}
        for e, c in (coeffs or {}).items():
            e = _frac(e)
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        need = _needed_root(clean)
        if r is None:
            r = need
        elif r < 1 or r % need:
            raise ValueError(f"exponent denominators {need} do not divide r={r}")
        self.r = int(r)
        self.coeffs = clean

    # constructors

    @classmethod
    def L(cls, e=1, c: int = 1, r: int | None = None):
        e = _frac(e)
        return cls({e: c}, r if r is not None else e.denominator)

    @classmethod
    def const(cls, c: int):
        return cls({Fraction(0): c})

    def _promote(self, other):
        if isinstance(other, int):
            return MotPoly.const(other)
        return other

    # ring operations

    def __add__(self, other):
        other = self._promote(other)
        if isinstance(other, MotSeries):
            return MotSeries(self) + other
        if not isinstance(other, MotPoly):
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return MotPoly(out, _lcm(self.r, other.r))

    __radd__ = __add__

    def __neg__(self):
        return MotPoly({e: -c for e, c in self.coeffs.items()}, self.r)

    def __sub__(self, other):
        other = self._promote(other)
        if not isinstance(other, (MotPoly, MotSeries)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._promote(other)
        if isinstance(other, MotSeries):
            return MotSeries(self) * other
        if not isinstance(other, MotPoly):
            return NotImplemented
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return MotPoly(out, _lcm(self.r, other.r))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) != 1 or abs(next(iter(self.coeffs.values()))) != 1:
                raise ValueError("only units ±L^e have inverses in the polynomial ring")
            (e, c), = self.coeffs.items()
            return MotPoly({-e * (-n): c ** (-n)}, self.r)
        result = MotPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._promote(other)
        if isinstance(other, MotSeries):
            return MotSeries(self) == other
        if not isinstance(other, MotPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    # invariants

    def dim(self):
        return max(self.coeffs) if self.coeffs else NEG_INFINITY

    def min_exponent(self):
        return min(self.coeffs) if self.coeffs else math.inf

    def seminorm(self) -> float:
        return 0.0 if not self.coeffs else 2.0 ** float(self.dim())

    def truncate(self, m) -> "MotPoly":
        m = _frac(m)
        return MotPoly({e: c for e, c in self.coeffs.items() if e >= -m}, self.r)

    def realize_point_count(self, q: int) -> Fraction:
        return sum((c * _root_power(q, e) for e, c in self.coeffs.items()), Fraction(0))

    def realize_poincare(self) -> dict:
        """L -> T^2, as {exponent of T: coeff}."""
        return {2 * e: c for e, c in self.coeffs.items()}

    def realize_E(self) -> dict:
        """L -> uv, as {exponent of uv: coeff}."""
        return dict(self.coeffs)

    def poincare_str(self) -> str:
        return _fmt_terms(self.realize_poincare(), "T")

    def e_poly_str(self) -> str:
        terms = self.realize_E()
        if not terms:
            return "0"
        parts = []
        for e in sorted(terms, reverse=True):
            c = terms[e]
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "uv"
            else:
                x = _fmt_exp(e)
                mono = f"u^{x}v^{x}"
            a = abs(c)
            body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return _fmt_terms(self.coeffs)

    def __repr__(self):
        return f"MotPoly({self})"

    def to_json(self):
        return MotSeries(self).to_json()


def _integer_root(q: int, b: int) -> int:
    if b == 1:
        return q
    x = round(q ** (1.0 / b))
    for cand in (x - 1, x, x + 1):
        if cand >= 0 and cand ** b == q:
            return cand
    raise NonIntegralRoot(f"{q} has no integer {b}-th root")


def _root_power(q: int, e: Fraction) -> Fraction:
    base = _integer_root(q, e.denominator)
    return Fraction(base) ** e.numerator


def _factor(d: Fraction) -> MotPoly:
    """1 - L^(-d)."""
    return MotPoly({Fraction(0): 1, -d: -1})


def _divide_one_minus(num: MotPoly, d: Fraction):
    """num / (1 - L^(-d)) if exact, else None."""
    if not num.coeffs:
        return num
    rem = dict(num.coeffs)
    quot = {}
    floor = num.min_exponent() + d
    while rem:
        e = max(rem)
        if e < floor:
            return None
        c = rem.pop(e)
        quot[e] = c
        rem[e - d] = rem.get(e - d, 0) + c
        if not rem[e - d]:
            del rem[e - d]
    return MotPoly(quot, num.r)


class MotSeries:
    """numerator * prod_i (1 - L^(-d_i))^(-1), all d_i > 0."""

    __slots__ = ("num", "denoms")

    def __init__(self, num, denoms=()):
        if isinstance(num, int):
            num = MotPoly.const(num)
        if isinstance(num, MotSeries):
            denoms = tuple(num.denoms) + tuple(denoms)
            num = num.num
        ds = []
        for d in denoms:
            d = _frac(d)
            if d <= 0:
                raise ValueError("geometric denominators need positive exponents")
            ds.append(d)
        if num.is_zero():
            ds = []
        self.num = num
        self.denoms = tuple(sorted(ds))

    @property
    def r(self) -> int:
        r = self.num.r
        for d in self.denoms:
            r = _lcm(r, d.denominator)
        return r

    def _lift(self, other):
        if isinstance(other, int):
            return MotSeries(MotPoly.const(other))
        if isinstance(other, MotPoly):
            return MotSeries(other)
        if isinstance(other, MotSeries):
            return other
        return NotImplemented

    @staticmethod
    def _multiset_diff(big, small):
        rest = list(big)
        for d in small:
            rest.remove(d)
        return rest

    def _over(self, denoms):
        extra = self._multiset_diff(denoms, self.denoms)
        num = self.num
        for d in extra:
            num = num * _factor(d)
        return num

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        common = []
        a, b = list(self.denoms), list(other.denoms)
        for d in sorted(set(a) | set(b)):
            common += [d] * max(a.count(d), b.count(d))
        return MotSeries(self._over(common) + other._over(common), common)

    __radd__ = __add__

    def __neg__(self):
        return MotSeries(-self.num, self.denoms)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return MotSeries(self.num * other.num, self.denoms + other.denoms)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        lhs = self.num
        for d in other.denoms:
            lhs = lhs * _factor(d)
        rhs = other.num
        for d in self.denoms:
            rhs = rhs * _factor(d)
        return lhs == rhs

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return not self.denoms

    def simplify(self):
        """Cancel every (1 - L^(-d)) factor dividing the numerator; MotPoly if none remain."""
        num = self.num
        left = []
        for d in self.denoms:
            q = _divide_one_minus(num, d)
            if q is None:
                left.append(d)
            else:
                num = q
        if not left:
            return num
        return MotSeries(num, left)

    def dim(self):
        return self.num.dim()

    def seminorm(self) -> float:
        return self.num.seminorm()

    def truncate(self, m) -> MotPoly:
        """Expansion with every term of exponent < -m dropped."""
        m = _frac(m)
        cur = dict(self.num.coeffs)
        for d in self.denoms:
            nxt = {}
            for e, c in cur.items():
                k = 0
                while e - k * d >= -m:
                    x = e - k * d
                    nxt[x] = nxt.get(x, 0) + c
                    k += 1
            cur = {e: c for e, c in nxt.items() if c}
        return MotPoly({e: c for e, c in cur.items() if e >= -m}, self.r)

    def realize_point_count(self, q: int) -> Fraction:
        val = self.num.realize_point_count(q)
        for d in self.denoms:
            den = 1 - 1 / _root_power(q, d)
            if den == 0:
                raise DivergentEvaluation(f"1 - q^(-{d}) vanishes at q={q}")
            val /= den
        return val

    def __str__(self):
        if not self.denoms:
            return str(self.num)
        s = str(self.num)
        if len(self.num.coeffs) > 1:
            s = f"({s})"
        for d in self.denoms:
            s += f" / (1 - L^{_fmt_exp(-d)})"
        return s

    def __repr__(self):
        return f"MotSeries({self})"

    def to_json(self):
        terms = [{"num": e.numerator, "den": e.denominator, "coeff": str(c)}
                 for e, c in sorted(self.num.coeffs.items(), reverse=True)]
        return {
            "r": self.r,
            "terms": terms,
            "denoms": [{"num": d.numerator, "den": d.denominator} for d in self.denoms],
        }


def from_json(obj):
    """Inverse of to_json; returns a MotPoly when there are no denominators."""
    try:
        r = int(obj["r"])
        coeffs = {}
        for t in obj["terms"]:
            e = Fraction(int(t["num"]), int(t["den"]))
            coeffs[e] = coeffs.get(e, 0) + int(t["coeff"])
        denoms = [Fraction(int(d["num"]), int(d["den"])) for d in obj.get("denoms", [])]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed motivic value: {exc}") from exc
    need = _needed_root(list(coeffs) + denoms)
    if r < 1 or r % need:
        raise ValidationError(f"root index {r} incompatible with exponents")
    num = MotPoly(coeffs, r)
    if not denoms:
        return num
    return MotSeries(num, denoms)


def as_series(x) -> MotSeries:
    return x if isinstance(x, MotSeries) else MotSeries(x)


def dim(x):
    return x.dim()


def seminorm(x) -> float:
    return x.seminorm()


def truncate(x, m) -> MotPoly:
    return x.truncate(m)


def realize_point_count(x, q: int) -> Fraction:
    return x.realize_point_count(q)


def mot_equal(a, b) -> bool:
    return as_series(a) == as_series(b)


L = MotPoly.L()
ONE = MotPoly.const(1)
ZERO = MotPoly()


# expression parser: integers, L, + - * / ^, parentheses

_TOKEN = re.compile(r"\s*(?:(\d+)|(L)|(\*\*|[-+*/^()]))")


def _tokenize(s: str):
    pos, out = 0, []
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValidationError(f"cannot parse expression at {s[pos:]!r}")
        num, var, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif var is not None:
            out.append(("L", None))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    return out


def _invert(x):
    """Inverse of ±L^e or of ±L^e (1 - L^(-d)) (the latter as a series)."""
    x = as_series(x).simplify() if isinstance(x, MotSeries) else x
    if isinstance(x, MotSeries):
        if x.num.is_zero() or len(x.num.coeffs) != 1:
            raise ValidationError("cannot invert this series")
        (e, c), = x.num.coeffs.items()
        if abs(c) != 1:
            raise ValidationError("cannot invert a non-unit coefficient")
        inv = MotPoly({-e: c}, x.num.r)
        for d in x.denoms:
            inv = inv * _factor(d)
        return inv
    cs = x.coeffs
    if len(cs) == 1:
        (e, c), = cs.items()
        if abs(c) != 1:
            raise ValidationError("integer coefficients cannot be inverted")
        return MotPoly({-e: c}, x.r)
    if len(cs) == 2:
        hi, lo = sorted(cs, reverse=True)
        if cs[hi] in (1, -1) and cs[lo] == -cs[hi]:
            return MotSeries(MotPoly({-hi: cs[hi]}, x.r), [hi - lo])
    raise ValidationError(f"cannot invert {x}; only ±L^e(1 - L^-d) is supported")


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise ValidationError(f"unexpected token {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.i != len(self.toks):
            raise ValidationError(f"trailing input near token {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            w = self.unary()
            v = v * w if op == "*" else v * _invert(w)
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            e = self.exponent()
            if isinstance(base, MotPoly) and len(base.coeffs) == 1 and base.coeffs.get(Fraction(0)) is None:
                (b, c), = base.coeffs.items()
                if c == 1:
                    return MotPoly({b * e: 1})
            if e.denominator != 1:
                raise ValidationError("fractional powers are only allowed on L")
            n = int(e)
            if n < 0:
                return _invert(base) ** (-n) if isinstance(_invert(base), MotPoly) else \
                    _pow_series(as_series(_invert(base)), -n)
            if isinstance(base, MotSeries):
                return _pow_series(base, n)
            return base ** n
        return base

    def exponent(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Fraction(sign * val)
        if (kind, val) == ("op", "("):
            self.take()
            s2 = 1
            if self.peek() == ("op", "-"):
                self.take()
                s2 = -1
            a = self.take("num")[1]
            e = Fraction(a)
            if self.peek() == ("op", "/"):
                self.take()
                e = Fraction(a, self.take("num")[1])
            self.take("op", ")")
            return sign * s2 * e
        raise ValidationError("exponent must be an integer or a parenthesized fraction")

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return MotPoly.const(val)
        if kind == "L":
            self.take()
            return MotPoly.L()
        if (kind, val) == ("op", "("):
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        raise ValidationError(f"unexpected token {val!r}")


def _pow_series(x: MotSeries, n: int) -> MotSeries:
    out = MotSeries(MotPoly.const(1))
    for _ in range(n):
        out = out * x
    return out


def parse(text: str):
    """Parse expressions such as "L^2 + L", "L^(1/2)", "(L - 1)/(1 - L^-1)"."""
    v = _Parser(text).parse()
    if isinstance(v, MotSeries):
        s = v.simplify()
        return s
    return v
