"""Truncated Laurent series over an exact field with pessimistic precision.

A ``TruncSeries`` stands for ``sum(coeffs[i] * t**(val + i)) + O(t**prec)``.
``prec`` is ``math.inf`` for exact values (polynomials).  Every arithmetic
operation propagates the absolute precision so that each stored coefficient
is certified; anything past ``prec`` is unknown.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import HenselConditionFailed, NotInvertible, PrecisionExhausted
from .fields import QQ, field_from_json

DEFAULT_PREC = 64

INF = math.inf


class TruncSeries:
    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field, coeffs=(), val: int = 0, prec=INF):
        coeffs = [field(c) for c in coeffs]
        lead = 0
        while lead < len(coeffs) and not coeffs[lead]:
            lead += 1
        val += lead
        coeffs = coeffs[lead:]
        if prec != INF:
            keep = max(0, int(prec) - val)
            coeffs = coeffs[:keep]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if not coeffs:
            val = prec if prec != INF else 0
        self.field = field
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # constructors

    @classmethod
    def zero(cls, field, prec=INF):
        return cls(field, (), 0, prec)

    @classmethod
    def one(cls, field, prec=INF):
        return cls(field, (field.one,), 0, prec)

    @classmethod
    def monomial(cls, field, k: int, c=1, prec=INF):
        return cls(field, (c,), k, prec)

    @classmethod
    def from_dict(cls, field, terms: dict, prec=INF):
        if not terms:
            return cls.zero(field, prec)
        lo = min(terms)
        hi = max(terms)
        coeffs = [field.zero] * (hi - lo + 1)
        for k, c in terms.items():
            coeffs[k - lo] = field(c)
        return cls(field, coeffs, lo, prec)

    def _lift(self, other):
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncSeries(self.field, (self.field(other),), 0)
        return NotImplemented

    # inspection

    def is_zero(self) -> bool:
        """True if no nonzero coefficient is known (zero to precision)."""
        return not self.coeffs

    @property
    def exact(self) -> bool:
        return self.prec == INF

    def valuation(self):
        """Order in t; ``math.inf`` for exact zero, ``None`` if unknown (only >= prec known)."""
        if self.coeffs:
            return self.val
        return INF if self.exact else None

    def _v(self):
        # valuation lower bound used for precision bookkeeping
        if self.coeffs:
            return self.val
        return self.prec

    def __getitem__(self, k: int):
        if k >= self.prec:
            raise PrecisionExhausted(f"coefficient of t^{k} is beyond precision {self.prec}")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def unit_part(self):
        """Coefficient list of t^(-val) * self."""
        return list(self.coeffs)

    def with_prec(self, prec):
        if prec >= self.prec:
            return self
        return TruncSeries(self.field, self.coeffs, self.val, prec)

    def shift(self, k: int):
        """Multiply by t^k."""
        return TruncSeries(self.field, self.coeffs, self.val + k, self.prec + k)

    # arithmetic

    def __neg__(self):
        f = self.field
        return TruncSeries(f, [f.neg(c) for c in self.coeffs], self.val, self.prec)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        f = self.field
        prec = min(self.prec, other.prec)
        if not self.coeffs and not other.coeffs:
            return TruncSeries.zero(f, prec)
        vals = [s.val for s in (self, other) if s.coeffs]
        lo = min(vals)
        hi = max(s.val + len(s.coeffs) for s in (self, other) if s.coeffs)
        if prec != INF:
            hi = min(hi, int(prec))
        if hi <= lo:
            return TruncSeries.zero(f, prec)
        out = [f.zero] * (hi - lo)
        for s in (self, other):
            off = s.val - lo
            for i, c in enumerate(s.coeffs):
                j = off + i
                if 0 <= j < len(out):
                    out[j] = f.add(out[j], c)
        return TruncSeries(f, out, lo, prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.field(other)
            f = self.field
            if not c:
                return TruncSeries.zero(f, self.prec if self.coeffs else self.prec)
            return TruncSeries(f, [f.mul(c, x) for x in self.coeffs], self.val, self.prec)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        f = self.field
        va, vb = self._v(), other._v()
        prec = min(self.prec + vb, other.prec + va)
        if not self.coeffs or not other.coeffs:
            return TruncSeries.zero(f, prec)
        val = va + vb
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec != INF:
            n = min(n, int(prec) - val)
        return TruncSeries(f, f.convolve(self.coeffs, other.coeffs, n), val, prec)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a field element."""
        f = self.field
        return TruncSeries(f, [f.mul(c, x) for x in self.coeffs], self.val, self.prec)

    def inv(self, rel_prec=None):
        """Multiplicative inverse.

        For exact non-monomial input the inverse is infinite; ``rel_prec``
        (default DEFAULT_PREC) fixes how many t-digits are produced.
        """
        if not self.coeffs:
            raise NotInvertible("series is zero to its precision")
        f = self.field
        rel = self.prec - self.val
        if rel == INF and len(self.coeffs) == 1:
            return TruncSeries(f, (f.inv(self.coeffs[0]),), -self.val)
        n = rel if rel != INF else (rel_prec or DEFAULT_PREC)
        if rel_prec is not None:
            n = min(n, rel_prec)
        n = int(n)
        u = self.coeffs
        x = [f.inv(u[0])]
        k = 1
        while k < n:
            k = min(2 * k, n)
            ux = f.convolve(u[:k], x, k)
            # x <- x + x (1 - u x)
            e = [f.neg(c) for c in ux]
            e[0] = f.add(e[0], f.one)
            corr = f.convolve(x, e, k)
            x = x + [f.zero] * (k - len(x))
            x = [f.add(a, b) for a, b in zip(x, corr + [f.zero] * (k - len(corr)))]
        return TruncSeries(f, x, -self.val, -self.val + n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(self.field.inv(self.field(other)))
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if not other.coeffs:
            raise NotInvertible("division by a series that is zero to its precision")
        need = min(self.prec - self._v(), other.prec - other.val)
        rel = None if need == INF else int(need)
        return self * other.inv(rel)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = TruncSeries.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def compose(self, s):
        """Substitute t -> s, where s has positive valuation and self is a power series."""
        if self.coeffs and self.val < 0:
            raise ValueError("compose needs a power series")
        vs = s._v()
        if vs < 1:
            raise ValueError("substituted series must have positive valuation")
        f = self.field
        trunc = self.prec * vs if self.prec != INF else INF
        if not self.coeffs:
            return TruncSeries.zero(f, trunc)
        terms = [self[k] if k >= self.val else f.zero
                 for k in range(self.val + len(self.coeffs))]
        acc = TruncSeries(f, (terms[-1],), 0)
        for c in reversed(terms[:-1]):
            acc = acc * s + TruncSeries(f, (c,), 0)
            if trunc != INF:
                acc = acc.with_prec(trunc)
        return acc.with_prec(trunc)

    # comparison

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover - series are not used as keys
        raise TypeError("TruncSeries is unhashable")

    # text / json

    def __str__(self):
        f = self.field
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            k = self.val + i
            cs = f.format(c)
            if "+" in cs[1:] or "-" in cs[1:] or "/" in cs:
                cs = f"({cs})"
            if k == 0:
                parts.append(cs)
            else:
                mono = "t" if k == 1 else f"t^{k}"
                parts.append(mono if cs == "1" else f"{cs}*{mono}")
        if self.prec != INF:
            parts.append(f"O(t^{self.prec})")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__

    def to_json(self):
        f = self.field
        return {
            "field": f.to_json(),
            "val": int(self.val) if self.coeffs else (None if self.exact else int(self.prec)),
            "coeffs": [f.element_to_json(c) for c in self.coeffs],
            "prec": None if self.exact else int(self.prec),
        }

    @classmethod
    def from_json(cls, obj):
        f = field_from_json(obj["field"])
        prec = INF if obj.get("prec") is None else int(obj["prec"])
        val = obj.get("val")
        coeffs = [f.element_from_json(c) for c in obj.get("coeffs", [])]
        if val is None:
            val = 0
        return cls(f, coeffs, int(val), prec)


def series(field, coeffs, val=0, prec=INF) -> TruncSeries:
    return TruncSeries(field, coeffs, val, prec)


def t_var(field, prec=INF) -> TruncSeries:
    return TruncSeries.monomial(field, 1, 1, prec)


# polynomials with TruncSeries coefficients, stored low -> high

def poly_eval(poly, x: TruncSeries) -> TruncSeries:
    acc = poly[-1]
    for c in reversed(poly[:-1]):
        acc = acc * x + c
    return acc


def poly_derivative(poly):
    f = poly[0].field
    return [poly[k] * f(k) if f is not QQ else poly[k] * k for k in range(1, len(poly))] or \
        [TruncSeries.zero(f)]


def valuation(f: TruncSeries):
    return f.valuation()


def inv(f: TruncSeries, rel_prec=None) -> TruncSeries:
    return f.inv(rel_prec)


def coeff_pth_root(field, c):
    """Unique x with x^p = c in a finite field; WrongCharacteristic over Q."""
    return field.pth_root(c)


def hensel_root(poly, x0: TruncSeries, prec: int = DEFAULT_PREC) -> TruncSeries:
    """Newton lift of an approximate root ``x0`` of ``poly`` to t-adic precision ``prec``.

    Needs v(g(x0)) > 2 v(g'(x0)).
    """
    dpoly = poly_derivative(poly)
    gx = poly_eval(poly, x0)
    dx = poly_eval(dpoly, x0)
    vg, vd = gx.valuation(), dx.valuation()
    if vd is None or vd == INF:
        raise HenselConditionFailed("derivative vanishes at the approximate root")
    if vg == INF:
        return x0
    if vg is None:
        raise PrecisionExhausted("value at the approximate root is not determined")
    if not vg > 2 * vd:
        raise HenselConditionFailed(f"v(g(x0))={vg} is not > 2 v(g'(x0))={2 * vd}")
    work = prec + 2 * vd + 2
    x = x0.with_prec(work)
    for _ in range(2 * work.bit_length() + 4):
        gx = poly_eval(poly, x).with_prec(work)
        if gx.valuation() is None or gx.valuation() >= work:
            break
        x = (x - gx / poly_eval(dpoly, x)).with_prec(work)
    return x.with_prec(prec)


def disc_valuation(poly) -> int:
    """Valuation of Res(g, g') for a monic polynomial g over K[[t]].

    Computed from the Sylvester matrix by valuation-pivot elimination.
    """
    from .dvr import det_valuation

    n = len(poly) - 1
    if n < 1:
        raise ValueError("polynomial must have positive degree")
    f = poly[0].field
    dpoly = poly_derivative(poly)
    dpoly = dpoly + [TruncSeries.zero(f)] * (n - len(dpoly))
    size = 2 * n - 1
    zero = TruncSeries.zero(f)
    rows = []
    for i in range(n - 1):
        row = [zero] * size
        for k in range(n + 1):
            row[i + k] = poly[n - k]
        rows.append(row)
    for i in range(n):
        row = [zero] * size
        for k in range(n):
            row[i + k] = dpoly[n - 1 - k]
        rows.append(row)
    return det_valuation(rows)
