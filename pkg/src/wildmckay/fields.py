"""Exact coefficient fields: the rationals and finite fields F_q.

Finite field elements are plain ints.  For q = p^e the integer
c_0 + c_1 p + ... + c_{e-1} p^{e-1} encodes the residue class of
c_0 + c_1 w + ... + c_{e-1} w^{e-1} modulo a fixed irreducible modulus.
For e = 1 this is just the residue mod p.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import numpy as np

from .errors import NoRootOfUnity, ValidationError, WrongCharacteristic

# Fixed moduli (coefficients low -> high) so encodings are reproducible.
STANDARD_MODULI = {
    4: (1, 1, 1),        # w^2 + w + 1
    8: (1, 1, 0, 1),     # w^3 + w + 1
    9: (1, 0, 1),        # w^2 + 1
    16: (1, 1, 0, 0, 1),  # w^4 + w + 1
}

_NUMPY_CUTOFF = 24
_MAX_TABLE_Q = 256


def _is_irreducible(p: int, coeffs) -> bool:
    """Irreducibility of a monic polynomial (low -> high) by trial division."""
    e = len(coeffs) - 1
    for k in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            div = list(tail) + [1]
            rem = list(coeffs)
            for top in range(e, k - 1, -1):
                c = rem[top]
                if c:
                    for i in range(k + 1):
                        rem[top - k + i] = (rem[top - k + i] - c * div[i]) % p
            if not any(rem[:k]):
                return False
    return True


def first_irreducible(p: int, e: int) -> tuple:
    """The lexicographically first monic irreducible polynomial of degree e over F_p."""
    for tail in itertools.product(range(p), repeat=e):
        coeffs = tuple(reversed(tail)) + (1,)
        if coeffs[0] and _is_irreducible(p, coeffs):
            return coeffs
    raise AssertionError("unreachable")  # pragma: no cover


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise ValidationError."""
    if q < 2:
        raise ValidationError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValidationError(f"{q} is not a prime power")
    return p, e


class RationalField:
    """The field Q with Fraction elements."""

    characteristic = 0
    kind = "rational"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"

    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def pow(self, a, n: int):
        return Fraction(a) ** n

    def pth_root(self, c):
        raise WrongCharacteristic("p-th roots need a field of positive characteristic")

    def convolve(self, a, b, n):
        out = [Fraction(0)] * min(n, len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            if i >= len(out) or not x:
                continue
            for j in range(min(len(b), len(out) - i)):
                out[i + j] += x * b[j]
        return out

    def format(self, c) -> str:
        return str(c)

    def to_json(self):
        return {"kind": "rational"}

    def element_to_json(self, c):
        return str(c)

    def element_from_json(self, x):
        return Fraction(x)


QQ = RationalField()


class FiniteField:
    """F_q with q = p^e, elements encoded as ints in range(q)."""

    kind = "finite"

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        if e < 1:
            raise ValidationError("degree must be positive")
        self.p = p
        self.e = e
        self.q = p ** e
        self.characteristic = p
        self.zero = 0
        self.one = 1
        if e == 1:
            self.modulus = (0, 1)
            self._mul = self._add = self._inv = None
            return
        if modulus is None:
            if self.q in STANDARD_MODULI:
                modulus = STANDARD_MODULI[self.q]
            elif self.q <= _MAX_TABLE_Q:
                modulus = first_irreducible(p, e)
            else:
                raise ValidationError(f"F_{self.q} is too large for table arithmetic")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ValidationError("modulus must be monic of degree e")
        self.modulus = modulus
        self._build_tables()

    def _digits(self, a):
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _undigits(self, ds):
        n = 0
        for d in reversed(ds):
            n = n * self.p + d
        return n

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        digits = [self._digits(a) for a in range(q)]
        add = [[self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                for b in range(q)] for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * e - 1)
                for i, x in enumerate(digits[a]):
                    if x:
                        for j, y in enumerate(digits[b]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                for k in range(2 * e - 2, e - 1, -1):
                    c = prod[k]
                    if c:
                        for i in range(e + 1):
                            prod[k - e + i] = (prod[k - e + i] - c * self.modulus[i]) % p
                mul[a][b] = mul[b][a] = self._undigits(prod[:e])
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
            else:
                raise ValidationError(f"modulus {self.modulus} is not irreducible over F_{p}")
        self._add, self._mul, self._inv = add, mul, inv
        self._neg = [self._undigits([(-x) % p for x in digits[a]]) for a in range(q)]

    # identity

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and other.q == self.q
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash((self.q, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"

    def __call__(self, x) -> int:
        x = int(x)
        if self.e == 1:
            return x % self.p
        if not 0 <= x < self.q:
            raise ValidationError(f"{x} does not encode an element of F_{self.q}")
        return x

    # arithmetic

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._inv[a]

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        if self.e == 1:
            return pow(a, n, self.p)
        result = 1
        while n:
            if n & 1:
                result = self._mul[result][a]
            a = self._mul[a][a]
            n >>= 1
        return result

    def frobenius(self, a):
        return self.pow(a, self.p)

    def pth_root(self, c):
        """Unique x with x^p = c (Frobenius is bijective on a finite field)."""
        return self.pow(c, self.q // self.p)

    def trace(self, a) -> int:
        """Absolute trace to F_p, returned as an int in range(p)."""
        total, x = 0, a
        for _ in range(self.e):
            total = self.add(total, x)
            x = self.frobenius(x)
        return total

    def elements(self):
        return range(self.q)

    def root_of_unity(self, l: int):
        """A primitive l-th root of unity, or NoRootOfUnity."""
        if (self.q - 1) % l:
            raise NoRootOfUnity(f"F_{self.q} has no primitive {l}-th root of unity")
        for g in range(1, self.q):
            z = self.pow(g, (self.q - 1) // l)
            if all(self.pow(z, l // r) != 1 for r in _prime_factors(l)):
                return z
        raise NoRootOfUnity(f"no primitive {l}-th root found in F_{self.q}")  # pragma: no cover

    def convolve(self, a, b, n):
        """First n coefficients of the product of two coefficient lists."""
        if not a or not b or n <= 0:
            return []
        a = a[:n]
        b = b[:n]
        if self.e == 1:
            if len(a) * len(b) > _NUMPY_CUTOFF:
                out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
                return (out[:n] % self.p).tolist()
            p = self.p
            out = [0] * min(n, len(a) + len(b) - 1)
            m = len(out)
            for i, x in enumerate(a):
                if x:
                    for j in range(min(len(b), m - i)):
                        out[i + j] += x * b[j]
            return [c % p for c in out]
        mul, add = self._mul, self._add
        out = [0] * min(n, len(a) + len(b) - 1)
        m = len(out)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j in range(min(len(b), m - i)):
                    if b[j]:
                        out[i + j] = add[out[i + j]][row[b[j]]]
        return out

    # formatting / serialization

    def format(self, c) -> str:
        if self.e == 1:
            return str(c)
        ds = self._digits(c)
        parts = []
        for i in range(self.e - 1, -1, -1):
            d = ds[i]
            if not d:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if not mono:
                parts.append(str(d))
            else:
                parts.append(mono if d == 1 else f"{d}*{mono}")
        return "+".join(parts) if parts else "0"

    def to_json(self):
        out = {"kind": "finite", "p": self.p, "e": self.e}
        if self.e > 1:
            out["modulus"] = list(self.modulus)
        return out

    def element_to_json(self, c):
        return int(c)

    def element_from_json(self, x):
        return self(x)


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=None)
def GF(q: int) -> FiniteField:
    """Cached F_q using the standard modulus table."""
    p, e = prime_power(q)
    return FiniteField(p, e)


def field_from_json(obj) -> RationalField | FiniteField:
    kind = obj.get("kind")
    if kind == "rational":
        return QQ
    if kind == "finite":
        p, e = int(obj["p"]), int(obj.get("e", 1))
        if "modulus" in obj:
            return FiniteField(p, e, obj["modulus"])
        return GF(p ** e)
    raise ValidationError(f"unknown field kind {kind!r}")


def smallest_prime_with_roots(l: int) -> int:
    """Smallest prime P with l | P - 1 (so F_P contains the l-th roots of unity)."""
    P = l + 1
    while not (is_prime(P) and (P - 1) % l == 0):
        P += 1
    return P
