"""Linear actions of finite groups: tame cyclic, unipotent Z/p, and S_n permutations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, lcm

from .errors import ValidationError
from .fields import is_prime


def partitions(n: int, largest: int | None = None):
    """Partitions of n as non-increasing tuples, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@dataclass(frozen=True)
class ConjClass:
    rep: tuple          # cycle type for S_n, (k,) power index for cyclic groups
    size: int
    centralizer: int
    order: int


def conj_classes_sym(n: int) -> list:
    out = []
    total = factorial(n)
    for lam in partitions(n):
        z = 1
        for k in set(lam):
            mk = lam.count(k)
            z *= k ** mk * factorial(mk)
        out.append(ConjClass(lam, total // z, z, lcm(*lam) if lam else 1))
    return out


def conj_classes_cyclic(l: int) -> list:
    return [ConjClass((k,), 1, l, l // gcd(k, l)) for k in range(l)]


def rank_mod_p(mat, p: int) -> int:
    m = [[x % p for x in row] for row in mat]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def _matmul_mod(a, b, p):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) % p for j in range(m)] for i in range(n)]


class TameCyclicAction:
    """Z/l acting diagonally: g x_i = zeta^(a_i) x_i."""

    kind = "tame"

    def __init__(self, l: int, exponents):
        if l < 1:
            raise ValidationError("group order must be positive")
        exps = [int(a) for a in exponents]
        if any(not 0 <= a < l for a in exps):
            raise ValidationError(f"exponents must lie in [0, {l})")
        self.l = int(l)
        self.exponents = tuple(exps)

    @property
    def d(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        return self.l

    def __eq__(self, other):
        return isinstance(other, TameCyclicAction) and (self.l, self.exponents) == (other.l, other.exponents)

    def __hash__(self):
        return hash((self.l, self.exponents))

    def __repr__(self):
        return f"TameCyclicAction(l={self.l}, exponents={list(self.exponents)})"

    def power_exponents(self, k: int):
        return [(k * a) % self.l for a in self.exponents]

    def age(self, k: int = 1) -> Fraction:
        return Fraction(sum(self.power_exponents(k)), self.l)

    def fixed_dim(self, k: int = 1) -> int:
        return sum(1 for b in self.power_exponents(k) if b == 0)

    def element_order(self, k: int) -> int:
        return self.l // gcd(k, self.l)

    def kernel_order(self) -> int:
        """Order of the subgroup acting trivially."""
        g = self.l
        for a in self.exponents:
            g = gcd(g, a)
        return g

    def is_faithful(self) -> bool:
        return self.kernel_order() == 1

    def conj_classes(self):
        return conj_classes_cyclic(self.l)

    def elements(self):
        return range(self.l)

    def has_pseudo_reflection(self) -> bool:
        return any(self.fixed_dim(k) == self.d - 1 for k in range(1, self.l)
                   if any(self.power_exponents(k)))

    def restrict(self, k: int):
        """The cyclic subgroup generated by g^k with g^k as its generator.

        Returns (order, exponents of g^k on the x_i).
        """
        order = self.element_order(k)
        step = self.l // order
        return order, [((k * a) % self.l) // step for a in self.exponents]

    def direct_sum(self, other: "TameCyclicAction") -> "TameCyclicAction":
        if other.l != self.l:
            raise ValidationError("direct sum needs the same group")
        return TameCyclicAction(self.l, self.exponents + other.exponents)

    def to_json(self):
        return {"kind": "tame", "l": self.l, "exp": list(self.exponents)}


class ModularCyclicAction:
    """Z/p in characteristic p acting by unipotent Jordan blocks."""

    kind = "modp"

    def __init__(self, p: int, blocks):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        bl = sorted((int(b) for b in blocks), reverse=True)
        if not bl or any(not 1 <= b <= p for b in bl):
            raise ValidationError(f"Jordan block sizes must lie in [1, {p}]")
        self.p = int(p)
        self.blocks = tuple(bl)

    @property
    def d(self) -> int:
        return sum(self.blocks)

    @property
    def order(self) -> int:
        return self.p

    def __eq__(self, other):
        return isinstance(other, ModularCyclicAction) and (self.p, self.blocks) == (other.p, other.blocks)

    def __hash__(self):
        return hash((self.p, self.blocks))

    def __repr__(self):
        return f"ModularCyclicAction(p={self.p}, blocks={list(self.blocks)})"

    def is_faithful(self) -> bool:
        return any(b >= 2 for b in self.blocks)

    def fixed_dim(self, k: int = 1) -> int:
        if k % self.p == 0:
            return self.d
        # every nontrivial power of a unipotent block of size <= p has one block
        return len(self.blocks)

    def has_pseudo_reflection(self) -> bool:
        return self.is_faithful() and self.fixed_dim(1) == self.d - 1

    def matrix(self):
        """Generator matrix over F_p; column i holds the image of x_i."""
        d = self.d
        m = [[0] * d for _ in range(d)]
        start = 0
        for b in self.blocks:
            for i in range(b):
                m[start + i][start + i] = 1
                if i + 1 < b:
                    m[start + i + 1][start + i] = 1
            start += b
        return m

    @classmethod
    def from_matrix(cls, p: int, mat):
        """Jordan type of a unipotent order-p matrix from ranks of (g - I)^k."""
        d = len(mat)
        if any(len(r) != d for r in mat):
            raise ValidationError("matrix must be square")
        nil = [[(mat[i][j] - (1 if i == j else 0)) % p for j in range(d)] for i in range(d)]
        ranks = [d]
        power = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
        for _ in range(p):
            power = _matmul_mod(power, nil, p)
            ranks.append(rank_mod_p(power, p))
        if ranks[-1] != 0:
            raise ValidationError("matrix is not unipotent of order dividing p")
        at_least = [ranks[k - 1] - ranks[k] for k in range(1, p + 1)]
        blocks = []
        for k in range(1, p + 1):
            exact = at_least[k - 1] - (at_least[k] if k < p else 0)
            blocks += [k] * exact
        return cls(p, blocks)

    def direct_sum(self, other: "ModularCyclicAction") -> "ModularCyclicAction":
        if other.p != self.p:
            raise ValidationError("direct sum needs the same group")
        return ModularCyclicAction(self.p, self.blocks + other.blocks)

    def to_json(self):
        return {"kind": "modp", "p": self.p, "blocks": list(self.blocks)}


def perm_exponents(cycle_type, m: int = 1):
    """Eigenvalue exponents of a permutation of cycle type lambda acting on (A^m)^n.

    Returns one (k, exponents) pair per cycle: a k-cycle contributes each of
    0..k-1 with multiplicity m, as exponents over mu_k.
    """
    return [(k, [i for i in range(k) for _ in range(m)]) for k in cycle_type]


def perm_as_cyclic(cycle_type, m: int = 1) -> TameCyclicAction:
    """The cyclic group generated by a permutation, as a diagonal action."""
    order = lcm(*cycle_type) if cycle_type else 1
    exps = []
    for k, ex in perm_exponents(cycle_type, m):
        exps += [e * (order // k) for e in ex]
    return TameCyclicAction(order, exps)


class PermAction:
    """S_n permuting the factors of (A^m)^n."""

    kind = "perm"

    def __init__(self, n: int, m: int = 2):
        if n < 1 or m < 1:
            raise ValidationError("n and m must be positive")
        self.n = int(n)
        self.m = int(m)

    @property
    def d(self) -> int:
        return self.n * self.m

    @property
    def order(self) -> int:
        return factorial(self.n)

    def __eq__(self, other):
        return isinstance(other, PermAction) and (self.n, self.m) == (other.n, other.m)

    def __hash__(self):
        return hash((self.n, self.m))

    def __repr__(self):
        return f"PermAction(n={self.n}, m={self.m})"

    def conj_classes(self):
        return conj_classes_sym(self.n)

    def age(self, cycle_type) -> Fraction:
        return sum((Fraction(sum(ex), k) for k, ex in perm_exponents(cycle_type, self.m)),
                   Fraction(0))

    def fixed_dim(self, cycle_type) -> int:
        return self.m * len(cycle_type)

    def has_pseudo_reflection(self) -> bool:
        return self.n >= 2 and self.m == 1

    def matrix(self, perm):
        """Permutation matrix on (A^m)^n for perm given as a tuple image list."""
        d = self.d
        out = [[0] * d for _ in range(d)]
        for i, j in enumerate(perm):
            for c in range(self.m):
                out[j * self.m + c][i * self.m + c] = 1
        return out

    def to_json(self):
        return {"kind": "perm", "n": self.n, "m": self.m}


def cycle_type(perm) -> tuple:
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen:
            continue
        k, j = 0, i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            k += 1
        out.append(k)
    return tuple(sorted(out, reverse=True))


def action_from_json(obj):
    if not isinstance(obj, dict):
        raise ValidationError("action must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "tame":
            _only(obj, {"kind", "l", "exp"})
            return TameCyclicAction(int(obj["l"]), obj["exp"])
        if kind == "modp":
            _only(obj, {"kind", "p", "blocks"})
            return ModularCyclicAction(int(obj["p"]), obj["blocks"])
        if kind == "perm":
            _only(obj, {"kind", "n", "m"})
            return PermAction(int(obj["n"]), int(obj.get("m", 2)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed action: {exc}") from exc
    raise ValidationError(f"unknown action kind {kind!r}")


def _only(obj, allowed):
    extra = set(obj) - allowed
    if extra:
        raise ValidationError(f"unknown fields {sorted(extra)}")
