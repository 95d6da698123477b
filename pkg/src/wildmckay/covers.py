"""Galois covers of the formal disk: Kummer (tame cyclic) and Artin-Schreier (Z/p).

Covers come with an integral model: a uniformizer s of the cover, the image
of t as a series in s, and the matrix of the generator on the K[[t]]-basis
1, s, ..., s^(n-1) of the integral ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (NoRootOfUnity, PrecisionExhausted, Unramified, ValidationError,
                     WrongCharacteristic)
from .fields import GF, FiniteField, smallest_prime_with_roots
from .series import TruncSeries


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class KummerCover:
    """s^l = u t with generator s -> zeta s."""

    l: int
    field: FiniteField
    unit: int = 1

    def __post_init__(self):
        if self.l < 1:
            raise ValidationError("Kummer order must be positive")
        if self.l % self.field.p == 0:
            raise ValidationError("Kummer covers need p not dividing l")
        if not self.unit:
            raise ValidationError("unit must be nonzero")

    @property
    def order(self) -> int:
        return self.l

    def to_json(self):
        return {"kind": "kummer", "l": self.l, "q": self.field.q, "unit": self.unit}


@dataclass(frozen=True)
class ASCover:
    """y^p - y = sum_j f_j t^(-j) + f0 with p not dividing any stored j."""

    field: FiniteField
    f_terms: tuple            # sorted (j, f_j) pairs, f_j != 0
    f0: int = 0

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def order(self) -> int:
        return self.field.p

    @property
    def terms(self) -> dict:
        return dict(self.f_terms)

    def to_json(self):
        return {"kind": "as", "p": self.p, "q": self.field.q,
                "f": {str(j): c for j, c in self.f_terms}, "f0": self.f0}


@dataclass
class ASReduction:
    cover: ASCover
    witness: dict             # Laurent polynomial W with f - normal form = W^p - W + (terms in tK[[t]])
    dropped: dict             # positive-degree terms of the input, all in the image of the AS map


def make_as_cover(field: FiniteField, f_terms: dict, f0: int = 0) -> ASCover:
    terms = {}
    for j, c in f_terms.items():
        j, c = int(j), field(c)
        if j <= 0:
            raise ValidationError("pole orders must be positive")
        if j % field.p == 0:
            raise ValidationError(f"pole order {j} is divisible by p; reduce it first")
        if c:
            terms[j] = c
    return ASCover(field, tuple(sorted(terms.items())), field(f0))


def jump(c: ASCover) -> int:
    if not c.f_terms:
        raise Unramified("cover has no pole terms")
    return max(j for j, _ in c.f_terms)


# ------------------------------------------------------------ AS reduction

def _frobenius_poly(field, w: dict) -> dict:
    # (sum c t^e)^p = sum c^p t^(pe) in characteristic p
    return {e * field.p: field.frobenius(c) for e, c in w.items() if c}


def wp(field, w: dict) -> dict:
    """The Artin-Schreier map W -> W^p - W on a Laurent polynomial {exponent: coeff}."""
    out = dict(_frobenius_poly(field, w))
    for e, c in w.items():
        out[e] = field.sub(out.get(e, 0), c)
    return {e: c for e, c in out.items() if c}


def constant_class_rep(field: FiniteField, c: int) -> int:
    """Canonical representative of c in F_q / (x^p - x): the smallest element with equal trace."""
    tr = field.trace(c)
    for x in field.elements():
        if field.trace(x) == tr:
            return x
    raise AssertionError("unreachable")  # pragma: no cover


def solve_wp_constant(field: FiniteField, c: int) -> int:
    """Some x in F_q with x^p - x = c (c must have trace zero)."""
    for x in field.elements():
        if field.sub(field.pow(x, field.p), x) == c:
            return x
    raise ValidationError(f"{c} is not in the image of x^p - x")


def as_reduce(field, f: dict) -> ASReduction:
    """Artin-Schreier normal form of a Laurent polynomial {exponent: coeff} over F_q.

    Poles of order divisible by p are replaced by p-th roots one step down,
    the constant is reduced to its class in F_q / (x^p - x), and positive
    powers of t are dropped (they lie in the image of x^p - x on tK[[t]]).
    """
    if not isinstance(field, FiniteField):
        raise WrongCharacteristic("Artin-Schreier reduction needs a finite field")
    p = field.p
    poles = {}
    dropped = {}
    f0 = 0
    for e, c in f.items():
        e, c = int(e), field(c)
        if not c:
            continue
        if e < 0:
            poles[-e] = field.add(poles.get(-e, 0), c)
        elif e == 0:
            f0 = field.add(f0, c)
        else:
            dropped[e] = c
    witness = {}
    while True:
        bad = [i for i, c in poles.items() if c and i % p == 0]
        if not bad:
            break
        i = max(bad)
        c = poles.pop(i)
        root = field.pth_root(c)
        # f - (root t^(-i/p))^p + root t^(-i/p)
        k = i // p
        poles[k] = field.add(poles.get(k, 0), root)
        witness[-k] = field.add(witness.get(-k, 0), root)
    rep = constant_class_rep(field, f0)
    x = solve_wp_constant(field, field.sub(f0, rep))
    if x:
        witness[0] = field.add(witness.get(0, 0), x)
    witness = {e: c for e, c in witness.items() if c}
    terms = {i: c for i, c in poles.items() if c}
    return ASReduction(ASCover(field, tuple(sorted(terms.items())), rep), witness, dropped)


def normal_form_poly(c: ASCover) -> dict:
    out = {-j: v for j, v in c.f_terms}
    if c.f0:
        out[0] = c.f0
    return out


# ---------------------------------------------------------- integral models

@dataclass
class IntegralModel:
    n: int
    field: FiniteField
    t_image: TruncSeries          # t as a series in s
    s_image: TruncSeries          # g(s) as a series in s
    gen_matrix: list              # n x n over K[[t]]: column k = coordinates of g(s^k)
    min_poly: list                # s^n = sum_i min_poly[i] s^i, coefficients in K[[t]]
    prec: int                     # t-adic precision of matrix entries
    ab: tuple = dc_field(default=())

    def to_json(self):
        return {
            "n": self.n,
            "t_image": self.t_image.to_json(),
            "s_image": self.s_image.to_json(),
            "gen_matrix": [[x.to_json() for x in row] for row in self.gen_matrix],
            "min_poly": [x.to_json() for x in self.min_poly],
            "prec": self.prec,
        }


def as_exponents(p: int, j: int) -> tuple:
    """Minimal positive (a, b) with -a j + b p = 1."""
    for a in range(1, p + 1):
        if (a * j + 1) % p == 0:
            return a, (a * j + 1) // p
    raise ValidationError(f"no solution: p={p} divides j={j}")


def s_to_t_coords(h: TruncSeries, t_of_s: TruncSeries, n: int, prec: int) -> list:
    """Coordinates c_i(t) with h = sum_{i<n} c_i(t) s^i, to t-precision prec."""
    f = h.field
    t_inv = t_of_s.inv()
    coords = [[f.zero] * prec for _ in range(n)]
    cur = h
    for m in range(prec):
        low = [cur[i] for i in range(n)]
        for i in range(n):
            coords[i][m] = low[i]
        cur = (cur - TruncSeries(f, low, 0)) * t_inv
        if cur.valuation() is not None and cur.valuation() < 0:
            raise PrecisionExhausted("series in s did not reduce along t")
    return [TruncSeries(f, c, 0, prec) for c in coords]


def _kummer_model(c: KummerCover, prec: int) -> IntegralModel:
    f = c.field
    l = c.l
    try:
        zeta = f.root_of_unity(l)
    except NoRootOfUnity:
        raise
    uinv = f.inv(c.unit)
    t_image = TruncSeries.monomial(f, l, uinv)
    s_image = TruncSeries.monomial(f, 1, zeta)
    zero = TruncSeries.zero(f)
    gen = [[zero] * l for _ in range(l)]
    for k in range(l):
        gen[k][k] = TruncSeries(f, (f.pow(zeta, k),), 0)
    mp = [zero] * l
    mp[0] = TruncSeries.monomial(f, 1, c.unit)
    return IntegralModel(l, f, t_image, s_image, gen, mp, prec)


def _as_model(c: ASCover, prec: int) -> IntegralModel:
    f = c.field
    p = f.p
    j = jump(c)
    a, b = as_exponents(p, j)
    terms = c.terms
    # h(t) = t^j * (sum f_i t^-i + f0)
    hcoef = [f.zero] * (j + 1)
    for i, v in terms.items():
        hcoef[j - i] = v
    hcoef[j] = f.add(hcoef[j], c.f0)
    h = TruncSeries(f, hcoef, 0)
    P = p * prec + p * (j + 2) + 8          # s-adic working precision
    h0inv = f.inv(hcoef[0])
    t = TruncSeries.monomial(f, p, f.pow(h0inv, a), P)
    w = TruncSeries.monomial(f, j, f.pow(h0inv, b), P)
    sp = TruncSeries.monomial(f, p, 1)
    sj = TruncSeries.monomial(f, j, 1)
    one = TruncSeries.one(f)
    for _ in range(P + 2):
        R = h.compose(t) / (one - w ** (p - 1))
        t_new = (sp * R ** (-a)).with_prec(P)
        w_new = (sj * R ** (-b)).with_prec(P)
        if t_new == t and w_new == w and t_new.prec >= P and w_new.prec >= P:
            break
        t, w = t_new, w_new
    else:  # pragma: no cover - the map is a contraction
        raise PrecisionExhausted("fixed point iteration for the AS model did not settle")
    if t.prec < P - 2 * p:
        raise PrecisionExhausted("lost precision in the AS model")
    s = TruncSeries.monomial(f, 1, 1)
    g_s = (s * (one + w) ** a).with_prec(t.prec)
    gen_cols = []
    power = one
    for k in range(p):
        gen_cols.append(s_to_t_coords(power.with_prec(t.prec), t, p, prec))
        power = power * g_s
    gen = [[gen_cols[k][i] for k in range(p)] for i in range(p)]
    mp = s_to_t_coords((s ** p).with_prec(t.prec), t, p, prec)
    return IntegralModel(p, f, t, g_s, gen, mp, prec, (a, b))


def integral_model(c, prec: int = 32) -> IntegralModel:
    if isinstance(c, KummerCover):
        return _kummer_model(c, prec)
    if isinstance(c, ASCover):
        jump(c)
        return _as_model(c, prec)
    raise ValidationError(f"unsupported cover {c!r}")


def kummer_cover(l: int, unit: int = 1, q: int | None = None) -> KummerCover:
    """Kummer cover over F_q (default: the smallest prime field with l-th roots of unity)."""
    field = GF(q if q is not None else smallest_prime_with_roots(l))
    return KummerCover(l, field, field(unit))


def as_cover(p: int, j: int, f0: int = 0, q: int | None = None, coeffs: dict | None = None) -> ASCover:
    """AS cover y^p - y = t^-j (+ lower terms from coeffs) + f0 over F_q."""
    field = GF(q if q is not None else p)
    if field.p != p:
        raise ValidationError("field characteristic must equal p")
    terms = dict(coeffs or {})
    terms.setdefault(j, 1)
    return make_as_cover(field, terms, f0)


def cover_from_json(obj):
    if not isinstance(obj, dict):
        raise ValidationError("cover must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "kummer":
            extra = set(obj) - {"kind", "l", "unit", "q"}
            if extra:
                raise ValidationError(f"unknown fields {sorted(extra)}")
            return kummer_cover(int(obj["l"]), int(obj.get("unit", 1)), obj.get("q") and int(obj["q"]))
        if kind == "as":
            extra = set(obj) - {"kind", "p", "q", "f", "f0"}
            if extra:
                raise ValidationError(f"unknown fields {sorted(extra)}")
            p = int(obj["p"])
            field = GF(int(obj.get("q", p)))
            if field.p != p:
                raise ValidationError("field characteristic must equal p")
            f = {int(k): int(v) for k, v in obj["f"].items()}
            red = as_reduce(field, {-k: v for k, v in f.items()} | {0: int(obj.get("f0", 0))})
            return red.cover
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed cover: {exc}") from exc
    raise ValidationError(f"unknown cover kind {kind!r}")


# ------------------------------------------------------------ torsor counts

def _fp_rank(rows, p):
    from .actions import rank_mod_p
    if not rows:
        return 0
    return rank_mod_p(rows, p)


def class_count_upto(q: int, j: int) -> int:
    """#{classes in F_q((t)) / (x^p - x) with pole order <= j}, by F_p-linear algebra.

    The group is V_j / AS(V_{floor(j/p)}) where V_m are the Laurent
    polynomials in t^-1 of degree <= m (constants included).
    """
    field = GF(q)
    p, e = field.p, field.e
    basis = [p ** k for k in range(e)]        # F_p-basis of F_q
    rows = []
    for i in range(j // p + 1):
        for c in basis:
            img = wp(field, {-i: c})
            vec = [0] * (e * (j + 1))
            for ex, v in img.items():
                digits = v
                for k in range(e):
                    digits, r = divmod(digits, p)
                    vec[(-ex) * e + k] = r
            rows.append(vec)
    r = _fp_rank(rows, p)
    return p ** (e * (j + 1) - r)


def torsor_mass_with_jump(q: int, j: int):
    """Weighted count (each Z/p-torsor weighted 1/p) of classes with jump exactly j."""
    from fractions import Fraction
    p = GF(q).p
    if j == 0:
        return Fraction(class_count_upto(q, 0), p)
    return Fraction(class_count_upto(q, j) - class_count_upto(q, j - 1), p)


def stratum_exponent(p: int, j: int) -> int:
    """m_j = j - floor(j/p): free normal-form coefficients with pole order <= j."""
    return j - j // p
