"""Equivariant Hom lattices and the v-invariant of a linear action along a cover.

For a cover with integral ring O_E = K[[t]]<1, s, ..., s^(n-1)> and a
representation M = K[[t]]^d, a map phi: M -> O_E is an n x d matrix Phi
over K[[t]].  Equivariance reads  G_E Phi = Phi A_M.  The lattice Xi of
equivariant maps is the saturated kernel of that linear condition, and

    v = length(Hom(M, O_E) / O_E Xi) / n,

computed from the elementary divisors of the nd x nd matrix whose columns
are s^m phi for phi in a basis of Xi and 0 <= m < n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .actions import ModularCyclicAction, TameCyclicAction
from .covers import ASCover, KummerCover, integral_model, jump
from .dvr import saturated_kernel, smith_valuations
from .errors import GroupMismatch, NonFreeDetected, PrecisionExhausted, ValidationError
from .series import TruncSeries

MAX_DOUBLINGS = 4


@dataclass
class TuningResult:
    v: Fraction
    divisors: list
    prec: int
    stable: bool = True
    history: list = dc_field(default_factory=list)

    def to_json(self):
        return {"v": _fmt_q(self.v), "divisors": [str(x) for x in self.divisors],
                "prec": str(self.prec)}


def _fmt_q(x: Fraction) -> str:
    return str(Fraction(x))


def action_matrix(action, model):
    """Generator of the group on M, as a d x d matrix of exact constants (column = image)."""
    f = model.field
    if isinstance(action, TameCyclicAction):
        zeta = f.root_of_unity(action.l)
        d = action.d
        out = [[TruncSeries.zero(f)] * d for _ in range(d)]
        for i, a in enumerate(action.exponents):
            out[i][i] = TruncSeries(f, (f.pow(zeta, a),), 0)
        return out
    if isinstance(action, ModularCyclicAction):
        m = action.matrix()
        return [[TruncSeries(f, (f(x),), 0) for x in row] for row in m]
    raise ValidationError(f"unsupported action {action!r}")


def _check_groups(action, cover):
    if isinstance(action, TameCyclicAction) and isinstance(cover, KummerCover):
        if action.l != cover.l:
            raise GroupMismatch(f"action has order {action.l}, cover has order {cover.l}")
        return
    if isinstance(action, ModularCyclicAction) and isinstance(cover, ASCover):
        if action.p != cover.p:
            raise GroupMismatch(f"action has order {action.p}, cover has order {cover.p}")
        return
    raise GroupMismatch(f"cannot pair {type(action).__name__} with {type(cover).__name__}")


def equivariance_matrix(gen_e, gen_m, n: int, d: int):
    """Matrix of Phi -> G_E Phi - Phi A_M on the coordinates Phi[k][i] (index i*n + k)."""
    f = gen_e[0][0].field
    zero = TruncSeries.zero(f)
    rows = []
    for i in range(d):
        for k in range(n):
            row = [zero] * (n * d)
            for m in range(n):
                x = gen_e[k][m]
                if not (x.is_zero() and x.exact):
                    row[i * n + m] = row[i * n + m] + x
            for r in range(d):
                a = gen_m[r][i]
                if not (a.is_zero() and a.exact):
                    row[r * n + k] = row[r * n + k] - a
            rows.append(row)
    return rows


def equivariant_hom_lattice(action, model, expected_rank: int | None = None):
    """Free basis (list of nd-vectors) of the saturated lattice of equivariant maps."""
    n, d = model.n, action.d
    eq = equivariance_matrix(model.gen_matrix, action_matrix(action, model), n, d)
    rank = d if expected_rank is None else expected_rank
    return saturated_kernel(eq, n * d, expected_rank=rank)


def _times_s(vec, min_poly, n: int, d: int):
    """Multiply an element of O_E^d (coordinates i*n + k) by s."""
    out = list(vec)
    for i in range(d):
        top = vec[i * n + n - 1]
        for k in range(n - 1, 0, -1):
            out[i * n + k] = vec[i * n + k - 1]
        out[i * n] = top * min_poly[0]
        if not top.is_zero() or not top.exact:
            for k in range(1, n):
                out[i * n + k] = out[i * n + k] + top * min_poly[k]
    return out


def tuning_divisors(action, model) -> list:
    """Elementary-divisor valuations of Hom(M, O_E) / O_E Xi at the model's precision."""
    n, d = model.n, action.d
    basis = equivariant_hom_lattice(action, model)
    # saturation certificate: the basis spans a direct summand
    cert = smith_valuations([[vec[r] for vec in basis] for r in range(n * d)])
    if any(v != 0 for v in cert):
        raise NonFreeDetected(f"kernel basis is not saturated: {cert}")
    cols = []
    for vec in basis:
        cur = vec
        for m in range(n):
            cols.append(cur)
            if m + 1 < n:
                cur = _times_s(cur, model.min_poly, n, d)
    mat = [[col[r] for col in cols] for r in range(n * d)]
    return smith_valuations(mat)


def default_start_precision(action, cover) -> int:
    """A starting point only; the doubling loop in v_invariant decides when to stop."""
    if isinstance(cover, KummerCover):
        return 8
    return max(8, 2 * (jump(cover) + 2))


def v_invariant(action, cover, precision: int | None = None) -> TuningResult:
    """v = length / #G, recomputed with doubling precision until two levels agree."""
    _check_groups(action, cover)
    n = cover.order
    prec = precision or default_start_precision(action, cover)
    prev = None
    history = []
    for _ in range(MAX_DOUBLINGS + 1):
        try:
            model = integral_model(cover, prec)
            divs = tuning_divisors(action, model)
        except PrecisionExhausted as exc:
            history.append((prec, str(exc)))
            prev = None
        else:
            history.append((prec, divs))
            if isinstance(cover, KummerCover) or (prev is not None and prev == divs):
                v = Fraction(sum(divs), n)
                return TuningResult(v, divs, prec, True, history)
            prev = divs
        prec *= 2
    raise PrecisionExhausted(f"v-invariant did not stabilize; history {history}")
