"""Command-line front end.

Every command prints one deterministic JSON report (or a short text
summary with --format text).  Exit codes: 0 success, 2 invalid input,
3 precision exhausted or undetermined wild tail.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import jsonschema

from . import motivic
from .actions import ModularCyclicAction, PermAction, TameCyclicAction, action_from_json
from .covers import ASCover, as_exponents, cover_from_json, integral_model, jump
from .errors import PrecisionExhausted, UndeterminedTail, ValidationError, WildMcKayError
from .etale import artin_conductor, enumerate_etale, mass, serre_mass_check
from .series import TruncSeries, disc_valuation
from .stringy import (StringyReport, Stratum, bhargava_lhs, bhargava_rhs, mckay_Zp_integral,
                      stringy_tame, stringy_tame_inertia)
from .tuning import v_invariant

ACTION_SCHEMA = {
    "oneOf": [
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "l", "exp"],
         "properties": {"kind": {"const": "tame"}, "l": {"type": "integer", "minimum": 1},
                        "exp": {"type": "array", "items": {"type": "integer", "minimum": 0}}}},
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "p", "blocks"],
         "properties": {"kind": {"const": "modp"}, "p": {"type": "integer", "minimum": 2},
                        "blocks": {"type": "array", "minItems": 1,
                                   "items": {"type": "integer", "minimum": 1}}}},
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "n"],
         "properties": {"kind": {"const": "perm"}, "n": {"type": "integer", "minimum": 1},
                        "m": {"type": "integer", "minimum": 1}}},
    ]
}

COVER_SCHEMA = {
    "oneOf": [
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "l"],
         "properties": {"kind": {"const": "kummer"}, "l": {"type": "integer", "minimum": 1},
                        "unit": {"type": "integer"}, "q": {"type": "integer", "minimum": 2}}},
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "p", "f"],
         "properties": {"kind": {"const": "as"}, "p": {"type": "integer", "minimum": 2},
                        "q": {"type": "integer", "minimum": 2},
                        "f": {"type": "object",
                              "patternProperties": {"^[0-9]+$": {"type": ["integer", "string"]}},
                              "additionalProperties": False},
                        "f0": {"type": ["integer", "string"]}}},
    ]
}

EVAL_SCHEMA = {
    "type": "object", "additionalProperties": False,
    "properties": {
        "expr": {"type": "string"},
        "value": {"type": "object"},
        "truncate": {"type": ["integer", "string"]},
    },
    "oneOf": [{"required": ["expr"]}, {"required": ["value"]}],
}


def _load(text: str, schema: dict, what: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what} is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"{what} failed validation: {exc.message}") from exc
    return obj


def _q(x) -> str:
    return str(Fraction(x))


# ------------------------------------------------------------ commands

def cmd_stringy(args):
    if args.action is None:
        raise ValidationError("--action is required")
    action = action_from_json(_load(args.action, ACTION_SCHEMA, "--action"))
    if isinstance(action, ModularCyclicAction):
        return cmd_mckay(args)
    value = stringy_tame(action, args.char)
    strata = []
    if isinstance(action, TameCyclicAction):
        for k in range(action.l):
            age = action.age(k)
            strata.append(Stratum(f"tame(l={action.l},k={k})", motivic.ONE, age,
                                  motivic.MotPoly.L(action.d - age)))
    else:
        for cls in action.conj_classes():
            age = action.age(cls.rep)
            strata.append(Stratum("perm(" + ",".join(map(str, cls.rep)) + ")", motivic.ONE, age,
                                  motivic.MotPoly.L(action.d - age)))
    report = StringyReport(value, True, value.dim(), strata)
    if args.check_inertia:
        report.notes.append("inertia sum agrees" if stringy_tame_inertia(action, args.char) == value
                            else "inertia sum DISAGREES")
    out = report.to_json()
    out["action"] = action.to_json()
    return out, f"{value}"


def cmd_mckay(args):
    if args.action is None:
        raise ValidationError("--action is required")
    action = action_from_json(_load(args.action, ACTION_SCHEMA, "--action"))
    if not isinstance(action, ModularCyclicAction):
        raise ValidationError("mckay needs a modp action")
    cap = 9 if args.jump_cap is None else args.jump_cap
    report = mckay_Zp_integral(action, cap, samples=args.samples, precision=args.precision)
    if report.converges is None and args.strict:
        raise UndeterminedTail("; ".join(report.notes) or "tail undetermined")
    out = report.to_json()
    out["action"] = action.to_json()
    out["jump_cap"] = str(cap)
    conv = {True: "converges", False: "diverges", None: "undetermined"}[report.converges]
    return out, f"{report.value}  ({conv})"


def cmd_vinv(args):
    if args.action is None or args.cover is None:
        raise ValidationError("--action and --cover are required")
    action = action_from_json(_load(args.action, ACTION_SCHEMA, "--action"))
    cover = cover_from_json(_load(args.cover, COVER_SCHEMA, "--cover"))
    if isinstance(action, PermAction):
        raise ValidationError("vinv needs a cyclic (tame or modp) action")
    res = v_invariant(action, cover, args.precision)
    return res.to_json(), f"v = {_q(res.v)}"


def cmd_bhargava(args):
    if args.n is None or args.q is None:
        raise ValidationError("--n and --q are required")
    lhs = bhargava_lhs(args.n, args.q)
    rhs = bhargava_rhs(args.n, args.q)
    out = {"lhs": _q(lhs), "rhs": _q(rhs), "equal": lhs == rhs}
    return out, f"lhs = {_q(lhs)}, rhs = {_q(rhs)}, equal = {lhs == rhs}"


def cmd_ring(args):
    if args.eval is None:
        raise ValidationError("--eval is required")
    obj = _load(args.eval, EVAL_SCHEMA, "--eval")
    val = motivic.parse(obj["expr"]) if "expr" in obj else motivic.from_json(obj["value"])
    if "truncate" in obj:
        val = motivic.as_series(val).truncate(Fraction(str(obj["truncate"])))
    out = {"value": val.to_json(), "text": str(val)}
    d = val.dim()
    out["dim"] = "-inf" if d == motivic.NEG_INFINITY else _q(d)
    if d == motivic.NEG_INFINITY:
        out["seminorm"] = "0"
    elif Fraction(d).denominator == 1:
        out["seminorm"] = _q(Fraction(2) ** int(d))
    else:
        out["seminorm"] = repr(val.seminorm())
    text = str(val)
    if isinstance(val, motivic.MotPoly):
        out["poincare"] = val.poincare_str()
        out["E"] = val.e_poly_str()
    if args.q is not None:
        count = val.realize_point_count(args.q)
        out["q"] = str(args.q)
        out["count"] = _q(count)
        text = _q(count)
    return out, text


def cmd_covers(args):
    if args.cover is not None:
        cover = cover_from_json(_load(args.cover, COVER_SCHEMA, "--cover"))
        prec = args.precision or 16
        model = integral_model(cover, prec)
        out = {"cover": cover.to_json(), "degree": str(model.n),
               "min_poly": [str(c) for c in model.min_poly],
               "prec": str(prec)}
        mp = [-c for c in model.min_poly] + [TruncSeries.one(model.field)]
        out["disc_valuation"] = str(disc_valuation(mp))
        if isinstance(cover, ASCover):
            j = jump(cover)
            a, b = as_exponents(cover.p, j)
            out.update({"jump": str(j), "a": str(a), "b": str(b),
                        "conductor": str((cover.p - 1) * (j + 1))})
        return out, json.dumps(out, sort_keys=True)
    if args.n is None or args.q is None:
        raise ValidationError("covers needs --cover, or --n and --q")
    fams = enumerate_etale(args.n, args.q)
    out = {"n": str(args.n), "q": str(args.q), "families": [f.to_json() for f in fams],
           "mass": _q(mass(args.n, args.q))}
    if args.n in (2, 3):
        out["serre"] = _q(serre_mass_check(args.n, args.q))
    lines = []
    for f in fams:
        if f.jumps is None:
            lines.append(f"{f.label}: aut {f.aut_order}, conductor {artin_conductor(f)}, "
                         f"count {f.count_at(args.q)}")
        else:
            lines.append(f"{f.label}: aut {f.aut_order}, conductor {f.conductor}, count {f.count}")
    return out, "\n".join(lines)


COMMANDS = {
    "stringy": cmd_stringy,
    "mckay": cmd_mckay,
    "vinv": cmd_vinv,
    "bhargava": cmd_bhargava,
    "ring": cmd_ring,
    "covers": cmd_covers,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wildmckay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--action", help="action JSON")
        p.add_argument("--cover", help="cover JSON")
        p.add_argument("--eval", help="ring expression JSON, e.g. '{\"expr\": \"L^2+L\"}'")
        p.add_argument("--n", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--jump-cap", type=int, dest="jump_cap")
        p.add_argument("--precision", type=int, help="starting t-adic precision")
        p.add_argument("--samples", type=int, default=10,
                       help="random covers per jump used to confirm jump-only dependence")
        p.add_argument("--char", type=int, default=0, help="base characteristic (0 = none)")
        p.add_argument("--check-inertia", action="store_true", dest="check_inertia")
        p.add_argument("--strict", action="store_true",
                       help="exit 3 when the wild tail is undetermined")
        p.add_argument("--out", help="write the report to this file")
        p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        report, text = COMMANDS[args.command](args)
    except (PrecisionExhausted, UndeterminedTail) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except WildMcKayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = json.dumps(report, sort_keys=True, indent=2) if args.format == "json" else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
