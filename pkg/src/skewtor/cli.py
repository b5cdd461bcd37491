"""Command-line entry point.

Exit codes: 0 the check passed, 1 it ran and failed (or a budget ran out),
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import presentations as pres
from .algebra import ParseError, parse_relations, parse_polynomial
from .presentations import Presentation
from .reps import NotCoprime, DimensionZero, check_theorem1_numeric, clock_shift, relation_residuals
from .rewriting import (
    Budgets,
    CompletionBudgetExceeded,
    NonOrientable,
    StepBudgetExceeded,
    ZeroRelation,
    count_normal_words,
    derives,
)
from .theta import (
    RepresentativeOutOfRange,
    SeriesConfig,
    SingularCoefficient,
    SklyaninParams,
    TauNotInUpperHalfPlane,
    TruncationToleranceNotMet,
    eval_theta_r,
    sklyanin_relations,
    theta_with_tail,
)

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """``a+bi`` syntax; a bare ``i`` is the imaginary unit."""
    s = text.strip().replace(" ", "")
    if not s:
        raise InputError("empty complex number")
    s = re.sub(r"(^|[+\-])i$", r"\g<1>1i", s)
    s = s.replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def _fmt_complex(z: complex) -> list[float]:
    return [z.real, z.imag]


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _series(args) -> SeriesConfig:
    return SeriesConfig(args.max_index, args.tail_tol)


def _budgets(args) -> Budgets:
    return Budgets(args.rules, args.steps)


def _presentation(spec: str, star_closed: bool = True) -> Presentation:
    """Registry name or an inline ``;``-separated relation list."""
    if spec in pres.REGISTRY:
        return pres.named(spec)
    try:
        rels = parse_relations(spec)
    except ParseError as exc:
        raise InputError(f"{spec!r} is neither a known presentation nor parseable: {exc}") from None
    if not rels:
        raise InputError("empty relation list")
    gens = set().union(*(r.generators() for r in rels))
    if gens <= set(pres.TORUS_GENERATORS):
        gens = set(pres.TORUS_GENERATORS)
    return Presentation("inline", tuple(sorted(gens)), tuple(rels), star_closed)


# ---------------------------------------------------------------------------
# subcommands


def cmd_theta(args) -> int:
    z, tau = parse_complex(args.z), parse_complex(args.tau)
    value, first, bound = theta_with_tail(z, tau, _series(args))
    ok = first <= args.tail_tol
    _emit(
        args,
        {
            "z": _fmt_complex(z),
            "tau": _fmt_complex(tau),
            "value": _fmt_complex(value),
            "first_omitted": first,
            "tail_bound": bound,
            "ok": ok,
        },
        [f"theta({z}; tau={tau}) = {value!r}", f"first omitted term: {first:.3e}", f"tail bound: {bound:.3e}"],
    )
    if not ok:
        print(f"first omitted term {first:.3e} exceeds tail_tol", file=sys.stderr)
        return FAILED
    return OK


def cmd_theta_r(args) -> int:
    z, tau = parse_complex(args.z), parse_complex(args.tau)
    value = eval_theta_r(z, args.r, args.n, tau, _series(args))
    _emit(
        args,
        {"z": _fmt_complex(z), "tau": _fmt_complex(tau), "r": args.r, "n": args.n, "value": _fmt_complex(value)},
        [f"theta_{args.r}({z}; n={args.n}, tau={tau}) = {value!r}"],
    )
    return OK


def cmd_sklyanin(args) -> int:
    if args.n < 3:
        raise InputError(f"n must be >= 3, got {args.n}")
    eta = parse_complex(args.eta) if args.eta is not None else None
    params = SklyaninParams(args.n, parse_complex(args.tau), eta)
    try:
        table = sklyanin_relations(params, _series(args), pivot_tol=args.pivot_tol)
    except SingularCoefficient as exc:
        print(f"SingularCoefficient: {exc}", file=sys.stderr)
        return FAILED
    d = table.to_dict()
    lines = [f"({e['i']},{e['j']}): {e['relation']} = 0" for e in d["entries"]]
    lines.append(f"entries: {len(d['entries'])}, basis size: {d['basis_size']}")
    _emit(args, d, lines)
    return OK


def cmd_derive(args) -> int:
    source = _presentation(args.source)
    target = parse_polynomial(args.target)
    star = source.star_closed and not args.no_star
    ok, trace = derives(list(source.relations), target, pres.DEFAULT_ORDER if _is_torus(source) else None,
                        _budgets(args), star_close=star)
    _emit(
        args,
        {
            "source": source.name,
            "presentation": source.to_dict(),
            "target": str(target),
            "derivable": ok,
            "normal_form": str(trace.end),
            "trace": trace.lines(),
        },
        [str(ok).lower()] + trace.lines(),
    )
    return OK if ok else FAILED


def _is_torus(p: Presentation) -> bool:
    return set(p.generators) <= set(pres.TORUS_GENERATORS)


def _adjust(p: Presentation, args) -> Presentation:
    if args.mu_one:
        p = p.specialize_mu()
    return p


def cmd_equiv(args) -> int:
    a = _adjust(_presentation(args.a), args)
    b = _adjust(_presentation(args.b), args)
    if args.rescale_unit == "a":
        a = a.rescale_unit()
    elif args.rescale_unit == "b":
        b = b.rescale_unit()
    rep = pres.compare(a, b, _budgets(args))
    lines = [
        f"{a.name} from {b.name}: {str(rep.a_in_b).lower()}",
        f"{b.name} from {a.name}: {str(rep.b_in_a).lower()}",
    ]
    for d, r, nf in rep.residuals():
        lines.append(f"  residual ({d}): {r} -> {nf}")
    if rep.system_a.is_trivial or rep.system_b.is_trivial:
        lines.append("  note: a side presents the zero algebra (e reduces to 0)")
    payload = rep.to_dict()
    payload.update(a=a.name, b=b.name, presentation_a=a.to_dict(), presentation_b=b.to_dict())
    _emit(args, payload, lines)
    return OK if rep.equivalent else FAILED


def cmd_check_iso(args) -> int:
    report = pres.theorem1_check(_budgets(args))
    _emit(args, report.to_dict(), report.lines())
    return OK if report.passed else FAILED


def cmd_rep_check(args) -> int:
    presentation = _presentation(args.presentation)
    theta = args.theta if args.theta is not None else args.p / args.q
    if args.presentation == "q4-mod-imu" and args.mu is None:
        report = check_theorem1_numeric(args.p, args.q)
    else:
        report = relation_residuals(clock_shift(args.p, args.q), presentation, theta, args.mu or 1.0)
    ok = report.max_residual < args.tol
    lines = [f"{rel}: {r:.3e}" for rel, r in report.residuals]
    lines.append(f"max_residual: {report.max_residual:.3e} ({'ok' if ok else 'FAILED'})")
    _emit(args, report.to_dict(), lines)
    return OK if ok else FAILED


def cmd_count_basis(args) -> int:
    if args.degree < 0:
        raise InputError("degree must be nonnegative")
    presentation = _presentation(args.presentation)
    rs = pres.rule_system(presentation, _budgets(args))
    counts = {d: count_normal_words(rs, d) for d in range(args.degree + 1)}
    _emit(
        args,
        {
            "presentation": presentation.to_dict(),
            "counts": {str(d): c for d, c in counts.items()},
            "rules": [str(r) for r in rs.rules],
        },
        [f"degree {d}: {c}" for d, c in counts.items()],
    )
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=os.environ.get("SKEWTOR_FORMAT", "text"))
    common.add_argument("--max-index", type=int, default=60)
    common.add_argument("--tail-tol", type=float, default=1e-14)
    common.add_argument("--pivot-tol", type=float, default=1e-9)
    common.add_argument("--tol", type=float, default=1e-11, help="residual tolerance")
    common.add_argument("--steps", type=int, default=100_000)
    common.add_argument("--rules", type=int, default=256)

    parser = argparse.ArgumentParser(prog="skewtor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", parents=[common], help="evaluate the theta series")
    p.add_argument("--z", default="0")
    p.add_argument("--tau", default="i")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("theta-r", parents=[common], help="evaluate a theta product")
    p.add_argument("--z", default="0")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", default="i")
    p.set_defaults(func=cmd_theta_r)

    p = sub.add_parser("sklyanin", parents=[common], help="Sklyanin relation table")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--tau", default="i")
    p.add_argument("--eta", default=None, help="default 1/n")
    p.set_defaults(func=cmd_sklyanin)

    p = sub.add_parser("derive", parents=[common], help="derive a relation from a presentation")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--no-star", action="store_true", help="do not add star images")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("equiv", parents=[common], help="compare two presentations")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--mu-one", action="store_true", help="specialise mu = 1 on both sides")
    p.add_argument("--rescale-unit", choices=("a", "b"), default=None, help="apply e -> mu^-1 e to one side")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("check-iso", parents=[common], help="run the isomorphism check")
    p.set_defaults(func=cmd_check_iso)

    p = sub.add_parser("rep-check", parents=[common], help="clock/shift residuals")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--presentation", default="eq8")
    p.add_argument("--theta", type=float, default=None, help="default p/q")
    p.add_argument("--mu", type=float, default=None)
    p.set_defaults(func=cmd_rep_check)

    p = sub.add_parser("count-basis", parents=[common], help="count normal words by degree")
    p.add_argument("--presentation", default="torus")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_count_basis)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        sys.stdout.reconfigure(line_buffering=True, encoding="utf-8")
    except (AttributeError, ValueError):
        pass
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except BrokenPipeError:
        # stdout closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return OK
    except (InputError, ParseError, TauNotInUpperHalfPlane, RepresentativeOutOfRange, NotCoprime,
            DimensionZero, ZeroRelation, NonOrientable, KeyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return BAD_INPUT
    except CompletionBudgetExceeded as exc:
        print(f"failed: {exc}; partial system has {len(exc.partial.rules)} rules:", file=sys.stderr)
        print(str(exc.partial), file=sys.stderr)
        return FAILED
    except (StepBudgetExceeded, TruncationToleranceNotMet) as exc:
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
