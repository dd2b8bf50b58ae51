"""Command-line entry point: ``betalab <subcommand> [flags]``.

Exit status is 0 on success, 1 on a usage error and 2 when a checked claim
does not hold.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any, Sequence

from . import beta_dynamics as bd
from . import families_finiteness as ff
from . import repro
from . import word_calculus as wc
from .exact_field import FieldElement, FieldError, PisotNumber, make_pisot, parse_coeffs
from .lattice_tau import lattice

EXIT_OK, EXIT_USAGE, EXIT_CLAIM = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _triple(text: str) -> tuple[int, int, int]:
    parts = [int(t) for t in text.replace(" ", "").split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected l,k,j")
    return tuple(parts)  # type: ignore[return-value]


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--family", choices=["p", "q", "r", "poly"], default="p")
    p.add_argument("--n", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--coeffs", help="comma-separated, leading coefficient first")
    p.add_argument("--allow-non-pisot", action="store_true")
    p.add_argument("--cap", type=int, default=bd.DEFAULT_CAP)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="write output here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="betalab", description="Exact beta-expansion laboratory.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("expand", parents=[common], help="greedy expansion of one element")
    s.add_argument("--x", type=int, help="a non-negative integer")
    s.add_argument("--elem", help="power-basis coordinates a0,a1,... (optionally /den)")

    sub.add_parser("one", parents=[common], help="expansion of 1 and its classification")

    s = sub.add_parser("scan", parents=[common], help="F1 scan over 1..nmax")
    s.add_argument("--nmax", type=int, default=ff.DEFAULT_NMAX)

    s = sub.add_parser("residues", parents=[common], help="residue-class claims for the cubic family")
    s.add_argument("--n-lo", type=int, default=2)
    s.add_argument("--n-hi", type=int, default=30)

    s = sub.add_parser("tau-orbit", parents=[common], help="orbit of a lattice point")
    s.add_argument("--point", type=_triple, required=True, help="l,k,j")

    s = sub.add_parser("census", parents=[common], help="all tau orbits in a ball")
    s.add_argument("--radius", type=int, default=30)
    s.add_argument("--shell", type=int)

    sub.add_parser("akiyama", parents=[common], help="Akiyama's set and property F")

    s = sub.add_parser("suff", parents=[common], help="sufficient condition for F1")
    s.add_argument("--nmax", type=int, default=0, help="cross-check by scanning when the condition holds")

    sub.add_parser("q-check", parents=[common], help="Q-family words")
    sub.add_parser("r-check", parents=[common], help="R-family words")

    s = sub.add_parser("repro-paper", parents=[common], help="run every reproduction check")
    s.add_argument("--only", action="append", help="check function name, repeatable")

    s = sub.add_parser("trace", parents=[common], help="rewrite trace of one unfolding")
    s.add_argument("--rule", choices=["u", "w", "ww"], default="u")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    return parser


def _need(args, *names: str) -> None:
    missing = [f"--{x}" for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"--family {args.family} needs {' '.join(missing)}")


def family_spec(args) -> ff.FamilySpec | None:
    if args.family == "poly":
        return None
    _need(args, "n")
    if args.family == "p":
        return ff.FamilySpec("P", args.n)
    if args.family == "q":
        _need(args, "b", "c")
        return ff.FamilySpec("Q", args.n, args.b, args.c)
    _need(args, "c")
    return ff.FamilySpec("R", args.n, c=args.c)


def resolve_beta(args) -> tuple[PisotNumber, str]:
    spec = family_spec(args)
    if spec is None:
        if not args.coeffs:
            raise UsageError("--family poly needs --coeffs")
        P = make_pisot(parse_coeffs(args.coeffs), strict=not args.allow_non_pisot)
        return P, f"poly[{args.coeffs}]"
    return ff.build(spec, args.allow_non_pisot), spec.label


def _element(P: PisotNumber, args) -> FieldElement:
    if args.elem:
        text, _, den = args.elem.partition("/")
        return P.element([int(t) for t in text.split(",")], int(den or 1))
    if args.x is None:
        raise UsageError("expand needs --x or --elem")
    return P.from_int(args.x)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _kv_text(d: dict) -> str:
    return "".join(f"{k}: {v}\n" for k, v in d.items())


# each handler returns (text to emit, claim ok)


def cmd_expand(args):
    P, label = resolve_beta(args)
    res = bd.expand(_element(P, args), args.cap)
    if args.format == "json":
        return _dump({"beta": label, **res.to_json()}), True
    if args.format == "csv":
        w = res.word
        return _csv(["beta", "kind", "int_part", "preperiod", "period"], [[label, res.kind.value, bd.render_digits(w.int_part), bd.render_digits(w.frac_preperiod), bd.render_digits(w.frac_period)]]), True
    return res.word.render() + "\n", True


def cmd_one(args):
    P, label = resolve_beta(args)
    one = bd.expansion_of_one(P, args.cap)
    labels = sorted(bd.classify_one_expansion(P)) if one.is_finite else []
    if args.format == "json":
        return _dump({"beta": label, "word": one.to_json(), "finite": one.is_finite, "classes": labels, "pisot": P.is_pisot}), True
    if args.format == "csv":
        return _csv(["beta", "digits", "finite", "classes"], [[label, one.render(point=False), one.is_finite, " ".join(labels)]]), True
    return one.render(point=False) + "\n", True


def cmd_scan(args):
    P, label = resolve_beta(args)
    rep = ff.scan_f1(P, args.nmax, args.cap, label)
    if args.format == "json":
        return _dump(rep.to_json()), True
    if args.format == "csv":
        return _csv(["N", "period"], [[N, bd.render_digits(rep.periods[N])] for N in rep.non_finite]), True
    first = rep.non_finite[0] if rep.non_finite else None
    text = _kv_text({
        "beta": label,
        "scanned_to": rep.scanned_to,
        "non_finite": len(rep.non_finite),
        "first_non_finite": first,
        "gaps": rep.gaps,
        "verdict": rep.to_json()["verdict"],
    })
    return text, True


def cmd_residues(args):
    claims = ff.residue_table(args.n_lo, args.n_hi)
    ok = all(c.passed for c in claims)
    if args.format == "json":
        return _dump([c.to_json() for c in claims]), ok
    if args.format == "csv":
        return _csv(["n", "claim", "expected", "observed", "passed"], [[c.n, c.name, c.expected, c.observed, c.passed] for c in claims]), ok
    return "".join(f"{'PASS' if c.passed else 'FAIL'}  n={c.n:<3} {c.name}\n" for c in claims), ok


def _lattice_n(args) -> int:
    if args.family != "p":
        raise UsageError("the lattice map is defined for --family p")
    _need(args, "n")
    return args.n


def cmd_tau_orbit(args):
    L = lattice(_lattice_n(args))
    o = L.orbit(args.point, args.cap)
    if args.format == "json":
        return _dump({"n": L.n, **o.to_json()}), True
    if args.format == "csv":
        return _csv(["step", "l", "k", "j", "digit"], [[i, *p, o.digits[i] if i < len(o.digits) else ""] for i, p in enumerate(o.points)]), True
    return _kv_text({"kind": o.kind.value, "preperiod": o.preperiod, "period": o.period, "digits": bd.render_digits(o.digits), "points": len(o.points)}), True


def cmd_census(args):
    L = lattice(_lattice_n(args))
    cen = L.census(args.radius, args.cap, args.shell)
    if args.format == "csv":
        return cen.to_csv(), True
    if args.format == "json":
        out = json.loads(cen.cycles_json())
        out["summary"] = cen.summary()
        return _dump(out), True
    return _kv_text(cen.summary()), True


def cmd_akiyama(args):
    P, label = resolve_beta(args)
    rep = ff.akiyama_set(P, args.cap, label)
    if args.format == "json":
        return _dump(rep.to_json()), True
    if args.format == "csv":
        return _csv(["num", "den", "finite"], [[" ".join(map(str, e.element.num)), e.element.den, e.finite] for e in rep.elements]), True
    d = rep.to_json()
    return _kv_text({k: d[k] for k in ("beta", "bound", "box", "size", "non_finite", "property_F")}), True


def cmd_suff(args):
    P, label = resolve_beta(args)
    rep = ff.check_suff(P, args.nmax or None, label, args.cap)
    ok = rep.scan is None or not rep.scan.non_finite
    if args.format == "json":
        return _dump(rep.to_json()), ok
    if args.format == "csv":
        return _csv(["beta", "verdict"], [[label, rep.verdict.value]]), ok
    return _kv_text({"beta": label, "verdict": rep.verdict.value, **{f"alpha^{i} finite": v for i, v in rep.powers.items()}}), ok


def _family_report(args, fn):
    rep = fn(args)
    ok = all(v for k, v in rep.items() if isinstance(v, bool) and k != "pisot")
    if args.format == "json":
        return _dump(rep), ok
    if args.format == "csv":
        return _csv(list(rep), [list(rep.values())]), ok
    return _kv_text(rep), ok


def cmd_q_check(args):
    if args.family != "q":
        raise UsageError("q-check needs --family q")
    spec = family_spec(args)
    return _family_report(args, lambda a: ff.q_family_checks(spec.n, spec.b, spec.c, a.cap))


def cmd_r_check(args):
    if args.family != "r":
        raise UsageError("r-check needs --family r")
    spec = family_spec(args)
    return _family_report(args, lambda a: ff.r_family_checks(spec.n, spec.c, a.cap))


def cmd_repro(args):
    checks = repro.run_all(args.threads, set(args.only) if args.only else None)
    ok = all(c.passed for c in checks)
    if args.format == "json":
        return _dump({"checks": [c.to_json() for c in checks], "passed": ok}), ok
    if args.format == "csv":
        return _csv(["key", "passed", "failures"], [[c.key, c.passed, len(c.failures)] for c in checks]), ok
    return "".join(c.line() + "\n" for c in checks), ok


def cmd_trace(args):
    n = _lattice_n(args)
    trace: list = []
    if args.rule == "u":
        prefix, suffix = wc.unfold_u(n, args.k, args.j, trace)
    elif args.rule == "w":
        prefix, suffix = wc.unfold_w(n, args.k, args.j, trace)
    else:
        prefix, suffix = wc.unfold_ww(n, args.k, args.j, trace)
    if args.format == "json":
        return wc.trace_json(trace) + "\n", True
    if args.format == "csv":
        return _csv(["rule", "position", "addend", "result"], [[t.rule, t.position, wc.render(t.addend), wc.render(t.result)] for t in trace]), True
    return f"{wc.render(prefix.digits)} . {wc.render(suffix.digits)}\n", True


HANDLERS = {
    "expand": cmd_expand,
    "one": cmd_one,
    "scan": cmd_scan,
    "residues": cmd_residues,
    "tau-orbit": cmd_tau_orbit,
    "census": cmd_census,
    "akiyama": cmd_akiyama,
    "suff": cmd_suff,
    "q-check": cmd_q_check,
    "r-check": cmd_r_check,
    "repro-paper": cmd_repro,
    "trace": cmd_trace,
}


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        text, ok = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"betalab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FieldError, ff.ConstraintViolation, ValueError) as exc:
        print(f"betalab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except bd.OrbitTruncated as exc:
        print(f"betalab: {exc}", file=sys.stderr)
        return EXIT_CLAIM
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if ok else EXIT_CLAIM


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
