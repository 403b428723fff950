"""Command-line interface: ``pbwk series|algebra|rep|pbw ...``.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 a ring
obstruction (a needed integer is not invertible), 3 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Callable

from .coeff import NotInvertible, Ring
from .envelope import (
    PBW,
    compatibility_check,
    conjugation_check,
    hypothesis_obstruction,
    inversion_check,
    power_check,
    strong_pbw_automorphism,
    strong_pbw_derivations,
    strong_pbw_filtration,
    symmetrization_formula_check,
)
from .parsing import ParseError, parse_env, parse_number, parse_series, parse_sym
from .series import (
    BiTruncSeries,
    TruncSeries,
    bernoulli_numbers,
    defect_general,
    defect_rep,
    phi_c,
    solve_rep,
    solve_rep_all,
    theta_c,
)
from .superlie import (
    BUILTINS,
    LieMorphism,
    SuperLieAlgebra,
    free_nilpotent,
    nilpotency_class,
    standard_automorphisms,
    validate,
)
from .symcoalg import DegreeBeyondCap, commutator_defect, format_mono, functoriality_check

EXIT_OK, EXIT_FAIL, EXIT_RING, EXIT_INPUT = 0, 1, 2, 3
MAX_DEGREE = 8


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# reports


class Report:
    """Verdict plus named fields; rendered as text lines or JSON."""

    def __init__(self, command: str):
        self.command = command
        self.ok = True
        self.fields: dict = {}
        self.lines: list[str] = []
        self.checks: list[dict] = []

    def line(self, s: str):
        self.lines.append(s)

    def check(self, name: str, failures: dict, describe: Callable | None = None, degree: int | None = None):
        entry = {"check": name, "ok": not failures, "failures": len(failures)}
        if degree is not None:
            entry["degree"] = degree
        if failures:
            self.ok = False
            key, val = next(iter(failures.items()))
            entry["witness"] = describe(key, val) if describe else f"{key}: {val}"
        self.checks.append(entry)
        return entry

    def to_json(self) -> dict:
        out = {"command": self.command, "ok": self.ok}
        out.update(self.fields)
        if self.checks:
            out["checks"] = self.checks
        return out

    def to_text(self) -> str:
        out = list(self.lines)
        if self.checks:
            w = max(len(c["check"]) for c in self.checks)
            for c in self.checks:
                deg = f"  degree {c['degree']}" if "degree" in c else ""
                verdict = "pass" if c["ok"] else f"FAIL ({c['failures']})"
                out.append(f"{c['check']:<{w}}{deg}  {verdict}")
                if not c["ok"]:
                    out.append(f"  first failure: {c['witness']}")
            out.append("all checks pass" if self.ok else "some checks failed")
        return "\n".join(out)


# ---------------------------------------------------------------------------
# input helpers


def _ring(args) -> Ring:
    try:
        return Ring.parse(args.ring) if getattr(args, "ring", None) else Ring.default()
    except ValueError as e:
        raise InputError(str(e)) from e


_FN_RE = re.compile(r"^free_nilpotent[(:](\d+)[,:](\d+)\)?$")


def load_algebra(source: str, ring: Ring | None) -> SuperLieAlgebra:
    """A JSON file, a built-in name (heisenberg, sl2, super) or ``free_nilpotent(G,N)``."""
    if os.path.exists(source):
        try:
            return SuperLieAlgebra.load(source, ring)
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise InputError(f"bad algebra file {source}: {e}") from e
    r = ring or Ring.default()
    if source in BUILTINS:
        return BUILTINS[source](r)
    m = _FN_RE.match(source.replace(" ", ""))
    if m:
        return free_nilpotent(int(m.group(1)), int(m.group(2)), r)
    raise InputError(f"no such algebra file or built-in: {source}")


def _algebra(args) -> SuperLieAlgebra:
    ring = Ring.parse(args.ring) if args.ring else None
    return load_algebra(args.algebra, ring)


def _degree(args) -> int:
    d = args.degree
    if d < 0:
        raise InputError("degree must be >= 0")
    if d > MAX_DEGREE and not args.unsafe_degree:
        raise InputError(f"degree {d} exceeds {MAX_DEGREE}; pass --unsafe-degree to allow it")
    return d


def _number(text: str):
    try:
        return parse_number(text)
    except ParseError as e:
        raise InputError(str(e)) from e


def _mono_str(alg, m) -> str:
    return format_mono(alg, m)


# ---------------------------------------------------------------------------
# series


def cmd_series(args, rep: Report) -> None:
    ring = _ring(args)
    sub = args.series_cmd
    if sub == "bernoulli":
        bs = bernoulli_numbers(args.n)
        rep.fields["values"] = [str(b) for b in bs]
        rep.line(", ".join(str(b) for b in bs))
        return
    if sub in ("phi", "theta"):
        c = _number(args.c)
        s = (phi_c if sub == "phi" else theta_c)(c, args.cap, ring)
        rep.fields["coefficients"] = [str(x) for x in s.coeffs]
        rep.line(str(s))
        return
    if sub == "check-rep":
        phi = parse_series(args.phi, args.cap, ring)
        d = defect_rep(phi)
        _defect(rep, d)
        return
    if sub == "check-gen":
        phi, psi, rho = (parse_series(e, args.cap, ring) for e in (args.phi, args.psi, args.rho))
        _defect(rep, defect_general(phi, psi, rho))
        return
    if sub == "solve":
        c0 = _number(args.c0)
        if ring.coerce(c0) == 0:
            sols = solve_rep_all(c0, args.cap, ring)
            rep.fields["solutions"] = [
                {"series": [str(x) for x in s.series.coeffs], "free": list(s.free)} for s in sols
            ]
            for s in sols:
                free = f"  (free: {', '.join(f'c{k}' for k in s.free)})" if s.free else ""
                rep.line(f"{s.series}{free}")
            return
        s = solve_rep(c0, args.cap, ring)
        rep.fields["coefficients"] = [str(x) for x in s.coeffs]
        rep.line(str(s))
        return
    raise InputError(f"unknown series command {sub}")


def _defect(rep: Report, d: BiTruncSeries):
    rep.fields["defect_zero"] = d.is_zero()
    rep.fields["defect"] = str(d)
    rep.ok = d.is_zero()
    rep.line("defect = 0" if d.is_zero() else f"defect = {d}")


# ---------------------------------------------------------------------------
# algebra


def cmd_algebra(args, rep: Report) -> None:
    if args.algebra_cmd == "validate":
        alg = load_algebra(args.file, Ring.parse(args.ring) if args.ring else None)
        r = validate(alg, samples=args.samples, seed=args.seed)
        N = nilpotency_class(alg)
        rep.fields.update({"valid": r.ok, "dimension": alg.dim, "nilpotency_class": N, "ring": str(alg.ring)})
        rep.fields["violations"] = [str(v) for v in r.violations]
        rep.ok = r.ok
        if r.ok:
            nil = f"{N}-nilpotent" if N is not None else "not nilpotent"
            rep.line(f"valid, {nil}")
        else:
            rep.line("invalid")
            for v in r.violations:
                rep.line(f"  {v}")
        return
    if args.algebra_cmd == "free-nilpotent":
        alg = free_nilpotent(args.gens, args.class_, _ring(args))
        if args.out:
            alg.dump(args.out)
        rep.fields.update({"rank": alg.dim, "labels": list(alg.labels), "out": args.out})
        rep.line(f"rank {alg.dim}: {' '.join(alg.labels)}")
        if args.out:
            rep.line(f"written to {args.out}")
        else:
            rep.line(json.dumps(alg.to_json(), indent=2))
        return
    raise InputError(f"unknown algebra command {args.algebra_cmd}")


# ---------------------------------------------------------------------------
# representations


def _series_for(args, alg, D, expr):
    cap = args.cap if args.cap is not None else D + 1
    return parse_series(expr, cap, alg.ring)


def _per_degree(rep, name, alg, failures: dict, D: int, key_mono, describe):
    for d in range(D + 1):
        sub = {k: v for k, v in failures.items() if len(key_mono(k)) == d}
        rep.check(name, sub, describe, degree=d)


def cmd_rep(args, rep: Report) -> None:
    alg = _algebra(args)
    D = _degree(args)
    if args.rep_cmd in ("check", "commute"):
        if args.rep_cmd == "check":
            phi = psi = lam = _series_for(args, alg, D, args.phi)
            name = "representation"
        else:
            cap = args.cap if args.cap is not None else D + 1
            phi = phi_c(_number(args.g), cap, alg.ring)
            psi = phi_c(_number(args.h), cap, alg.ring)
            lam = TruncSeries.zero(alg.ring, cap)
            name = "commuting"
        fails = {}
        for a in range(alg.dim):
            for b in range(alg.dim):
                for m, v in commutator_defect(phi, psi, lam, a, b, alg, D).items():
                    fails[(a, b, m)] = v

        def describe(k, v):
            a, b, m = k
            return f"a={alg.labels[a]} b={alg.labels[b]} on {_mono_str(alg, m)}: {v}"

        _per_degree(rep, name, alg, fails, D, lambda k: k[2], describe)
        return
    if args.rep_cmd == "functorial":
        try:
            with open(args.morphism) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"bad morphism file {args.morphism}: {e}") from e
        target = alg
        target_name = args.target or data.get("target")
        if target_name:
            target = load_algebra(target_name, alg.ring)
        try:
            f = LieMorphism.from_json(data, alg, target)
        except (KeyError, ValueError, TypeError, AttributeError) as e:
            raise InputError(f"bad morphism: {e}") from e
        hom = f.check()
        rep.check("morphism", {i: v for i, v in enumerate(hom.violations)}, lambda k, v: str(v))
        if not hom.ok:
            return
        phi = _series_for(args, alg, D, args.phi)
        fails = functoriality_check(f, phi, D, phi_target=parse_series(args.phi, phi.cap, target.ring))

        def describe(k, v):
            a, m = k
            return f"a={alg.labels[a]} on {_mono_str(alg, m)}: {v}"

        _per_degree(rep, "functorial", alg, fails, D, lambda k: k[1], describe)
        return
    raise InputError(f"unknown rep command {args.rep_cmd}")


# ---------------------------------------------------------------------------
# PBW


def _require_hypothesis(alg):
    k = hypothesis_obstruction(alg)
    if k is not None:
        N = nilpotency_class(alg)
        why = f"the algebra is {N}-nilpotent and needs 1/2..1/{N}" if N else "the algebra is not nilpotent and the ring does not contain Q"
        raise NotInvertible(k, alg.ring) from ValueError(why)


def cmd_pbw(args, rep: Report) -> None:
    alg = _algebra(args)
    sub = args.pbw_cmd
    if sub == "symbol":
        u = parse_env(args.expr, alg)
        _require_hypothesis(alg)
        w = PBW(alg, degree=max(u.degree, 1)).symbol(u)
        rep.fields.update({"input": str(u), "symbol": str(w)})
        rep.line(str(w))
        return
    if sub == "symmetrize":
        w = parse_sym(args.expr, alg)
        _require_hypothesis(alg)
        u = PBW(alg, degree=max(w.degree, 1)).symmetrize(w)
        rep.fields.update({"input": str(w), "symmetrization": str(u)})
        rep.line(str(u))
        return
    D = _degree(args)
    _require_hypothesis(alg)
    pbw = PBW(alg, degree=D + 1)
    if sub == "verify":
        ms = lambda k, v: f"{k}: {v}"
        rep.check("sigma/beta inverse", inversion_check(alg, D, pbw), ms)
        rep.check("filtration and grading", strong_pbw_filtration(alg, D, pbw), ms)
        rep.check("coproduct compatibility", compatibility_check(alg, D, pbw), ms)
        rep.check("inner derivations", strong_pbw_derivations(alg, D, pbw), ms)
        for name, f in standard_automorphisms(alg):
            rep.check(f"automorphism {name}", strong_pbw_automorphism(f, D, pbw), ms)
        rep.check("powers", power_check(alg, D, pbw.phi), ms)
        if alg.ring.kind == "rational":
            rep.check("symmetrization formula", symmetrization_formula_check(alg, min(D, 4), pbw), ms)
        return
    if sub == "conjugate":
        for a in range(alg.dim):
            fails = conjugation_check(args.kind, a, alg, D, pbw)
            rep.check(
                f"{args.kind} {alg.labels[a]}",
                fails,
                lambda k, v: f"on {_mono_str(alg, k)}: {v}",
            )
        return
    raise InputError(f"unknown pbw command {sub}")


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--ring", default=None, help="Q, Z or Z/n (default: $PBWK_DEFAULT_RING or Q)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--unsafe-degree", action="store_true", help=f"allow --degree above {MAX_DEGREE}")

    p = _Parser(prog="pbwk", description="Exact checks for coderivation representations and PBW symmetrization.")
    sp = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    ser = sp.add_parser("series", help="functional equations for formal series")
    ss = ser.add_subparsers(dest="series_cmd", required=True, parser_class=_Parser)
    x = ss.add_parser("bernoulli", parents=[common])
    x.add_argument("--n", type=int, required=True)
    for name in ("phi", "theta"):
        x = ss.add_parser(name, parents=[common])
        x.add_argument("--c", required=True)
        x.add_argument("--cap", type=int, default=8)
    x = ss.add_parser("check-rep", parents=[common])
    x.add_argument("--phi", required=True)
    x.add_argument("--cap", type=int, default=8)
    x = ss.add_parser("solve", parents=[common])
    x.add_argument("--c0", required=True)
    x.add_argument("--cap", type=int, default=8)
    x = ss.add_parser("check-gen", parents=[common])
    for name in ("phi", "psi", "rho"):
        x.add_argument(f"--{name}", required=True)
    x.add_argument("--cap", type=int, default=8)

    alg = sp.add_parser("algebra", help="Lie superalgebra files")
    sa = alg.add_subparsers(dest="algebra_cmd", required=True, parser_class=_Parser)
    x = sa.add_parser("validate", parents=[common])
    x.add_argument("file")
    x.add_argument("--samples", type=int, default=100)
    x = sa.add_parser("free-nilpotent", parents=[common])
    x.add_argument("--gens", type=int, required=True)
    x.add_argument("--class", dest="class_", type=int, required=True)
    x.add_argument("--out", default=None)

    rp = sp.add_parser("rep", help="representation identities on S(g)")
    sr = rp.add_subparsers(dest="rep_cmd", required=True, parser_class=_Parser)
    for name in ("check", "commute", "functorial"):
        x = sr.add_parser(name, parents=[common])
        x.add_argument("--algebra", required=True)
        x.add_argument("--degree", type=int, default=4)
        x.add_argument("--cap", type=int, default=None, help="series cap (default degree + 1)")
        if name == "commute":
            x.add_argument("--g", required=True)
            x.add_argument("--h", required=True)
        else:
            x.add_argument("--phi", default="phi(1)")
        if name == "functorial":
            x.add_argument("--morphism", required=True)
            x.add_argument("--target", default=None)

    pb = sp.add_parser("pbw", help="symbol map and symmetrization")
    sb = pb.add_subparsers(dest="pbw_cmd", required=True, parser_class=_Parser)
    for name in ("symbol", "symmetrize", "verify", "conjugate"):
        x = sb.add_parser(name, parents=[common])
        x.add_argument("--algebra", required=True)
        if name in ("symbol", "symmetrize"):
            x.add_argument("--expr", required=True)
        else:
            x.add_argument("--degree", type=int, default=4)
        if name == "conjugate":
            x.add_argument("--kind", choices=("adjoint", "left", "right"), required=True)
    return p


COMMANDS = {"series": cmd_series, "algebra": cmd_algebra, "rep": cmd_rep, "pbw": cmd_pbw}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits for --help and for usage errors
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    rep = Report(" ".join([args.cmd, getattr(args, f"{args.cmd}_cmd")]))
    code = EXIT_OK
    error = None
    try:
        COMMANDS[args.cmd](args, rep)
        code = EXIT_OK if rep.ok else EXIT_FAIL
    except NotInvertible as e:
        code = EXIT_RING
        why = f" ({e.__cause__})" if e.__cause__ else ""
        error = f"{e.value} not invertible in {e.ring}{why}" if e.ring else f"{e.value} not invertible{why}"
        rep.fields["not_invertible"] = str(e.value)
    except (InputError, ParseError, DegreeBeyondCap, ValueError, OSError) as e:
        code = EXIT_INPUT
        error = str(e)
    if error is not None:
        rep.ok = False
        rep.fields["error"] = error
    rep.fields["exit_code"] = code
    if args.output == "json":
        print(json.dumps(rep.to_json(), indent=2), file=out)
    else:
        text = rep.to_text()
        if text:
            print(text, file=out)
        if error is not None:
            print(f"error: {error}", file=err)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
