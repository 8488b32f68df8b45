"""The ``hmf`` command line.

Exit status is 0 on success, 1 on a domain error and 2 on a configuration
error; errors are written to stderr as one JSON object.  Set HMF_LOG to a
logging level name (DEBUG, INFO, ...) for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import kisin, local_galois as lg, qexp
from .embeddings import from_config, inert_quadratic, ramified_quadratic
from .errors import ConfigError, HmfError, UnknownSubcommand
from .finite_field import GF
from .weight_lattice import (
    hasse_compare,
    in_min_cone,
    is_irreducible_weight,
    lambda_class,
    lambda_equal,
    parse_vector,
)

log = logging.getLogger("hmfweights")

SUBCOMMANDS = ("cones", "decompose", "lambda", "pw1", "theta-cycle", "weight2", "kisin", "qexp", "selftest")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def _eset(args):
    if args.config:
        return from_config(_load_json(args.config))
    if args.p is None:
        raise ConfigError("give --p with --ram-quad/--inert-quad, or --config")
    if args.inert_quad:
        return inert_quadratic(args.p)
    return ramified_quadratic(args.p)


def _frac(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def _add_field_args(sp):
    sp.add_argument("--p", type=int)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--ram-quad", action="store_true", help="ramified quadratic field (default)")
    g.add_argument("--inert-quad", action="store_true", help="inert quadratic field")
    sp.add_argument("--config", help='JSON file {"primes": [{"id", "p", "f", "e"}, ...]}')


def cmd_cones(args):
    eset = _eset(args)
    k = parse_vector(eset, args.weight)
    _emit({"in_min_cone": in_min_cone(k, positive=args.positive), "positive": args.positive,
           "irreducible": is_irreducible_weight(k)})


def cmd_decompose(args):
    eset = _eset(args)
    res = hasse_compare(parse_vector(eset, args.hi), parse_vector(eset, args.lo))
    _emit({"comparable": res.comparable, "r": [_frac(x) for x in res.r]})


def cmd_lambda(args):
    eset = _eset(args)
    m = parse_vector(eset, args.m)
    out = {"lambda": lambda_class(m).to_dict()}
    if args.n is not None:
        n = parse_vector(eset, args.n)
        out["lambda_n"] = lambda_class(n).to_dict()
        out["equal"] = lambda_equal(m, n)
    _emit(out)


def cmd_pw1(args):
    rep = lg.parse_rep(args.rep, args.p)
    _emit({"lift": lg.pw1_lift_decision(rep, args.w, args.m)})


def cmd_theta_cycle(args):
    sys.stdout.write(lg.theta_cycle_csv(lg.parse_rep(args.rep, args.p)))


def cmd_weight2(args):
    rep = lg.parse_rep(args.rep, args.p)
    _emit({"membership": lg.weight2_membership(rep, args.a, args.b)})


def cmd_kisin(args):
    if args.p is not None and GF(args.q).p != args.p:
        raise ConfigError(f"q = {args.q} is not a power of p = {args.p}")
    if args.action == "ext-dim":
        exc = None if args.no_exceptional else ("default" if args.exceptional is None else args.exceptional)
        dim = kisin.ext_dimension(args.s, args.t, args.a, args.b, args.q, N=args.N, r=args.r,
                                  exceptional=exc, convention=args.convention)
        out = {"dim": dim, "classes": args.q ** dim}
        if args.list:
            reps = kisin.enumerate_extension_classes(args.s, args.t, args.a, args.b, args.q, N=args.N,
                                                     r=args.r, exceptional=exc, convention=args.convention)
            out["representatives"] = [list(y) for y in reps]
        _emit(out)
        return
    F = GF(args.q)
    families = {"w=p": kisin.family_w_p, "w=p+1": kisin.family_w_p1}
    src, tgt, mor = families[args.case](F, args.a, args.b, args.c, args.d)
    if args.perturbed:
        mor = kisin.perturbed_morphism(F)
    _emit({"commutes": kisin.check_phi_morphism(mor, src, tgt, args.N)})


def _qexp_apply(args):
    f = qexp.form_from_json(_load_json(args.form))
    op = args.op
    s = None if args.s is None else qexp.SAction(scalar=args.s)
    if op == "theta":
        g = qexp.op_Theta(f)
    elif op == "vp":
        g = qexp.op_Vp(f)
    elif op == "tv":
        if not args.prime:
            raise ConfigError("--op tv needs --prime")
        g = qexp.op_Tv(f, args.prime, s, level=args.level)
    elif op == "tp":
        g = qexp.op_Tp(f, s)
    elif op == "hasse":
        g = qexp.mul_Hasse(f, args.sigma, {t: args.constant for t in f.setup.components}, args.hasse_mode)
    elif op == "twist":
        if not args.char:
            raise ConfigError("--op twist needs --char")
        g = qexp.twist(f, args.char, args.twist_mode)
    else:  # argparse restricts the choices
        raise ConfigError(f"unknown op {op!r}")
    _emit(g.to_json())


def _qexp_eigenbuild(args):
    spec = _load_json(args.spec)
    try:
        fld = spec["field"]
        setup = qexp.default_setup(int(fld["D"]), int(fld["p"]), spec.get("q"))
        base = spec.get("base", {"t": setup.components[0], "mu": [1, 0]})
        eb = qexp.eigen_build(
            setup, spec["weight"]["k"], spec["weight"]["m"], int(spec["window"]["trace_bound"]),
            spec["eigenvalues"], spec.get("s_eigenvalues", {}), spec.get("level", []),
            ap_mode=spec.get("ap_mode", "none"), a_p=spec.get("a_p", 0), d_p=spec.get("d_p"),
            base=(base["t"], tuple(base["mu"])), base_value=spec.get("base_value", 1),
            strict=bool(spec.get("strict", False)))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"eigenbuild spec is missing or mistypes {exc}") from None
    _emit({"form": eb.form.to_json(), "unreachable": len(eb.unreachable),
           "unreachable_sample": [[t, list(mu)] for t, mu in eb.unreachable[:10]]})


def cmd_qexp(args):
    if args.action == "apply":
        _qexp_apply(args)
    else:
        _qexp_eigenbuild(args)


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(seed=args.seed)
    for r in results:
        sys.stderr.write(r.line() + "\n")
    failed = [r.number for r in results if not r.passed]
    _emit({"passed": len(results) - len(failed), "failed": failed, "total": len(results)})
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hmf", description="Weight-cone, Galois-shape, Kisin-module and q-expansion tools.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("cones", help="minimal-cone and irreducibility tests for a weight k")
    _add_field_args(sp)
    sp.add_argument("--weight", "--k", dest="weight", required=True)
    sp.add_argument("--positive", action="store_true", help="test the strictly positive cone")
    sp.set_defaults(func=cmd_cones)

    sp = sub.add_parser("decompose", help="solve A r = hi - lo in the Hasse basis")
    _add_field_args(sp)
    sp.add_argument("--hi", required=True)
    sp.add_argument("--lo", required=True)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("lambda", help="character class of a weight m")
    _add_field_args(sp)
    sp.add_argument("--m", required=True)
    sp.add_argument("--n", help="second weight: also report whether the classes agree")
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("pw1", help="partial weight one lift decision")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--rep", required=True, help="red:psi=..,chi=..,ext=split|invchi|outside or irr:xi=..")
    sp.add_argument("--w", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.set_defaults(func=cmd_pw1)

    sp = sub.add_parser("theta-cycle", help="CSV table m_class -> weights w with a lift")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--rep", required=True)
    sp.set_defaults(func=cmd_theta_cycle)

    sp = sub.add_parser("weight2", help="is det^a Sym^b a weight of rep")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--rep", required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.set_defaults(func=cmd_weight2)

    sp = sub.add_parser("kisin", help="extension counts and phi-morphism checks")
    ks = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    e = ks.add_parser("ext-dim")
    e.add_argument("--p", type=int)
    for name in ("s", "t", "a", "b", "q"):
        e.add_argument(f"--{name}", type=int, required=True)
    e.add_argument("--N", type=int)
    e.add_argument("--r", type=int)
    e.add_argument("--exceptional", type=int)
    e.add_argument("--no-exceptional", action="store_true")
    e.add_argument("--convention", choices=("point", "interval"), default="point")
    e.add_argument("--list", action="store_true", help="also list class representatives")
    c = ks.add_parser("check-morphism")
    c.add_argument("--p", type=int)
    c.add_argument("--case", choices=("w=p", "w=p+1"), required=True)
    for name in ("q", "a", "b", "c"):
        c.add_argument(f"--{name}", type=int, required=True)
    c.add_argument("--d", type=int, default=0)
    c.add_argument("--N", type=int)
    c.add_argument("--perturbed", action="store_true", help="drop the correction term of the map")
    sp.set_defaults(func=cmd_kisin)

    sp = sub.add_parser("qexp", help="q-expansion operators and eigenform construction")
    qs = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = qs.add_parser("apply")
    a.add_argument("--op", choices=("theta", "vp", "tv", "tp", "hasse", "twist"), required=True)
    a.add_argument("--form", required=True)
    a.add_argument("--prime")
    a.add_argument("--s", type=int, help="scalar S-eigenvalue")
    a.add_argument("--level", action="store_true")
    a.add_argument("--sigma", type=int, default=0, help="embedding position for --op hasse")
    a.add_argument("--constant", type=int, default=1)
    a.add_argument("--hasse-mode", choices=("H", "G"), default="H")
    a.add_argument("--char")
    a.add_argument("--twist-mode", choices=("plain", "u1"), default="plain")
    b = qs.add_parser("eigenbuild")
    b.add_argument("--spec", required=True)
    sp.set_defaults(func=cmd_qexp)

    sp = sub.add_parser("selftest", help="run the acceptance suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_selftest)
    return ap


def _configure_logging() -> None:
    level = os.environ.get("HMF_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")


_NEG_VALUE = re.compile(r"^-\d")


def _join_negative_values(argv: list) -> list:
    # "--n -1,3" would otherwise read -1,3 as an unknown option
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEG_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        if argv and not argv[0].startswith("-") and argv[0] not in SUBCOMMANDS:
            raise UnknownSubcommand(f"unknown subcommand {argv[0]!r}", known=list(SUBCOMMANDS))
        args = build_parser().parse_args(argv)
        if not getattr(args, "func", None):
            raise UnknownSubcommand("no subcommand given", known=list(SUBCOMMANDS))
        log.debug("running %s", args.command)
        rc = args.func(args)
        return rc or 0
    except HmfError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return 2 if isinstance(exc, ConfigError) else 1
    except (ValueError, ZeroDivisionError) as exc:
        err = ConfigError(str(exc))
        sys.stderr.write(json.dumps(err.to_dict(), sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
