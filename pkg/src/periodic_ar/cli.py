"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 cap exceeded, 4 a verified
property failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import artheory as ar
from .algebra import AlgebraError, load_algebra_file
from .complexes import ComplexError, hom_space
from .decomp import PrimeTooSmall, is_indecomposable
from .export import dumps, to_dot, to_paper
from .notation import (NotationError, complex_to_json, display, parse_any, unambiguous)
from .periodic import (DensityError, PeriodicComplex, compress, unroll)

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_CHECK = 0, 2, 3, 4


class CheckFailed(RuntimeError):
    pass


def _emit_object(obj, fmt: str) -> str:
    if fmt == "json" or not unambiguous(obj):
        return json.dumps(complex_to_json(obj), ensure_ascii=False)
    return display(obj)


def _emit_quiver(Q, fmt: str) -> str:
    if fmt == "json":
        return dumps(Q) + "\n"
    if fmt == "dot":
        return to_dot(Q)
    return to_paper(Q)


def _fixed(args, alg, n: int | None = None):
    caps = ar.Caps.parse(args.caps)
    if n is None:
        n = args.n if getattr(args, "n", None) else ar.strong_global_dimension(
            alg, caps.max_n, args.seed, caps) + 1
        n = max(n, 2)
    if n > caps.max_n:
        raise ar.CapExceeded(f"window size {n} exceeds cap n={caps.max_n}")
    return ar.knit_fixed_size(alg, n, caps, args.seed)


def _section(args, Q):
    if not getattr(args, "section", None):
        return None
    sigma = [Q.index_of_label(s.strip()) for s in args.section.split(";")]
    sec = ar.check_section(Q, sigma, args.seed)
    if sec[0] is None:
        raise ar.SectionError(f"invalid section: {sec[1]}")
    return sec[0]


# -- subcommands -------------------------------------------------------------

def cmd_sgldim(args, alg, out) -> int:
    caps = ar.Caps.parse(args.caps)
    out.write(f"{ar.strong_global_dimension(alg, caps.max_n, args.seed, caps)}\n")
    return EXIT_OK


def cmd_arq(args, alg, out) -> int:
    if args.fixed is not None:
        Q = ar.knit_fixed_size(alg, args.fixed, ar.Caps.parse(args.caps), args.seed)
        out.write(_emit_quiver(Q, args.format))
        return EXIT_OK if Q.complete else EXIT_CHECK
    m = args.periodic
    Q = _fixed(args, alg)
    sec = _section(args, Q) or ar.section_band(Q, seed=args.seed)
    results = []
    if args.method in ("1", "both"):
        results.append(ar.periodic_ar_quiver_method1(Q, m, sec, args.seed))
    if args.method in ("2", "both"):
        results.append(ar.periodic_ar_quiver_method2(Q, m, sec, args.seed))
    out.write(_emit_quiver(results[0], args.format))
    status = EXIT_OK if all(P.complete for P in results) else EXIT_CHECK
    if len(results) == 2:
        ok, msg = ar.compare_quivers(results[0], results[1], args.seed)
        # keep stdout parseable for json/dot
        stream = out if args.format == "paper" else sys.stderr
        stream.write(msg + "\n")
        if not ok:
            status = EXIT_CHECK
    return status


def cmd_compress(args, alg, out) -> int:
    X = parse_any(alg, args.complex)
    if isinstance(X, PeriodicComplex):
        raise NotationError("compress expects a bounded complex")
    out.write(_emit_object(compress(X, args.m), args.format) + "\n")
    return EXIT_OK


def cmd_hom(args, alg, out) -> int:
    X = parse_any(alg, args.x, args.m)
    Y = parse_any(alg, args.y, args.m)
    if isinstance(X, PeriodicComplex) != isinstance(Y, PeriodicComplex):
        raise NotationError("both complexes must be bounded or both periodic")
    if args.m and not isinstance(X, PeriodicComplex):
        X, Y = compress(X, args.m), compress(Y, args.m)
    if isinstance(X, PeriodicComplex) and X.m != Y.m:
        raise NotationError("periods differ")
    out.write(f"{hom_space(X, Y).dim}\n")
    return EXIT_OK


def _periodic(args, alg):
    Q = _fixed(args, alg)
    P = ar.periodic_ar_quiver_method1(Q, args.m, _section(args, Q), args.seed)
    return Q, P


def cmd_sectional(args, alg, out) -> int:
    from .sectional import (classify_pi_positions, compose_along, enumerate_sectional_paths,
                            interior_projective_injective, path_label, radical_depth)
    _, P = _periodic(args, alg)
    rc = ar.RadicalCalculus(P.objects(), args.seed)
    paths = enumerate_sectional_paths(P, args.max_len)
    if args.format == "json":
        rows = []
    else:
        out.write("path\tsectional\tzero\tdepth\tcase\n")
    bad = 0
    for sp in paths:
        f, zero = compose_along(sp)
        a, b = sp.vertices[0], sp.vertices[-1]
        depth = None if zero else radical_depth(f, a, b, rc, sp.length + 1)
        case = "zero composite" if zero else classify_pi_positions(P, sp)
        if not zero and (case == "violation" or interior_projective_injective(P, sp)):
            bad += 1
        if args.format == "json":
            rows.append({"path": [P.vertices[v].label for v in sp.vertices],
                         "copies": list(sp.copies), "sectional": True, "zero": zero,
                         "depth": depth, "case": case})
        else:
            d = "-" if depth is None else str(depth)
            out.write(f"{path_label(P, sp)}\tyes\t{'yes' if zero else 'no'}\t{d}\t{case}\n")
    if args.format == "json":
        out.write(json.dumps(rows, ensure_ascii=False, indent=1) + "\n")
    if bad:
        sys.stderr.write(f"{bad} nonzero sectional paths with interior projective-injective "
                         f"vertices\n")
        return EXIT_CHECK
    return EXIT_OK


def run_checks(alg, n: int | None, m: int, seed: int = 0, caps: ar.Caps | None = None,
               max_len: int = 6, pairs: int = 50):
    """Full invariant suite; yields (name, ok, detail)."""
    from .sectional import sweep
    caps = caps or ar.Caps()
    t0 = time.perf_counter()
    nu = ar.strong_global_dimension(alg, caps.max_n, seed, caps)
    yield "strong global dimension", True, str(nu)
    n = max(n or nu + 1, 2)
    Q = ar.knit_fixed_size(alg, n, caps, seed)
    yield "fixed meshes almost split", Q.complete, f"{len(Q.meshes)} meshes"
    yield ("fixed meshes degreewise split",
           all(M.seq.degreewise_ok() for M in Q.meshes), "")
    yield ("fixed vertices indecomposable",
           all(is_indecomposable(v.obj, seed) for v in Q.vertices), f"{len(Q.vertices)} vertices")
    sec = ar.section_band(Q, seed=seed)
    yield "section", True, f"{len(sec.sigma)} vertices, {len(sec.meshes)} band meshes"
    P1 = ar.periodic_ar_quiver_method1(Q, m, sec, seed)
    P2 = ar.periodic_ar_quiver_method2(Q, m, sec, seed)
    yield "periodic meshes almost split", P1.complete and P2.complete, \
        f"{len(P1.vertices)} vertices"
    ok, msg = ar.compare_quivers(P1, P2, seed)
    yield "methods agree", ok, msg
    rep = ar.covering_check(Q, P1, m, pairs, seed)
    yield "covering", rep["ok"], "; ".join(rep["failures"]) or \
        f"{rep['periodic_vertices']} = {m} x {rep['normalized_classes']}"
    yield ("compression preserves indecomposables",
           all(is_indecomposable(compress(v.obj, m), seed) for v in Q.vertices), "")
    bad = []
    for V in P1.vertices:
        try:
            unroll(V.obj, seed=seed)
        except DensityError:
            bad.append(V.label)
    yield "unroll", not bad, ", ".join(bad)
    tr = ar.irreducibility_transfer(Q, P1, m, seed)
    mism = [f"{Q.vertices[a].label}->{Q.vertices[b].label}" for (a, b), x, y in tr if x != y]
    yield "irreducibility transfer", not mism, ", ".join(mism) or f"{len(tr)} arrows"
    sw = sweep(P1, max_len)
    yield ("projective-injectives only at ends of nonzero sectional paths",
           not sw.violations, f"{sw.nonzero} nonzero of {sw.paths}")
    yield "elapsed", True, f"{time.perf_counter() - t0:.1f}s"


def cmd_verify(args, alg, out) -> int:
    failed = 0
    for name, ok, detail in run_checks(alg, args.n, args.m, args.seed,
                                       ar.Caps.parse(args.caps), args.max_len):
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "") + "\n")
        failed += not ok
    out.write("all checks pass\n" if not failed else f"{failed} checks failed\n")
    return EXIT_OK if not failed else EXIT_CHECK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=None, help="field characteristic")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--caps", default=None,
                        help="e.g. vertices=500,multiplicity=4,n=10")
    common.add_argument("--format", choices=("dot", "json", "paper"), default="paper")

    parser = argparse.ArgumentParser(prog="periodic-ar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sgldim", parents=[common], help="strong global dimension")
    p.add_argument("algebra")

    p = sub.add_parser("arq", parents=[common], help="AR quiver")
    p.add_argument("algebra")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fixed", type=int, metavar="N")
    g.add_argument("--periodic", type=int, metavar="M")
    p.add_argument("--method", choices=("1", "2", "both"), default="1")
    p.add_argument("--n", type=int, default=None, help="window for the fixed-size quiver")
    p.add_argument("--section", default=None, help="section labels separated by ';'")

    p = sub.add_parser("compress", parents=[common], help="F_m of a complex")
    p.add_argument("algebra")
    p.add_argument("complex")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("hom", parents=[common], help="dim Hom(X, Y)")
    p.add_argument("algebra")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--m", type=int, default=None, help="compress both first")

    for name, hlp in (("sectional", "sectional paths"), ("verify", "invariant suite")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("algebra")
        p.add_argument("--m", type=int, default=4)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--max-len", type=int, default=6)
        if name == "sectional":
            p.add_argument("--section", default=None)
    return parser


COMMANDS = {"sgldim": cmd_sgldim, "arq": cmd_arq, "compress": cmd_compress, "hom": cmd_hom,
            "sectional": cmd_sectional, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    for attr in ("m", "periodic"):
        v = getattr(args, attr, None)
        if v is not None and v < 1:
            sys.stderr.write("error: period must be positive\n")
            return EXIT_INPUT
    try:
        alg = load_algebra_file(args.algebra, args.prime)
        return COMMANDS[args.command](args, alg, out)
    except (AlgebraError, NotationError, ComplexError, PrimeTooSmall, KeyError,
            FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (ar.CapExceeded, ar.SectionError) as exc:
        msg = str(exc)
        if isinstance(exc, ar.SectionError):
            msg += " (try a larger window with --n)"
        sys.stderr.write(f"cap exceeded: {msg}\n")
        return EXIT_CAP
    except (ar.TauError, DensityError, CheckFailed) as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
