"""Command-line front end.

Exit codes: 0 success, 1 usage or config error, 2 matrix validation failure,
3 certification failure, 4 synthesis failure, 5 diagnostics not consistent
(or a horizon too short to judge).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import mpmath

from . import diagnose as D
from . import io as fio
from .certify import ROUTES, ExpansionCertificate, certify
from .dynsys import logistic_example, system_to_config
from .errors import (
    CertificationError, ConfigError, DynsysError, HorizonTooShort, LiYorkeError, MatrixError,
    SymbolicError, SynthesisError,
)
from .matrix import (
    enumerate_words, find_alternative_word, find_word_triple, is_irreducible, minimal_return_time, power_entry,
    validate,
)
from .numeric import fmt, parse_number
from .scramble import lift_to_time_zero, synthesize

EXIT_OK, EXIT_USAGE, EXIT_MATRIX, EXIT_CERTIFY, EXIT_SYNTH, EXIT_DIAGNOSE = 0, 1, 2, 3, 4, 5

log = logging.getLogger("liyorke")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is reserved for matrix failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _word(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _emit(text: str, out: str | None) -> None:
    if out:
        fio.write_text(out, text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------

def cmd_matrix(args) -> int:
    A = fio.load_matrix(args.path)
    irreducible = is_irreducible(A)
    lines = [f"size: {A.n}", f"irreducible: {'yes' if irreducible else 'no'}"]
    if irreducible:
        lines.append(", ".join(f"k0({j})={minimal_return_time(A, j)}" for j in A.symbols))
        lines.append("row sums: " + " ".join(str(A.row_sum(i)) for i in A.symbols))
    for k, i, j in args.power or ():
        lines.append(f"A^{k}[{i},{j}] = {power_entry(A, k, i, j)}")
    for length, i, j in args.words or ():
        words = enumerate_words(A, length, i, j, cap=args.cap)
        lines.append(f"words of length {length} from {i} to {j}: {len(words)}")
        lines.extend("  " + " ".join(map(str, w)) for w in words)
    for w in args.alternative or ():
        lines.append(f"alternative to {' '.join(map(str, w))}: {' '.join(map(str, find_alternative_word(A, w)))}")
    for j0 in args.triple or ():
        t = find_word_triple(A, j0)
        lines.append(f"triple(j0={j0}): t0={t.t0} m0={t.m0} w0={t.w0} w1={t.w1} w2={t.w2}")
    print("\n".join(lines))
    return EXIT_OK


def _certify_from_args(args, sys_, cfg):
    A = fio.load_matrix(args.matrix, cfg)
    return certify(sys_, A, args.route, args.j0, allow_marginal=args.allow_marginal,
                     assume_tail=args.assume_tail)


def _report(cert: ExpansionCertificate) -> str:
    lines = [f"certified: route {cert.route}, j0={cert.j0}, k0={cert.k0}",
             f"  lambda = {fmt(cert.lam)}", f"  mu = {'-' if cert.mu is None else fmt(cert.mu)}",
             f"  delta = {fmt(cert.delta)}", f"  initial covering: {cert.initial_covering_status}",
             f"  tail: {cert.tail_status}"]
    lines += [f"  {m.name}: margin {fmt(m.margin)}" for m in cert.margins]
    return "\n".join(lines) + "\n"


def cmd_certify(args) -> int:
    sys_, cfg = fio.load_system(args.config)
    cert = _certify_from_args(args, sys_, cfg)
    sys.stdout.write(_report(cert))
    if args.out:
        fio.write_text(args.out, cert.to_json())
    return EXIT_OK


def _write_points(points, cert, out: str | None) -> None:
    csv_text = fio.points_csv(points)
    side = json.dumps(fio.points_sidecar(cert, points), indent=2, sort_keys=True) + "\n"
    if out:
        fio.write_text(out, csv_text)
        fio.write_text(fio.sidecar_path(out), side)
    else:
        sys.stdout.write(csv_text)


def cmd_scramble(args) -> int:
    sys_, cfg = fio.load_system(args.config)
    cert = fio.load_certificate(args.certificate, sys_, allow_marginal=args.allow_marginal,
                                assume_tail=args.assume_tail)
    if args.route and args.route != cert.route:
        cert = certify(sys_, cert.matrix, args.route, cert.j0, allow_marginal=args.allow_marginal,
                         assume_tail=args.assume_tail)
    choices = args.choices.split(",") if args.choices else None
    points = synthesize(cert, sys_, args.count, args.tol, choices, min_blocks=args.blocks)
    _write_points(points, cert, args.out)
    if args.lift and cert.n0 > 0:
        for p in points:
            x0 = lift_to_time_zero(sys_, p)
            print(f"{p.choice_bits}: x_0 = {x0 if isinstance(x0, str) else mpmath.nstr(x0, 20)}", file=sys.stderr)
    return EXIT_OK


def cmd_orbit(args) -> int:
    sys_, _ = fio.load_system(args.config)
    if args.dps:
        with mpmath.workdps(args.dps):
            x0 = mpmath.mpf(args.x0)
            orb = sys_.orbit(x0, args.start, args.horizon)
            text = fio.orbit_csv(orb, sys_.partition, args.start)
    else:
        x0 = float(parse_number(args.x0))
        orb = sys_.orbit(x0, args.start, args.horizon)
        text = fio.orbit_csv(orb, sys_.partition, args.start)
    _emit(text, args.out)
    return EXIT_OK


def cmd_diagnose(args) -> int:
    sys_, _ = fio.load_system(args.config)
    cert, points = fio.load_points(args.points, sys_)
    reports = D.pairwise_report(sys_, points, args.horizon, cert=cert)
    if args.out:
        fio.write_text(args.out, fio.reports_csv(reports))
    s = D.summary(reports)
    print(f"pairs: {s['pairs']}, consistent: {s['consistent']}, violated: {s['violated']}")
    print(f"verdict: {s['label']}")
    return EXIT_OK if s["violated"] == 0 else EXIT_DIAGNOSE


def cmd_demo(args) -> int:
    """Full pipeline on the time-varying logistic example."""
    sys_ = logistic_example(args.variant, parse_number(args.r))
    A = validate([[1, 1], [1, 1]])
    out = Path(args.out) if args.out else None
    if out:
        fio.write_text(out / "system.json", json.dumps({**system_to_config(sys_), "matrix": A.to_lists()},
                                                       indent=2, sort_keys=True) + "\n")
    cert = certify(sys_, A, "T42", 2)
    sys.stdout.write(_report(cert))
    points = synthesize(cert, sys_, args.count, args.tol)
    reports = D.pairwise_report(sys_, points, cert=cert)
    if out:
        fio.write_text(out / "certificate.json", cert.to_json())
        _write_points(points, cert, str(out / "points.csv"))
        fio.write_text(out / "pairs.csv", fio.reports_csv(reports))
    for p in points:
        print(f"  {p.choice_bits}  x = {mpmath.nstr(p.value, 20)}  depth {p.depth}")
    s = D.summary(reports)
    print(f"pairs: {s['pairs']}, consistent: {s['consistent']}, violated: {s['violated']}")
    print(f"verdict: {s['label']}")
    return EXIT_OK if s["violated"] == 0 else EXIT_DIAGNOSE


# -- parser ----------------------------------------------------------------------

def _certify_flags(p) -> None:
    p.add_argument("--allow-marginal", action="store_true",
                   help="accept strict inequalities whose margin is within the 1e-12 slack")
    p.add_argument("--assume-tail", action="store_true",
                   help="check only the first value of parameter tails the family cannot analyze")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="liyorke", description="Coupled-expansion chaos certification for time-varying maps.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("matrix", help="validate a transition matrix and answer word queries")
    p.add_argument("path", help="matrix file: size on the first line, then rows of 0/1")
    p.add_argument("--power", nargs=3, type=int, action="append", metavar=("K", "I", "J"),
                   help="entry (I,J) of A^K")
    p.add_argument("--words", nargs=3, type=int, action="append", metavar=("LEN", "I", "J"),
                   help="list allowable words of LEN symbols from I to J")
    p.add_argument("--cap", type=int, default=100_000, help="word enumeration budget")
    p.add_argument("--alternative", type=_word, action="append", metavar="WORD",
                   help="same-endpoint alternative for a word such as 1,2,1")
    p.add_argument("--triple", type=int, action="append", metavar="J0", help="junction words for j0")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("certify", help="check a criterion and write a certificate")
    p.add_argument("--config", required=True, help="system config (JSON)")
    p.add_argument("--matrix", help="matrix file (default: 'matrix' key of the config)")
    p.add_argument("--route", default="T42", choices=ROUTES)
    p.add_argument("--j0", type=int, help="expanding set (default: largest certified lambda)")
    p.add_argument("--out", help="certificate JSON path")
    _certify_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("scramble", help="synthesize scrambled witnesses from a certificate")
    p.add_argument("--config", required=True)
    p.add_argument("--certificate", required=True)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--route", choices=ROUTES, help="re-certify under this route before synthesis")
    p.add_argument("--choices", help="comma-separated choice sequences such as 0110:01")
    p.add_argument("--blocks", type=int, default=6, help="minimum number of itinerary segments")
    p.add_argument("--lift", action="store_true", help="also pull points back to time 0 when n0 > 0")
    p.add_argument("--out", help="points CSV (a .times.json sidecar is written next to it)")
    _certify_flags(p)
    p.set_defaults(func=cmd_scramble)

    p = sub.add_parser("orbit", help="simulate one orbit")
    p.add_argument("--config", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--horizon", type=int, default=50)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--dps", type=int, help="run in mpmath with this many digits")
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("diagnose", help="check pairs of witnesses against predicted times")
    p.add_argument("--config", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--horizon", type=int, help="default: the shadowed depth of the points")
    p.add_argument("--out", help="per-pair CSV")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("demo", help="run the logistic example end to end")
    p.add_argument("--variant", choices=("constant", "affine"), default="constant")
    p.add_argument("--r", default="9/2", help="r (constant) or r_0 (affine)")
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", help="directory for the generated files")
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except MatrixError as exc:
        print(f"matrix error: {exc}", file=sys.stderr)
        return EXIT_MATRIX
    except CertificationError as exc:
        print(f"certification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        if exc.witness:
            print(f"  witness: {json.dumps(exc.witness, default=str, sort_keys=True)}", file=sys.stderr)
        return EXIT_CERTIFY
    except HorizonTooShort as exc:
        print(f"diagnose failed: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSE
    except (SynthesisError, SymbolicError) as exc:
        print(f"synthesis failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SYNTH
    except DynsysError as exc:
        # monotonicity or tail problems surface while checking hypotheses
        print(f"certification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CERTIFY
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LiYorkeError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
