"""Command-line front end.

    novikov <vanish|check|betti|euler|positive|fox|torus> --input FILE
            [--xi "a/b,c/d,..."] [--tau-cap N] [--jobs N]

Exit codes: 0 success, 1 oracle disagreement in ``check``, 2 usage,
3 document parse error, 4 validation error, 5 resource limit.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Sequence

from .complexes import (DEFAULT_TAU_CAP, BasedChainComplex, betti_numbers, euler_characteristic,
                        mapping_torus, vanishes_at, vanishing_set, verify_positive_vanishing)
from .conegeometry import IntegralCone, IntegralSubset
from .document import DocumentError, ProblemDocument, parse_document, serialize
from .errors import NovikovError, ResourceError, StructuralError, ValidationError
from .foxfront import presentation_complex

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_RESOURCE = 5

COMMANDS = ("vanish", "check", "betti", "euler", "positive", "fox", "torus")


class UsageError(NovikovError):
    pass


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_cone(cone: IntegralCone) -> str:
    if not cone.constraints:
        return "cone: all"
    parts = [f"[{', '.join(str(a) for a in h.form)}] {'>' if h.strict else '>='} 0" for h in cone.constraints]
    return "cone: " + " & ".join(parts)


def format_subset(U: IntegralSubset) -> str:
    U = U.canonical()
    lines = [f"cones: {len(U.cones)}"]
    lines.extend(format_cone(c) for c in U.cones)
    return "\n".join(lines)


def parse_xi(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse --xi {text!r}; expected comma-separated rationals like 1/2,-3") from None


def build_complex(doc: ProblemDocument) -> BasedChainComplex:
    if doc.complex is not None:
        return doc.complex
    if doc.presentation is not None:
        return presentation_complex(doc.presentation)
    T = doc.torus
    return mapping_torus(T.monodromy, T.fiber_dims, T.fiber_boundaries, domain=doc.domain)


def _complex_document(doc: ProblemDocument, C: BasedChainComplex) -> str:
    out = ProblemDocument(doc.domain, C.rank, complex=C, meridians=doc.meridians, points=doc.points)
    return serialize(out).rstrip("\n")


def execute_command(cmd: str, doc: ProblemDocument, xi: Sequence[tuple] = (),
                    tau_cap: int | None = DEFAULT_TAU_CAP, jobs: int = 1) -> tuple[str, int]:
    """Run one command; returns (report text, exit status)."""
    if cmd == "fox":
        if doc.presentation is None:
            raise UsageError("`fox` needs a presentation document")
        return _complex_document(doc, presentation_complex(doc.presentation)), EXIT_OK
    if cmd == "torus":
        if doc.torus is None:
            raise UsageError("`torus` needs a torus document")
        return _complex_document(doc, build_complex(doc)), EXIT_OK

    C = build_complex(doc)
    if cmd == "euler":
        return str(euler_characteristic(C)), EXIT_OK
    if cmd == "betti":
        return " ".join(str(b) for b in betti_numbers(C)), EXIT_OK
    if cmd == "vanish":
        report = vanishing_set(C, tau_cap=tau_cap, jobs=jobs)
        return f"tau-chains: {report.tau_chains}\n" + format_subset(report.vanishing_set), EXIT_OK
    if cmd == "check":
        points = list(xi) or list(doc.points)
        if not points:
            raise UsageError("`check` needs query points (document \"points\" or --xi)")
        report = vanishing_set(C, tau_cap=tau_cap, jobs=jobs)
        lines, status = [], EXIT_OK
        for p in points:
            if len(p) != C.rank:
                raise UsageError(f"query point {p} has length {len(p)}, expected {C.rank}")
            a = report.vanishing_set.contains(p)
            b = vanishes_at(C, p, tau_cap=tau_cap)
            flag = "" if a == b else "  DISAGREE"
            if a != b:
                status = EXIT_DISAGREE
            coords = ", ".join(_fmt_rational(Fraction(x)) for x in p)
            lines.append(f"xi = ({coords}): cones={'vanishes' if a else 'nonzero'} "
                         f"oracle={'vanishes' if b else 'nonzero'}{flag}")
        return "\n".join(lines), status
    if cmd == "positive":
        if not doc.meridians:
            raise UsageError("`positive` needs \"meridians\" in the document")
        return str(verify_positive_vanishing(C, doc.meridians, tau_cap=tau_cap, jobs=jobs)), EXIT_OK
    raise UsageError(f"unknown command {cmd!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="novikov",
                                 description="Novikov homology vanishing loci of chain complexes over Laurent rings.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="problem document (JSON); '-' reads stdin")
    ap.add_argument("--xi", action="append", default=[],
                    help="query character for `check`, e.g. 1/2,-3 (repeatable)")
    ap.add_argument("--tau-cap", type=int, default=DEFAULT_TAU_CAP,
                    help=f"maximum number of tau-chains (default {DEFAULT_TAU_CAP})")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes; 0 uses every CPU")
    return ap


def _attach_xi_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--xi -1/2`` as ``--xi=-1/2``; argparse would read -1/2 as a flag."""
    out, it = [], iter(argv)
    for a in it:
        if a == "--xi":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--xi={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_attach_xi_values(argv))
    jobs = args.jobs if args.jobs > 0 else (os.cpu_count() or 1)
    try:
        if args.input == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(args.input, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        xi = [parse_xi(x) for x in args.xi]
        doc = parse_document(data)
        text, status = execute_command(args.command, doc, xi, tau_cap=args.tau_cap, jobs=jobs)
    except DocumentError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, StructuralError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    sys.stdout.write(text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
