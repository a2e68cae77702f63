"""``novbar`` command line.

Every subcommand exits 0 on success.  Failures print one JSON object on
stderr (``{"status": "error", "kind": ..., "message": ..., ...}``) and exit
with 1 for a failed check or verification, 3 for bad input; argparse keeps
its own exit code 2 for usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import acceptance
from .barcode import Barcode, barcodes, classical_oracle
from .complex import FloerComplex, ValidationError, validate
from .distance import bottleneck_degree
from .exactnum import INF, ConfigurationError, GroundField, ValueGroup
from .ingest import (
    IngestError,
    barcode_csv,
    barcode_svg,
    barcode_to_dict,
    complex_to_dict,
    load_barcode,
    load_complex,
    load_points,
    rips_complex,
    spectrum_to_dict,
    svd_to_dict,
)
from .svd import SvdCheckError, boundary_depths, check_svd, svd, torsion_exponents

EXIT_CHECK = 1
EXIT_INPUT = 3


class CommandFailure(Exception):
    def __init__(self, kind: str, message: str, code: int = EXIT_INPUT, **extra):
        super().__init__(message)
        self.kind, self.code, self.extra = kind, code, extra


# --------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, *, field=True, degree=True, fmt=None, output=True) -> None:
    if field:
        p.add_argument("--field", help="coefficient field, Q or Fp:p")
        p.add_argument("--gamma", help="value group: trivial, discrete:g or quad:d:g1,g2")
    if degree:
        p.add_argument("--degree", help="a degree k or an inclusive range lo:hi")
    if fmt:
        p.add_argument("--format", choices=fmt, default=fmt[0])
    if output:
        p.add_argument("-o", "--output", help="output path (prefix for barcode); stdout when omitted")
    p.add_argument("--strict", action="store_true", help="reject boundaries that keep a generator's level")
    p.add_argument("--debug-checks", action="store_true", help="re-verify every SVD and cross-check results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="novbar", description="Exact barcodes of filtered complexes over Novikov fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("barcode", help="verbose and concise barcodes of a complex")
    p.add_argument("complex")
    _common(p, fmt=["json", "csv", "svg"])

    p = sub.add_parser("svd", help="singular value decomposition of one boundary operator")
    p.add_argument("complex")
    _common(p, fmt=["json"])

    p = sub.add_parser("bottleneck", help="bottleneck distance between two barcode files")
    p.add_argument("first")
    p.add_argument("second")
    _common(p, field=False, fmt=["json"])

    p = sub.add_parser("spectrum", help="filtration spectrum of every degree")
    p.add_argument("complex")
    _common(p, fmt=["json", "csv"])

    p = sub.add_parser("rips", help="filtered Rips complex of a point cloud")
    p.add_argument("points")
    p.add_argument("--metric", choices=["Linf", "L1", "EuclidSq"], default="Linf")
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--cap", help="drop simplices with diameter above this rational")
    _common(p, degree=False)

    p = sub.add_parser("verify", help="run the seeded acceptance battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("-o", "--output")
    return parser


def _degree_range(text: Optional[str]):
    if text is None:
        return None
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        k = int(text)
        return k, k
    except ValueError:
        raise CommandFailure("usage", f"--degree expects k or lo:hi, got {text!r}", 2) from None


def _in_range(k: int, rng) -> bool:
    return rng is None or rng[0] <= k <= rng[1]


# --------------------------------------------------------------------------
# helpers


def _load(args) -> FloerComplex:
    C = load_complex(args.complex, check=False)
    if args.field is not None and GroundField.parse(args.field).p != C.field.ground.p:
        raise CommandFailure("conflict", f"--field {args.field} disagrees with the file's field {C.field.ground.name}", 2)
    if args.gamma is not None and ValueGroup.parse(args.gamma).to_dict() != C.group.to_dict():
        raise CommandFailure("conflict", f"--gamma {args.gamma} disagrees with the file's value group", 2)
    bad = validate(C, strict=True if args.strict else None)
    if bad:
        raise CommandFailure("validation", "the complex is not a filtered chain complex", EXIT_INPUT,
                             violations=[str(v) for v in bad])
    return C


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _restrict(B: Barcode, rng) -> Barcode:
    return B if rng is None else Barcode([b for b in B.bars if _in_range(b.degree, rng)], B.group, B.verbose)


def _render(B: Barcode, fmt: str) -> str:
    if fmt == "csv":
        return barcode_csv(B)
    if fmt == "svg":
        return barcode_svg(B)
    return _dumps(barcode_to_dict(B))


def _debug_svds(C: FloerComplex) -> None:
    for k in C.degrees():
        if not C.dim(k - 1):
            continue
        A = C.boundary(k)
        problems = check_svd(A, svd(A))
        if problems:
            raise CommandFailure("debug-check", f"SVD of d_{k} failed re-verification", EXIT_CHECK, problems=problems)


# --------------------------------------------------------------------------
# subcommands


def cmd_barcode(args) -> None:
    C = _load(args)
    rng = _degree_range(args.degree)
    verbose, concise = barcodes(C, check=False)
    if args.debug_checks:
        _debug_svds(C)
        if C.group.rank == 0 and classical_oracle(C) != verbose:
            raise CommandFailure("debug-check", "barcode disagrees with textbook column reduction", EXIT_CHECK)
    verbose, concise = _restrict(verbose, rng), _restrict(concise, rng)
    if args.output:
        ext = args.format
        Path(f"{args.output}.verbose.{ext}").write_text(_render(verbose, args.format))
        Path(f"{args.output}.concise.{ext}").write_text(_render(concise, args.format))
        return
    if args.format != "json":
        raise CommandFailure("usage", "csv and svg barcodes need -o PREFIX", 2)
    _emit(_dumps({"verbose": barcode_to_dict(verbose), "concise": barcode_to_dict(concise)}), None)


def cmd_svd(args) -> None:
    C = _load(args)
    rng = _degree_range(args.degree)
    if rng is None or rng[0] != rng[1]:
        raise CommandFailure("usage", "svd needs a single --degree k (the operator d_k)", 2)
    k = rng[0]
    if k not in C.degrees() or not C.dim(k) or not C.dim(k - 1):
        raise CommandFailure("usage", f"d_{k} is not a map between nonzero spaces of this complex", 2)
    A = C.boundary(k)
    res = svd(A, debug=args.debug_checks)
    report = {"degree": k, **svd_to_dict(res, C.field)}
    report["boundary_depths"] = [str(t) for t in boundary_depths(A)]
    report["torsion_exponents"] = [str(t) for t in torsion_exponents(A)]
    _emit(_dumps(report), args.output)


def _bar_json(b) -> dict:
    return {"a": str(b.a), "L": "inf" if b.L is INF else str(b.L)}


def cmd_bottleneck(args) -> None:
    A, B = load_barcode(args.first), load_barcode(args.second)
    if A.group.to_dict() != B.group.to_dict():
        raise CommandFailure("conflict", "the two barcodes use different value groups", EXIT_INPUT)
    G = A.group
    rng = _degree_range(args.degree)
    A, B = A.concise(), B.concise()
    per_degree: Dict[str, str] = {}
    matching: Dict[str, dict] = {}
    best = None
    for k in sorted(set(A.degrees()) | set(B.degrees())):
        if not _in_range(k, rng):
            continue
        d, res = bottleneck_degree(G, A.in_degree(k), B.in_degree(k))
        per_degree[str(k)] = "inf" if d is INF else str(d)
        if d is not INF:
            matching[str(k)] = {
                "pairs": [[_bar_json(s), _bar_json(t)] for s, t in res.pairs],
                "unmatched_first": [_bar_json(b) for b in res.unmatched_S],
                "unmatched_second": [_bar_json(b) for b in res.unmatched_T],
            }
        if best is not INF and (d is INF or best is None or d > best):
            best = d
    delta = "0" if best is None else "inf" if best is INF else str(best)
    _emit(_dumps({"delta": delta, "per_degree": per_degree, "matching": matching}), args.output)


def cmd_spectrum(args) -> None:
    C = _load(args)
    rng = _degree_range(args.degree)
    data = spectrum_to_dict(C)
    data["spectrum"] = {k: v for k, v in data["spectrum"].items() if _in_range(int(k), rng)}
    if args.debug_checks:
        _debug_svds(C)
    if args.format == "csv":
        lines = ["degree,coset"] + [f"{k},{t}" for k, vals in data["spectrum"].items() for t in vals]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(_dumps(data), args.output)


def cmd_rips(args) -> None:
    if args.gamma is not None and ValueGroup.parse(args.gamma).rank != 0:
        raise CommandFailure("conflict", "Rips complexes use the trivial value group", 2)
    ground = GroundField.parse(args.field) if args.field else GroundField.parse("Q")
    pts = load_points(args.points)
    C = rips_complex(pts, max_dim=args.max_dim, metric=args.metric, cap=args.cap, ground=ground)
    if args.debug_checks:
        bad = validate(C, strict=args.strict)
        if bad:
            raise CommandFailure("debug-check", "generated complex failed validation", EXIT_CHECK,
                                 violations=[str(v) for v in bad])
    _emit(_dumps(complex_to_dict(C)), args.output)


def cmd_verify(args) -> int:
    only = None
    if args.only:
        try:
            only = [int(x) for x in args.only.split(",") if x.strip()]
        except ValueError:
            raise CommandFailure("usage", f"--only expects numbers, got {args.only!r}", 2) from None
        unknown = [n for n in only if n not in acceptance.CRITERIA]
        if unknown:
            raise CommandFailure("usage", f"no criterion numbered {unknown[0]}", 2)
    results = acceptance.run_all(args.seed, only)
    if args.format == "json":
        text = _dumps({
            "seed": args.seed,
            "criteria": [
                {"number": r.number, "title": r.title, "passed": r.passed, "samples": r.samples,
                 "violations": r.failure_count, "examples": r.failures}
                for r in results
            ],
        })
    else:
        text = acceptance.format_report(results, args.seed)
    _emit(text, args.output)
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise CommandFailure("verification", "acceptance criteria failed", EXIT_CHECK, criteria=failed)
    return 0


COMMANDS = {
    "barcode": cmd_barcode,
    "svd": cmd_svd,
    "bottleneck": cmd_bottleneck,
    "spectrum": cmd_spectrum,
    "rips": cmd_rips,
    "verify": cmd_verify,
}


def _diagnose(kind: str, message: str, **extra) -> None:
    sys.stderr.write(json.dumps({"status": "error", "kind": kind, "message": message, **extra}) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except CommandFailure as exc:
        _diagnose(exc.kind, str(exc), **exc.extra)
        return exc.code
    except SvdCheckError as exc:
        _diagnose("debug-check", str(exc))
        return EXIT_CHECK
    except IngestError as exc:
        _diagnose("input", str(exc), location=exc.location)
        return EXIT_INPUT
    except ValidationError as exc:
        _diagnose("validation", "the complex is not a filtered chain complex",
                  violations=[str(v) for v in exc.violations])
        return EXIT_INPUT
    except (ConfigurationError, ValueError) as exc:
        _diagnose("input", str(exc))
        return EXIT_INPUT
    except OSError as exc:
        _diagnose("io", str(exc))
        return EXIT_INPUT
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
