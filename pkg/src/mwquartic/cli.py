"""Command-line interface.

Subcommands: vectors, classify, matroid, dihedral, bitangents.  All
machine output is JSON with rationals rendered as "p/q" strings; the
classify output is byte-identical across runs and thread counts (timing
goes to stderr only).

Exit codes: 0 ok; 2 bad flags or invalid input; 3 corrupt checkpoint;
4 refused full census without --force-full; 5 bitangent verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import bitangents, classifier, dihedral, exactmath, lattice, matroid

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHECKPOINT = 3
EXIT_REFUSED = 4
EXIT_VERIFICATION = 5

FULL_CENSUS_GUARD = 20


@dataclass
class CensusResult:
    field: object
    n: dict               # r -> n_r
    elapsed: dict         # r -> seconds (stderr only, never serialized)
    checkpoint_dir: object

    def to_json_dict(self):
        return {
            "field": "Q" if self.field == matroid.RATIONALS else "F_p",
            "p": None if self.field == matroid.RATIONALS else self.field,
            "max_r": max(self.n),
            "n_r": {str(r): self.n[r] for r in sorted(self.n)},
            "checkpoint_dir": str(self.checkpoint_dir) if self.checkpoint_dir else None,
        }


def _frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _dump_json(doc, out_path=None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _parse_field(text: str):
    if text == "q":
        return matroid.RATIONALS
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad field spec: {text!r}")
        if not exactmath.is_odd_prime(p):
            raise argparse.ArgumentTypeError(f"field characteristic must be an odd prime: {p}")
        return p
    raise argparse.ArgumentTypeError(f"field must be 'q' or 'fp:P', got {text!r}")


def _parse_subset(text: str):
    try:
        items = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad subset spec: {text!r}")
    if not items:
        raise argparse.ArgumentTypeError("subset must be nonempty")
    if len(set(items)) != len(items):
        raise argparse.ArgumentTypeError("duplicate pair index in subset")
    for i in items:
        if not 1 <= i <= lattice.N_PAIRS:
            raise argparse.ArgumentTypeError(f"pair index out of range: {i}")
    return items


def _parse_signs(text: str):
    table = {"+": 1, "-": -1, "1": 1, "-1": -1, "+1": 1}
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in table:
            raise argparse.ArgumentTypeError(f"bad sign token: {tok!r}")
        out.append(table[tok])
    return out


def cmd_vectors(args) -> int:
    pairs = lattice.enumerate_pairs()
    if args.format == "json":
        doc = [
            {
                "index": i,
                "coords": list(v.coords),
                "scale": lattice.SCALE,
                "height": _frac_str(lattice.height_pairing(v, v)),
            }
            for i, v in pairs
        ]
        _dump_json(doc)
    else:
        print(f"# coordinates are scaled by {lattice.SCALE}; height = dot/16")
        print(f"{'idx':>3}  {'coords (x4)':<30} height")
        for i, v in pairs:
            coords = " ".join(f"{x:2d}" for x in v.coords)
            print(f"{i:>3}  {coords:<30} {_frac_str(lattice.height_pairing(v, v))}")
    return EXIT_OK


def cmd_classify(args) -> int:
    if not 1 <= args.max_r <= 28:
        print("max-r must be in 1..28", file=sys.stderr)
        return EXIT_USAGE
    if args.threads < 1:
        print("threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.max_r > FULL_CENSUS_GUARD and not args.force_full:
        print(
            f"refusing census beyond r={FULL_CENSUS_GUARD} without --force-full "
            "(level 14 alone holds ~40M subset ids)",
            file=sys.stderr,
        )
        return EXIT_REFUSED
    elapsed = {}
    n = {}
    t_prev = time.perf_counter()

    def progress(table):
        nonlocal t_prev
        now = time.perf_counter()
        elapsed[table.level] = now - t_prev
        t_prev = now
        n[table.level] = table.n
        print(f"r={table.level:2d}  n_r={table.n:4d}  [{elapsed[table.level]:.2f}s]",
              file=sys.stderr)

    try:
        classifier.run_census(
            args.max_r,
            field=args.field,
            checkpoint_dir=args.checkpoint,
            threads=args.threads,
            progress=progress,
        )
    except classifier.CheckpointError as exc:
        print(f"checkpoint error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    result = CensusResult(args.field, n, elapsed, args.checkpoint)
    _dump_json(result.to_json_dict(), args.out)
    print(f"total {sum(elapsed.values()):.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_matroid(args) -> int:
    m = matroid.matroid_on(args.subset, args.field)
    subset = tuple(args.subset)
    rank = m.rank(subset)
    circuits = m.circuits(subset)
    doc = {
        "subset": list(subset),
        "field": "Q" if args.field == matroid.RATIONALS else f"F_{args.field}",
        "rank": rank,
        "independent": rank == len(subset),
        "circuits": sorted(sorted(c) for c in circuits),
    }
    _dump_json(doc)
    return EXIT_OK


def cmd_dihedral(args) -> int:
    signs = args.signs
    if signs is not None and len(signs) != len(args.subset):
        print("need one sign per subset element", file=sys.stderr)
        return EXIT_USAGE
    if args.p is not None and not exactmath.is_odd_prime(args.p):
        print(f"p must be an odd prime, got {args.p}", file=sys.stderr)
        return EXIT_USAGE
    if args.p_max is not None and args.p_max > dihedral.COVER_PRIMES_BOUND:
        print(f"p-max is limited to {dihedral.COVER_PRIMES_BOUND}", file=sys.stderr)
        return EXIT_USAGE
    if args.p is not None:
        query = dihedral.CoverQuery(tuple(args.subset), args.p, tuple(signs) if signs else None)
        doc = {
            "subset": list(args.subset),
            "signs": list(query.signs),
            "p": args.p,
            "exists": dihedral.dcover_exists(query),
            "is_circuit_mod_p": dihedral.circuit_implies_cover(args.subset, args.p),
        }
    else:
        primes = dihedral.cover_primes(tuple(args.subset), args.p_max,
                                       tuple(signs) if signs else None)
        doc = {
            "subset": list(args.subset),
            "signs": list(signs) if signs else [1] * len(args.subset),
            "p_max": args.p_max,
            "primes": primes,
        }
    _dump_json(doc)
    return EXIT_OK


def cmd_bitangents(args) -> int:
    try:
        with open(args.aronhold, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        inp = bitangents.AronholdInput.from_json_dict(doc)
    except (OSError, KeyError, ValueError, ZeroDivisionError) as exc:
        print(f"bad aronhold input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = bitangents.analyze(inp)
        bitangents.require_all_true(report)
    except exactmath.SingularSystem as exc:
        print(f"singular system: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (bitangents.InconsistentSystem, bitangents.DegenerateDenominator,
            bitangents.DuplicateLine, bitangents.ZeroRestriction,
            bitangents.VerificationFailed) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    out = {
        "quartic": {
            "monomials": ["".join(f"t{j}^{e}" for j, e in enumerate(m) if e)
                          for m in bitangents.MONOMIALS],
            "coefficients": [_frac_str(c) for c in report.quartic.coeffs],
        },
        "lines": [
            {
                "label": line.label,
                "family": line.family,
                "coeffs": [_frac_str(c) for c in line.form.coeffs],
                "classification": line.classification,
            }
            for line in report.lines
        ],
        "concurrent_triples": [list(t) for t in report.concurrent_triples],
        "residuals_zero": report.residuals_zero,
    }
    _dump_json(out, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwquartic",
        description="Exact census, dihedral-cover tests and bitangent "
                    "reconstruction for the 28 minimal-vector pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vectors", help="list the 28 pair representatives")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_vectors)

    p = sub.add_parser("classify", help="run the signature census")
    p.add_argument("--max-r", type=int, required=True, metavar="R")
    p.add_argument("--field", type=_parse_field, default="q",
                   help="'q' or 'fp:P' with P an odd prime")
    p.add_argument("--out", default=None, help="write the JSON result here too")
    p.add_argument("--checkpoint", default=None, metavar="DIR")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--force-full", action="store_true",
                   help=f"allow --max-r above {FULL_CENSUS_GUARD}")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("matroid", help="rank, independence and circuits of a subset")
    p.add_argument("--subset", type=_parse_subset, required=True)
    p.add_argument("--field", type=_parse_field, default="q")
    p.set_defaults(func=cmd_matroid)

    p = sub.add_parser("dihedral", help="dihedral-cover existence tests")
    p.add_argument("--subset", type=_parse_subset, required=True)
    p.add_argument("--signs", type=_parse_signs, default=None)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=int, default=None)
    group.add_argument("--p-max", type=int, default=None)
    p.set_defaults(func=cmd_dihedral)

    p = sub.add_parser("bitangents", help="reconstruct a quartic from an Aronhold set")
    p.add_argument("--aronhold", required=True, metavar="FILE")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bitangents)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, dihedral.KernelTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())
