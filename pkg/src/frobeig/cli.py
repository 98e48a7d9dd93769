"""Command-line surface.

Subcommands: validate, invariants, eig, galois, motives, decompose,
check-hypotheses, signature {sig,transfer,am-filter}, batch.  Single
results print one canonical JSON line to stdout; batch appends
newline-delimited records to its output store (see report.py for the
format).  Exit codes: 0 success, 1 domain rejection or certificate
failure, 2 malformed input, 3 I/O failure.

Option precedence, lowest to highest: built-in defaults, the
FROBEIG_MAX_PRECISION environment variable, command-line flags,
per-record options.
"""

import argparse
import json
import re
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, List

from . import __version__
from .config import DEFAULT, Settings
from .errors import FrobeigError, MalformedInput
from .weil import validate
from .splitfield import galois_group, splitting_field
from .eig import build_eig_group, invariants_report
from . import lefmot
from .quadforms import am_filter, signature, tannaka_transfer
from .report import (InputRecord, build_report_record, canonical_json,
                     decomposition_fragment, effective_options,
                     eig_fragment, galois_fragment, hypothesis_fragment,
                     parse_record, run_batch, settings_for)


def _emit(obj) -> None:
    print(canonical_json(obj))


def _flag_options(args) -> Dict[str, int]:
    out = {}
    for key in ("search_bound", "degree_cap", "precision_ceiling",
                "max_power"):
        value = getattr(args, key, None)
        if value is None:
            continue
        if value < 1:
            raise MalformedInput(f"--{key.replace('_', '-')} must be "
                                 "positive")
        out[key] = value
    return out


def _record_from_args(args) -> InputRecord:
    if getattr(args, "record", None):
        if args.record == "-":
            text = sys.stdin.read()
        else:
            text = Path(args.record).read_text()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"record file is not valid JSON: {exc}")
        record = parse_record(obj)
    else:
        if args.q is None or args.coeffs is None:
            raise MalformedInput(
                "provide --q and --coeffs, or --record FILE")
        tokens = [t for t in re.split(r"[\s,]+", args.coeffs.strip()) if t]
        obj = {"q": args.q, "coeffs": tokens}
        if getattr(args, "label", None):
            obj["label"] = args.label
        record = parse_record(obj)
    if getattr(args, "assert_cm", False) and record.cm_assertion is None:
        record = replace(record, cm_assertion=True)
    return record


def _prepared(args, base: Settings):
    """(record, effective options, settings, validated data)."""
    record = _record_from_args(args)
    opts = effective_options(base, _flag_options(args), record.option_dict)
    st = settings_for(opts, base)
    data = validate(record.q, record.coeffs, st)
    return record, opts, st, data


# --- subcommand bodies ---

def cmd_validate(args, base: Settings) -> int:
    record, _, _, data = _prepared(args, base)
    _emit({"accepted": True, "input": record.echo(), "q": data.q,
           "p": data.p, "e": data.e, "g": data.g,
           "simple": data.is_simple})
    return 0


def cmd_invariants(args, base: Settings) -> int:
    record, _, st, data = _prepared(args, base)
    _emit({"input": record.echo(), "invariants": invariants_report(data, st)})
    return 0


def cmd_eig(args, base: Settings) -> int:
    record, _, _, data = _prepared(args, base)
    _emit({"input": record.echo(), "eig": eig_fragment(build_eig_group(data))})
    return 0


def cmd_galois(args, base: Settings) -> int:
    record, _, st, data = _prepared(args, base)
    field = splitting_field(data, settings=st)
    gal = galois_group(field, data, st)
    _emit({"input": record.echo(), "splitting_degree": field.degree,
           "galois": galois_fragment(gal)})
    return 0


def cmd_motives(args, base: Settings) -> int:
    record, _, st, data = _prepared(args, base)
    if args.power < 1 or args.power > base.d_max:
        raise MalformedInput(f"--power must lie in 1..{base.d_max}")
    if args.codim < 0 or args.codim > data.g * args.power:
        raise MalformedInput(
            f"--codim must lie in 0..{data.g * args.power}")
    ambient = "primitive" if args.primitive else "full"
    eig = build_eig_group(data)
    field = splitting_field(data, settings=st)
    gal = galois_group(field, data, st)
    rep = lefmot.classify_orbits(data, field, eig, gal, args.power,
                                 args.codim, ambient, st)
    _emit({"input": record.echo(),
           "decomposition": decomposition_fragment(rep, include_orbits=True)})
    return 0


def cmd_decompose(args, base: Settings) -> int:
    record, opts, st, data = _prepared(args, base)
    eig = build_eig_group(data)
    field = splitting_field(data, settings=st)
    gal = galois_group(field, data, st)
    decs = []
    for d in range(1, opts["max_power"] + 1):
        for n in range(data.g * d + 1):
            rep = lefmot.classify_orbits(data, field, eig, gal, d, n,
                                         "full", st)
            decs.append(decomposition_fragment(rep))
    _emit({"input": record.echo(), "decompositions": decs})
    return 0


def cmd_check_hypotheses(args, base: Settings) -> int:
    record, _, st, data = _prepared(args, base)
    eig = build_eig_group(data)
    field = splitting_field(data, settings=st)
    verdict = lefmot.hypothesis_check(data, field, eig,
                                      cm_assertion=record.cm_assertion,
                                      settings=st)
    _emit({"input": record.echo(),
           "hypothesis": hypothesis_fragment(verdict)})
    return 0


def cmd_report(args, base: Settings) -> int:
    record = _record_from_args(args)
    rep = build_report_record(record, _flag_options(args), base,
                              __version__)
    _emit(rep)
    return 0


def _read_matrices(path: str) -> List[List[List[Fraction]]]:
    """Matrix text format: dimension header, then row-major p/q tokens."""
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    tokens = text.split()
    mats = []
    i = 0
    while i < len(tokens):
        try:
            dim = int(tokens[i], 10)
        except ValueError:
            raise MalformedInput(
                f"expected a dimension header, got {tokens[i]!r}")
        if dim < 1:
            raise MalformedInput("matrix dimension must be positive")
        i += 1
        need = dim * dim
        if len(tokens) - i < need:
            raise MalformedInput(
                f"matrix of dimension {dim} needs {need} entries; only "
                f"{len(tokens) - i} tokens remain")
        entries = []
        for tok in tokens[i:i + need]:
            try:
                entries.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise MalformedInput(f"bad rational entry {tok!r}")
        i += need
        mats.append([entries[r * dim:(r + 1) * dim] for r in range(dim)])
    if not mats:
        raise MalformedInput("matrix file holds no matrices")
    return mats


def cmd_signature(args, base: Settings) -> int:
    if args.mode == "sig":
        mats = _read_matrices(args.matrices)
        if len(mats) != 1:
            raise MalformedInput(
                f"sig expects exactly one matrix, got {len(mats)}")
        pos, neg = signature(mats[0])
        _emit({"dimension": len(mats[0]),
               "signature": [pos, neg, len(mats[0]) - pos - neg]})
        return 0
    if args.mode == "transfer":
        mats = _read_matrices(args.matrices)
        if len(mats) != 4:
            raise MalformedInput(
                "transfer expects four matrices (side A base, side A "
                f"moved, side B base, side B moved), got {len(mats)}")
        result = tannaka_transfer(*mats)
        _emit({"verdict": result.verdict,
               "signature": list(result.signature),
               "charpoly": list(result.charpoly)})
        return 0
    # am-filter
    result = am_filter(args.multiplicity)
    _emit({"multiplicity": result.multiplicity,
           "determined": result.determined,
           "candidates": [list(c) for c in result.candidates],
           "note": result.note})
    return 0


def cmd_batch(args, base: Settings) -> int:
    summary = run_batch(args.in_path, args.out_path, jobs=args.jobs,
                        global_options=_flag_options(args), base=base,
                        version=__version__)
    _emit(summary)
    return 0


# --- parser wiring ---

def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    grp = common.add_argument_group("analysis options")
    grp.add_argument("--search-bound", dest="search_bound", type=int,
                     help="sup-norm box for kernel searches")
    grp.add_argument("--degree-cap", dest="degree_cap", type=int,
                     help="largest splitting-field degree attempted")
    grp.add_argument("--precision-ceiling", dest="precision_ceiling",
                     type=int, help="certified-numerics precision cap, bits")
    grp.add_argument("--max-power", dest="max_power", type=int,
                     help="largest power of the variety in grid reports")
    return common


def _input_flags() -> argparse.ArgumentParser:
    inp = argparse.ArgumentParser(add_help=False)
    grp = inp.add_argument_group("input record")
    grp.add_argument("--q", type=int, help="base field size, a prime power")
    grp.add_argument("--coeffs",
                     help="comma-separated coefficients, ascending degree")
    grp.add_argument("--label", help="free-form label echoed in reports")
    grp.add_argument("--record",
                     help="JSON file with one input record ('-' = stdin)")
    return inp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frobeig",
        description="Exact invariants of Frobenius eigenvalue structures")
    parser.add_argument("--version", action="version",
                        version=f"frobeig {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()
    inp = _input_flags()

    sub.add_parser("validate", parents=[inp, common],
                   help="accept or reject a q-Weil polynomial") \
       .set_defaults(func=cmd_validate)
    sub.add_parser("invariants", parents=[inp, common],
                   help="numerical invariants, ranks, kernel") \
       .set_defaults(func=cmd_invariants)
    sub.add_parser("eig", parents=[inp, common],
                   help="eigenvalue group presentation") \
       .set_defaults(func=cmd_eig)
    sub.add_parser("galois", parents=[inp, common],
                   help="Galois group of the splitting field") \
       .set_defaults(func=cmd_galois)

    motives = sub.add_parser("motives", parents=[inp, common],
                             help="orbit decomposition of one (d, n)")
    motives.add_argument("--power", type=int, required=True,
                         help="power d of the variety")
    motives.add_argument("--codim", type=int, required=True,
                         help="codimension n (weight 2n)")
    motives.add_argument("--primitive", action="store_true",
                         help="decompose the primitive part only")
    motives.set_defaults(func=cmd_motives)

    sub.add_parser("decompose", parents=[inp, common],
                   help="decomposition grid over d and n") \
       .set_defaults(func=cmd_decompose)

    hyp = sub.add_parser("check-hypotheses", parents=[inp, common],
                         help="positivity-theorem hypothesis verdict")
    hyp.add_argument("--assert-cm", action="store_true",
                     help="assert a totally real splitting subfield "
                          "(CM datum) is available")
    hyp.set_defaults(func=cmd_check_hypotheses)

    sub.add_parser("report", parents=[inp, common],
                   help="full report record for one input") \
       .set_defaults(func=cmd_report)

    sig = sub.add_parser("signature",
                         help="exact quadratic-form certificates")
    sig_modes = sig.add_subparsers(dest="mode", required=True)
    one = sig_modes.add_parser("sig", help="signature of one form")
    one.add_argument("matrices", help="matrix file ('-' = stdin)")
    tr = sig_modes.add_parser("transfer",
                              help="signature transfer certificate")
    tr.add_argument("matrices", help="file with the four matrices")
    am = sig_modes.add_parser("am-filter",
                              help="mod-4 candidate filter")
    am.add_argument("multiplicity", type=int)
    sig.set_defaults(func=cmd_signature)

    batch = sub.add_parser("batch", parents=[common],
                           help="batch-process an input file")
    batch.add_argument("--in", dest="in_path", required=True,
                       help="newline-delimited input records")
    batch.add_argument("--out", dest="out_path", required=True,
                       help="append-only output store")
    batch.add_argument("--jobs", type=int, default=1,
                       help="worker processes (default 1)")
    batch.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    base = DEFAULT.with_env_ceiling()
    try:
        return args.func(args, base)
    except MalformedInput as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 2
    except FrobeigError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    except OSError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 3


if __name__ == "__main__":
    sys.exit(main())
