#!/usr/bin/env python3
"""Process the built-in polynomial corpus through the batch pipeline.

Writes the corpus as newline-delimited input records, runs the batch
engine over it, and prints the summary line.  The output store is
append-only; re-runs skip records already present.
"""

import argparse
from pathlib import Path

from frobeig.corpus import CORPUS
from frobeig.report import canonical_json, run_batch


def corpus_lines():
    for entry in CORPUS:
        record = {"label": entry.tag, "q": entry.q,
                  "coeffs": list(entry.coefficients)}
        yield canonical_json(record)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default="corpus_run",
                        help="working directory for input and store")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--max-power", type=int, default=None,
                        help="decomposition grid top (default 2)")
    args = parser.parse_args()

    workdir = Path(args.dir)
    workdir.mkdir(parents=True, exist_ok=True)
    in_path = workdir / "corpus.ndjson"
    in_path.write_text("\n".join(corpus_lines()) + "\n")

    options = {}
    if args.max_power is not None:
        options["max_power"] = args.max_power
    summary = run_batch(in_path, workdir / "reports.ndjson",
                        jobs=args.jobs, global_options=options)
    print(canonical_json(summary))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
