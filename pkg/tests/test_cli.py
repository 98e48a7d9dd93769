"""CLI surface: record parsing, canonical output, exit codes, batch store."""

import io
import json
import sys
from fractions import Fraction

import pytest

from frobeig.cli import main
from frobeig.config import DEFAULT
from frobeig.errors import MalformedInput
from frobeig.report import (InputRecord, build_report_record, canonical_json,
                            content_key, effective_options, parse_record,
                            run_batch, settings_for)


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out.strip()
    return rc, (json.loads(out) if out else None)


# --- canonical serialization ---

class TestCanonicalJson:
    def test_numbers_become_strings(self):
        s = canonical_json({"b": 2, "a": [Fraction(1, 2), 3, Fraction(4)]})
        assert s == '{"a":["1/2","3","4"],"b":"2"}'

    def test_bools_and_null_survive(self):
        assert canonical_json({"t": True, "n": None, "f": False}) == \
            '{"f":false,"n":null,"t":true}'

    def test_key_order_is_irrelevant(self):
        a = {"x": 1, "y": {"b": 2, "a": 3}}
        b = {"y": {"a": 3, "b": 2}, "x": 1}
        assert canonical_json(a) == canonical_json(b)

    def test_rejects_non_string_keys_and_unknown_types(self):
        with pytest.raises(TypeError):
            canonical_json({1: "x"})
        with pytest.raises(TypeError):
            canonical_json({"x": object()})


# --- input records ---

class TestParseRecord:
    def test_full_record(self):
        rec = parse_record({"q": 5, "coeffs": [5, -1, 1], "label": "e",
                            "cm_assertion": True,
                            "options": {"search_bound": 6}})
        assert rec.q == 5
        assert rec.coeffs == (5, -1, 1)
        assert rec.label == "e"
        assert rec.cm_assertion is True
        assert rec.option_dict == {"search_bound": 6}

    def test_string_integers_accepted(self):
        rec = parse_record({"q": "9", "coeffs": ["9", "-6", "1"]})
        assert rec.q == 9
        assert rec.coeffs == (9, -6, 1)

    @pytest.mark.parametrize("obj", [
        42,
        {"coeffs": [5, -1, 1]},                          # no q
        {"q": 5},                                        # no coeffs
        {"q": 5, "coeffs": [5, -1, 1, 1]},               # odd degree
        {"q": 5, "coeffs": [5, -1, 2]},                  # not monic
        {"q": 5, "coeffs": [1]},                         # degree 0
        {"q": 5, "coeffs": []},
        {"q": True, "coeffs": [5, -1, 1]},               # bool is not an int
        {"q": 5, "coeffs": [5, -1, 1], "label": 7},
        {"q": 5, "coeffs": [5, -1, 1], "cm_assertion": "yes"},
        {"q": 5, "coeffs": [5, -1, 1], "extra": 1},
        {"q": 5, "coeffs": [5, -1, 1], "options": {"bogus": 2}},
        {"q": 5, "coeffs": [5, -1, 1], "options": {"search_bound": 0}},
    ])
    def test_rejects(self, obj):
        with pytest.raises(MalformedInput):
            parse_record(obj)


class TestOptions:
    def test_layering_record_wins(self):
        opts = effective_options(DEFAULT, {"search_bound": 9},
                                 {"search_bound": 3, "max_power": 1})
        assert opts["search_bound"] == 3
        assert opts["max_power"] == 1
        assert opts["degree_cap"] == DEFAULT.degree_cap

    def test_max_power_capped_by_settings(self):
        with pytest.raises(MalformedInput):
            effective_options(DEFAULT, {"max_power": DEFAULT.d_max + 1})

    def test_settings_for_clamps_low_ceiling(self):
        opts = effective_options(DEFAULT, {"precision_ceiling": 8})
        st = settings_for(opts, DEFAULT)
        assert st.precision_ceiling == DEFAULT.precision_start

    def test_content_key_sensitivity(self):
        rec = parse_record({"q": 5, "coeffs": [5, -1, 1]})
        opts = effective_options(DEFAULT)
        base = content_key(rec.echo(), opts, "0.1.0")
        assert len(base) == 64
        labeled = parse_record({"q": 5, "coeffs": [5, -1, 1], "label": "x"})
        assert content_key(labeled.echo(), opts, "0.1.0") != base
        assert content_key(rec.echo(), opts, "0.2.0") != base
        bumped = dict(opts, search_bound=opts["search_bound"] + 1)
        assert content_key(rec.echo(), bumped, "0.1.0") != base
        # same content twice -> same key
        again = parse_record({"coeffs": [5, -1, 1], "q": 5})
        assert content_key(again.echo(), opts, "0.1.0") == base


# --- single-record commands ---

class TestSingleCommands:
    def test_validate_accepts(self, capsys):
        rc, out = run_cli(capsys, "validate", "--q", "5",
                          "--coeffs", "5,-1,1")
        assert rc == 0
        assert out["accepted"] is True
        assert out["g"] == "1"

    def test_validate_modulus_rejection_exit_1(self, capsys):
        rc, out = run_cli(capsys, "validate", "--q", "4",
                          "--coeffs", "4,-5,1")
        assert rc == 1
        assert out["error"]["type"] == "RootModulusFailed"

    def test_not_prime_power_exit_1(self, capsys):
        rc, out = run_cli(capsys, "validate", "--q", "6",
                          "--coeffs", "6,-1,1")
        assert rc == 1
        assert out["error"]["type"] == "NotPrimePower"

    def test_malformed_coeffs_exit_2(self, capsys):
        rc, out = run_cli(capsys, "validate", "--q", "5", "--coeffs", "5,-1")
        assert rc == 2
        assert out["error"]["type"] == "MalformedInput"

    def test_missing_input_exit_2(self, capsys):
        rc, out = run_cli(capsys, "invariants")
        assert rc == 2

    def test_record_file_and_stdin(self, capsys, tmp_path, monkeypatch):
        path = tmp_path / "rec.json"
        path.write_text('{"q": 5, "coeffs": [5, -1, 1], "label": "E"}')
        rc, out = run_cli(capsys, "invariants", "--record", str(path))
        assert rc == 0
        assert out["input"]["label"] == "E"
        assert out["invariants"]["frobenius_rank"] == "1"
        monkeypatch.setattr(sys, "stdin", io.StringIO(path.read_text()))
        rc, out = run_cli(capsys, "validate", "--record", "-")
        assert rc == 0 and out["accepted"] is True

    def test_record_file_missing_exit_3(self, capsys, tmp_path):
        rc, out = run_cli(capsys, "validate", "--record",
                          str(tmp_path / "absent.json"))
        assert rc == 3

    def test_record_file_bad_json_exit_2(self, capsys, tmp_path):
        path = tmp_path / "rec.json"
        path.write_text("{nope")
        rc, out = run_cli(capsys, "validate", "--record", str(path))
        assert rc == 2

    def test_eig_torsion_exit_1(self, capsys):
        # (X^2-2)^2 over q=2: two distinct real roots
        rc, out = run_cli(capsys, "eig", "--q", "2",
                          "--coeffs", "4,0,-4,0,1")
        assert rc == 1
        assert out["error"]["type"] == "TorsionDetected"

    def test_eig_fragment(self, capsys):
        rc, out = run_cli(capsys, "eig", "--q", "5", "--coeffs", "5,-1,1")
        assert rc == 0
        assert out["eig"]["rank"] == "2"
        assert out["eig"]["basis_labels"] == ["pi_1", "q"]

    def test_galois(self, capsys):
        rc, out = run_cli(capsys, "galois", "--q", "5",
                          "--coeffs", "5,-1,1")
        assert rc == 0
        assert out["galois"]["order"] == "2"
        assert out["galois"]["fully_certified"] is True

    def test_motives_worked_example(self, capsys):
        rc, out = run_cli(capsys, "motives", "--q", "3", "--coeffs", "3,0,1",
                          "--power", "4", "--codim", "2")
        assert rc == 0
        dec = out["decomposition"]
        assert dec["dims"] == ["36", "2", "32"]
        assert dec["total"] == "70"
        exotic = [o for o in dec["orbits"]
                  if o["classification"] == "EXOTIC"]
        assert len(exotic) == 1 and exotic[0]["orbit_size"] == "2"

    def test_motives_primitive(self, capsys):
        rc, out = run_cli(capsys, "motives", "--q", "3", "--coeffs", "3,0,1",
                          "--power", "4", "--codim", "2", "--primitive")
        assert rc == 0
        assert out["decomposition"]["dims"] == ["20", "2", "20"]

    def test_motives_bounds_exit_2(self, capsys):
        rc, _ = run_cli(capsys, "motives", "--q", "3", "--coeffs", "3,0,1",
                        "--power", "7", "--codim", "1")
        assert rc == 2
        rc, _ = run_cli(capsys, "motives", "--q", "3", "--coeffs", "3,0,1",
                        "--power", "2", "--codim", "3")
        assert rc == 2

    def test_decompose_grid(self, capsys):
        rc, out = run_cli(capsys, "decompose", "--q", "5",
                          "--coeffs", "5,-1,1")
        assert rc == 0
        # d=1: n in 0..1, d=2: n in 0..2
        assert len(out["decompositions"]) == 5
        d2n1 = [d for d in out["decompositions"]
                if d["d"] == "2" and d["n"] == "1"]
        assert d2n1[0]["dims"] == ["4", "0", "2"]

    def test_check_hypotheses_paths(self, capsys):
        rc, out = run_cli(capsys, "check-hypotheses", "--q", "3",
                          "--coeffs", "3,0,1")
        assert rc == 0
        assert out["hypothesis"]["verdict"] == "ALL_PASS"
        rc, out = run_cli(capsys, "check-hypotheses", "--q", "9",
                          "--coeffs", "9,6,1")
        assert rc == 0
        assert out["hypothesis"]["verdict"] == "FAIL"
        rc, out = run_cli(capsys, "check-hypotheses", "--q", "3",
                          "--coeffs", "27,0,27,0,9,0,1")
        assert rc == 0
        assert out["hypothesis"]["verdict"] == "PASS_CONDITIONAL_ON_CM"
        rc, out = run_cli(capsys, "check-hypotheses", "--q", "3",
                          "--coeffs", "27,0,27,0,9,0,1", "--assert-cm")
        assert rc == 0
        assert out["hypothesis"]["verdict"] == "ALL_PASS"

    def test_check_hypotheses_not_simple_exit_1(self, capsys):
        rc, out = run_cli(capsys, "check-hypotheses", "--q", "5",
                          "--coeffs", "25,-5,10,-1,1")
        assert rc == 1
        assert out["error"]["type"] == "NotSimple"


# --- full report records ---

class TestReportRecord:
    def test_report_command_and_options_precedence(self, capsys, tmp_path):
        path = tmp_path / "rec.json"
        path.write_text(json.dumps({"q": 5, "coeffs": [5, -1, 1],
                                    "options": {"search_bound": 3}}))
        rc, out = run_cli(capsys, "report", "--record", str(path),
                          "--search-bound", "9", "--max-power", "2")
        assert rc == 0
        assert out["options"]["search_bound"] == "3"   # record wins
        assert out["options"]["max_power"] == "2"
        assert out["record_type"] == "report"

    def test_report_content(self):
        rec = parse_record({"q": 5, "coeffs": [5, -1, 1]})
        rep = build_report_record(rec)
        assert rep["status"]["undetermined"] == []
        assert rep["hypothesis"]["verdict"] == "ALL_PASS"
        preds = rep["signature_predictions"]
        assert len(preds) == 1 and preds[0]["d"] == 2
        assert preds[0]["rho"] == [1, 4]
        assert preds[0]["s_plus"] == 3 and preds[0]["s_minus"] == 1
        assert preds[0]["negative_prediction"] is False
        # byte-identical on recompute
        assert canonical_json(build_report_record(rec)) == \
            canonical_json(rep)

    def test_report_degrades_on_degree_cap(self):
        rec = parse_record({"q": 5, "coeffs": [25, -5, 6, -1, 1],
                            "options": {"degree_cap": 4}})
        rep = build_report_record(rec)
        assert rep["decompositions"] is None
        assert rep["hypothesis"] is None
        und = rep["status"]["undetermined"]
        assert "decompositions" in und and "galois" in und
        assert "invariants.frobenius_rank" in und
        assert rep["status"]["reasons"]["galois"] == "DegreeCapExceeded"
        # rank of the eigenvalue group needs no splitting field
        assert rep["eig"]["rank"] == 3

    def test_report_not_simple_hypothesis_flagged(self):
        rec = parse_record({"q": 5, "coeffs": [25, -5, 10, -1, 1],
                            "options": {"max_power": 1}})
        rep = build_report_record(rec)
        assert rep["hypothesis"] is None
        assert rep["status"]["reasons"]["hypothesis"] == "NotSimple"
        assert rep["decompositions"] is not None

    def test_env_ceiling_feeds_options(self, capsys, monkeypatch):
        monkeypatch.setenv("FROBEIG_MAX_PRECISION", "8192")
        rc, out = run_cli(capsys, "report", "--q", "5",
                          "--coeffs", "5,-1,1", "--max-power", "1")
        assert rc == 0
        assert out["options"]["precision_ceiling"] == "8192"


# --- signature subcommands ---

def write_matrices(tmp_path, text):
    path = tmp_path / "mats.txt"
    path.write_text(text)
    return str(path)


class TestSignatureCli:
    def test_sig_triple(self, capsys, tmp_path):
        path = write_matrices(tmp_path, "3\n1 0 0\n0 -2 0\n0 0 3\n")
        rc, out = run_cli(capsys, "signature", "sig", path)
        assert rc == 0
        assert out["signature"] == ["2", "1", "0"]

    def test_sig_fraction_entries(self, capsys, tmp_path):
        path = write_matrices(tmp_path, "2\n1/2 0\n0 -3/4\n")
        rc, out = run_cli(capsys, "signature", "sig", path)
        assert rc == 0
        assert out["signature"] == ["1", "1", "0"]

    def test_sig_singular_exit_1(self, capsys, tmp_path):
        path = write_matrices(tmp_path, "2\n1 0\n0 0\n")
        rc, out = run_cli(capsys, "signature", "sig", path)
        assert rc == 1
        assert out["error"]["type"] == "NondegeneracyFailed"

    def test_sig_asymmetric_exit_1(self, capsys, tmp_path):
        path = write_matrices(tmp_path, "2\n1 2\n0 1\n")
        rc, out = run_cli(capsys, "signature", "sig", path)
        assert rc == 1
        assert out["error"]["type"] == "NotSymmetric"

    @pytest.mark.parametrize("text", [
        "",                              # no matrices
        "2\n1 0 0 1\n2\n1 0 0 1\n",      # sig wants exactly one
        "x\n1\n",                        # bad dimension header
        "2\n1 0 0\n",                    # short entry list
        "1\nfoo\n",                      # bad token
        "1\n1/0\n",                      # zero denominator
        "0\n",                           # nonpositive dimension
    ])
    def test_sig_parse_errors_exit_2(self, capsys, tmp_path, text):
        path = write_matrices(tmp_path, text)
        rc, _ = run_cli(capsys, "signature", "sig", path)
        assert rc == 2

    def test_transfer_certificate(self, capsys, tmp_path):
        path = write_matrices(
            tmp_path,
            "2\n1 0\n0 1\n2\n2 0\n0 3\n2\n1 0\n0 -1\n2\n2 0\n0 -3\n")
        rc, out = run_cli(capsys, "signature", "transfer", path)
        assert rc == 0
        assert out["verdict"] == "SignaturesEqual"
        assert out["signature"] == ["1", "1"]
        assert out["charpoly"] == ["6", "-5", "1"]

    def test_transfer_mismatch_exit_1(self, capsys, tmp_path):
        path = write_matrices(
            tmp_path,
            "2\n1 0\n0 1\n2\n2 0\n0 3\n2\n1 0\n0 -1\n2\n2 0\n0 -4\n")
        rc, out = run_cli(capsys, "signature", "transfer", path)
        assert rc == 1
        assert out["error"]["type"] == "CharpolyMismatch"

    def test_transfer_wrong_count_exit_2(self, capsys, tmp_path):
        path = write_matrices(tmp_path, "2\n1 0\n0 1\n")
        rc, _ = run_cli(capsys, "signature", "transfer", path)
        assert rc == 2

    def test_am_filter(self, capsys):
        rc, out = run_cli(capsys, "signature", "am-filter", "3")
        assert rc == 0
        assert out["determined"] is True
        assert out["candidates"] == [["2", "0"]]
        rc, out = run_cli(capsys, "signature", "am-filter", "2")
        assert rc == 0
        assert out["determined"] is False
        assert out["candidates"] == [["2", "0"], ["0", "2"]]
        rc, out = run_cli(capsys, "signature", "am-filter", "0")
        assert rc == 2


# --- batch store ---

BATCH_LINES = [
    '{"q": 5, "coeffs": [5, -1, 1], "label": "ordinary"}',
    '{"q": 3, "coeffs": [3, 0, 1], "label": "supersingular"}',
    '{"q": 4, "coeffs": [4, -5, 1], "label": "bad-modulus"}',
    'this is not json',
]


def write_batch_input(tmp_path, lines=None):
    path = tmp_path / "in.ndjson"
    path.write_text("\n".join(lines or BATCH_LINES) + "\n")
    return path


def store_records(path):
    records = [json.loads(line) for line in path.read_text().splitlines()]
    keyed = [r for r in records if r["record_type"] != "manifest"]
    manifests = [r for r in records if r["record_type"] == "manifest"]
    return keyed, manifests


class TestBatch:
    def test_fresh_run_and_idempotent_rerun(self, capsys, tmp_path):
        inp = write_batch_input(tmp_path)
        out = tmp_path / "store.ndjson"
        rc, summary = run_cli(capsys, "batch", "--in", str(inp),
                              "--out", str(out))
        assert rc == 0
        assert summary["processed"] == "4"
        assert summary["written"] == "4"
        assert summary["errors"] == "2"
        keyed, manifests = store_records(out)
        assert len(keyed) == 4 and len(manifests) == 1
        assert manifests[0]["written"] == "4"
        assert "timestamp" in manifests[0]
        assert not any("timestamp" in r for r in keyed)
        # keyed records arrive sorted by content_key
        keys = [r["content_key"] for r in keyed]
        assert keys == sorted(keys)

        rc, summary = run_cli(capsys, "batch", "--in", str(inp),
                              "--out", str(out))
        assert rc == 0
        assert summary["written"] == "0"
        assert summary["skipped"] == "4"
        keyed2, manifests2 = store_records(out)
        assert len(keyed2) == 4 and len(manifests2) == 2

    def test_error_records_inline(self, capsys, tmp_path):
        inp = write_batch_input(tmp_path)
        out = tmp_path / "store.ndjson"
        run_cli(capsys, "batch", "--in", str(inp), "--out", str(out))
        keyed, _ = store_records(out)
        errors = {r.get("raw", r["input"] and r["input"].get("label")):
                  r["error"]["type"]
                  for r in keyed if r["record_type"] == "error"}
        assert errors["this is not json"] == "JSONDecodeError"
        assert errors["bad-modulus"] == "RootModulusFailed"

    def test_duplicate_lines_skipped_within_run(self, capsys, tmp_path):
        inp = write_batch_input(tmp_path, [BATCH_LINES[0], BATCH_LINES[0]])
        out = tmp_path / "store.ndjson"
        rc, summary = run_cli(capsys, "batch", "--in", str(inp),
                              "--out", str(out))
        assert rc == 0
        assert summary["written"] == "1" and summary["skipped"] == "1"

    def test_two_fresh_stores_byte_identical(self, capsys, tmp_path):
        inp = write_batch_input(tmp_path)
        out1, out2 = tmp_path / "s1.ndjson", tmp_path / "s2.ndjson"
        run_cli(capsys, "batch", "--in", str(inp), "--out", str(out1))
        run_cli(capsys, "batch", "--in", str(inp), "--out", str(out2))
        strip = lambda p: [ln for ln in p.read_text().splitlines()
                           if '"record_type":"manifest"' not in ln]
        assert strip(out1) == strip(out2)

    def test_jobs_equivalence(self, capsys, tmp_path):
        inp = write_batch_input(tmp_path)
        out1, out2 = tmp_path / "s1.ndjson", tmp_path / "s2.ndjson"
        run_cli(capsys, "batch", "--in", str(inp), "--out", str(out1),
                "--jobs", "1")
        run_cli(capsys, "batch", "--in", str(inp), "--out", str(out2),
                "--jobs", "3")
        strip = lambda p: sorted(ln for ln in p.read_text().splitlines()
                                 if '"record_type":"manifest"' not in ln)
        assert strip(out1) == strip(out2)

    def test_missing_input_exit_3(self, capsys, tmp_path):
        rc, out = run_cli(capsys, "batch", "--in",
                          str(tmp_path / "absent.ndjson"),
                          "--out", str(tmp_path / "o.ndjson"))
        assert rc == 3

    def test_corrupt_store_exit_3(self, capsys, tmp_path):
        inp = write_batch_input(tmp_path)
        out = tmp_path / "store.ndjson"
        out.write_text("not a record\n")
        rc, msg = run_cli(capsys, "batch", "--in", str(inp),
                          "--out", str(out))
        assert rc == 3
        assert "refusing to append" in msg["error"]["message"]

    def test_run_batch_api_options_change_keys(self, tmp_path):
        inp = write_batch_input(tmp_path, [BATCH_LINES[0]])
        out = tmp_path / "store.ndjson"
        s1 = run_batch(inp, out, global_options={"max_power": 1})
        assert s1["written"] == 1
        # different effective options -> different content_key -> no skip
        s2 = run_batch(inp, out, global_options={"max_power": 2})
        assert s2["written"] == 1 and s2["skipped"] == 0
        s3 = run_batch(inp, out, global_options={"max_power": 1})
        assert s3["skipped"] == 1
