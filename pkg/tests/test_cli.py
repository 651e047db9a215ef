"""End-to-end tests of the command-line interface.

Every test drives ``canord.cli.main`` with an argv list and checks the exit
code plus the bytes written to stdout/stderr, so the full argument-parsing,
dispatch, formatting, and error-mapping pipeline is exercised exactly as a
shell user would hit it.  One smoke test additionally runs the installed
``canord`` console script in a subprocess.
"""
from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from canord import cli
from canord.cli import main, parse_range
from canord.errors import ParameterError

JSON_KEYS = [
    "type",
    "params",
    "countResolution",
    "countGroup",
    "curves",
    "n0",
    "kTrivial",
    "torsion",
    "agree",
]


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ----------------------------------------------------------------- verify --


def test_verify_single_type_text(capsys):
    rc, out, err = run_cli(capsys, "verify", "--type", "L", "--n", "2")
    assert rc == 0
    assert "L(n=2): resolution=3 group=3 agree=yes" in out
    assert "skew-constructible: false" in out
    assert err == ""


def test_verify_chain_with_extension(capsys):
    rc, out, _ = run_cli(capsys, "verify", "--type", "A12", "--e", "2")
    assert rc == 0
    assert "resolution=4 group=4 agree=yes" in out
    assert "skew-constructible: true" in out


def test_verify_dl_reports_dash_for_group(capsys):
    rc, out, _ = run_cli(capsys, "verify", "--type", "DL", "--n", "2")
    assert rc == 0
    assert "group=- agree=yes" in out
    assert "note:" in out


def test_verify_range_runs_every_type(capsys):
    rc, out, _ = run_cli(capsys, "verify", "--type", "BL", "--n", "1..3")
    assert rc == 0
    for n in (1, 2, 3):
        assert f"BL(n={n}): resolution={n + 2} group={n + 2} agree=yes" in out


def test_verify_missing_type_is_usage_error(capsys):
    rc = main(["verify"])
    capsys.readouterr()
    assert rc == 2


def test_verify_family_without_required_parameter(capsys):
    rc, _, err = run_cli(capsys, "verify", "--type", "BL")
    assert rc == 2
    assert "requires --n" in err


def test_verify_out_of_range_parameter(capsys):
    rc, _, err = run_cli(capsys, "verify", "--type", "BD", "--n", "0")
    assert rc == 2
    assert "no valid parameters" in err


def test_verify_unknown_type_token(capsys):
    rc, _, err = run_cli(capsys, "verify", "--type", "Z9", "--n", "1")
    assert rc == 2
    assert "unknown type token" in err


def test_verify_ade_node_token(capsys):
    rc, out, _ = run_cli(capsys, "verify", "--type", "D4")
    assert rc == 0
    assert "D4: resolution=5 group=5 agree=yes" in out


def test_verify_json_single_report_is_object(capsys):
    rc, out, _ = run_cli(capsys, "verify", "--type", "D4", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert isinstance(payload, dict)
    assert list(payload.keys()) == JSON_KEYS
    assert payload["countResolution"] == payload["countGroup"] == 5
    assert payload["agree"] is True


def test_verify_json_range_is_array_and_byte_stable(capsys):
    rc, out, _ = run_cli(
        capsys, "verify", "--type", "Anz", "--n", "1..2", "--e", "2", "--format", "json"
    )
    assert rc == 0
    payload = json.loads(out)
    assert isinstance(payload, list) and len(payload) == 2
    assert out == json.dumps(payload, indent=2) + "\n"


def test_verify_exit_one_on_disagreement(capsys, monkeypatch):
    class FakeReport:
        agree = False

        def to_text(self):
            return "forced disagreement"

    monkeypatch.setattr(cli, "verify", lambda t: FakeReport())
    rc, out, _ = run_cli(capsys, "verify", "--type", "L", "--n", "1")
    assert rc == 1
    assert "forced disagreement" in out


# ------------------------------------------------------------------ table --


def test_table_ade_rows_and_summary(capsys):
    rc, out, _ = run_cli(capsys, "table", "--families", "ADE")
    assert rc == 0
    lines = out.strip().splitlines()
    assert len(lines) == 13
    assert lines[-1] == "checked 12 types; all agree"
    assert sum("agree=yes" in line for line in lines) == 12


def test_table_empty_families_is_usage_error(capsys):
    rc, _, err = run_cli(capsys, "table", "--families", "")
    assert rc == 2
    assert "at least one family" in err


def test_table_unknown_family(capsys):
    rc, _, err = run_cli(capsys, "table", "--families", "BL,XYZ")
    assert rc == 2
    assert "unknown family" in err


def test_table_tolerates_trailing_n_in_family_tokens(capsys):
    rc, out, _ = run_cli(capsys, "table", "--families", "BDn", "--n", "3")
    assert rc == 0
    assert "BD(n=3)" in out


def test_table_json_selection_and_byte_stability(capsys):
    rc, out, _ = run_cli(
        capsys, "table", "--families", "BL,B", "--n", "1..4", "--format", "json"
    )
    assert rc == 0
    payload = json.loads(out)
    assert isinstance(payload, list) and len(payload) == 8
    assert {entry["type"] for entry in payload} == {"BL", "B"}
    for entry in payload:
        assert list(entry.keys()) == JSON_KEYS
        assert entry["agree"] is True
    assert out == json.dumps(payload, indent=2) + "\n"


def test_table_renders_dl_group_column_as_dash(capsys):
    rc, out, _ = run_cli(capsys, "table", "--families", "DL", "--n", "1..2")
    assert rc == 0
    assert out.count("group=-") == 2


def test_table_exit_one_on_disagreement(capsys, monkeypatch):
    class FakeCount:
        total = 99

    class FakeReport:
        def __init__(self, t):
            self.type = t
            self.resolution_count = FakeCount()
            self.group_count = 1
            self.k_trivial = True
            self.agree = False

    monkeypatch.setattr(cli, "verify", FakeReport)
    rc, out, _ = run_cli(capsys, "table", "--families", "L", "--n", "1..2")
    assert rc == 1
    assert "disagreements: L(n=1), L(n=2)" in out


# ----------------------------------------------------------------- quiver --


def test_quiver_text_identifies_affine_diagram(capsys):
    rc, out, _ = run_cli(capsys, "quiver", "--group", "E6")
    assert rc == 0
    assert "group order 24" in out
    assert "affine diagram: E6" in out


def test_quiver_dot_cycle(capsys):
    rc, out, _ = run_cli(capsys, "quiver", "--group", "A3", "--dot")
    assert rc == 0
    edges = [line for line in out.splitlines() if " -- " in line]
    assert len(edges) == 4
    for i in range(4):
        assert f'n{i} [label="{i} (dim 1)"];' in out


def test_quiver_json_payload(capsys):
    rc, out, _ = run_cli(capsys, "quiver", "--group", "A2", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert payload["group"] == "A2"
    assert payload["order"] == 3
    assert payload["dims"] == [1, 1, 1]
    assert payload["affine"] == "A2"
    assert out == json.dumps(payload, indent=2) + "\n"


def test_quiver_unknown_group(capsys):
    rc, _, err = run_cli(capsys, "quiver", "--group", "Z9")
    assert rc == 2
    assert "unknown group" in err


def test_quiver_rejects_low_d_rank(capsys):
    rc, _, err = run_cli(capsys, "quiver", "--group", "D3")
    assert rc == 2
    assert "unknown group" in err


# ---------------------------------------------------------------- lattice --


def test_lattice_dot_with_trailing_n_token(capsys):
    rc, out, _ = run_cli(capsys, "lattice", "--type", "BDn", "--n", "3", "--dot")
    assert rc == 0
    assert out.startswith("graph")
    assert " -- " in out


def test_lattice_text_lists_curves_and_pairing(capsys):
    rc, out, _ = run_cli(capsys, "lattice", "--type", "A12", "--e", "2")
    assert rc == 0
    assert "resolution lattice for A12(e=2)" in out
    assert "pairing:" in out
    assert "self=-1" in out
    assert "e=2" in out


def test_lattice_json_schema(capsys):
    rc, out, _ = run_cli(capsys, "lattice", "--type", "L", "--n", "1", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    for key in ("type", "params", "curves", "intersections", "secondary"):
        assert key in payload
    assert payload["type"] == "L"
    assert out == json.dumps(payload, indent=2) + "\n"


def test_lattice_requires_single_type(capsys):
    rc, _, err = run_cli(capsys, "lattice", "--type", "BL", "--n", "1..3")
    assert rc == 2
    assert "single type" in err


# ---------------------------------------------------------------- helpers --


def test_parse_range_forms():
    assert parse_range("3", "--n") == [3]
    assert parse_range("1..4", "--n") == [1, 2, 3, 4]
    with pytest.raises(ParameterError):
        parse_range("4..2", "--n")
    with pytest.raises(ParameterError):
        parse_range("x", "--n")


def test_unknown_subcommand_is_usage_error(capsys):
    rc = main(["frobnicate"])
    capsys.readouterr()
    assert rc == 2


def test_console_script_smoke():
    exe = shutil.which("canord")
    assert exe, "console script 'canord' not on PATH"
    proc = subprocess.run(
        [exe, "verify", "--type", "A12", "--e", "1"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "agree=yes" in proc.stdout
