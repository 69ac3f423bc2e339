"""Command-line front end: golden outputs, exit codes, JSON round-trips."""

import json

import pytest

from magari4.cli import run
from magari4.formula import parse, truth_table
from magari4.selftest import CANNED_FORMULAS
from magari4.tables import FuncTable


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# eval / table / equiv
# ---------------------------------------------------------------------------


def test_eval_golden(capsys):
    code, out, _ = invoke(capsys, "eval", "p -> p", "--env", "p=s")
    assert code == 0
    assert out == "1\n"


def test_eval_accepts_long_tokens_and_json(capsys):
    code, out, _ = invoke(capsys, "eval", "~ # (p & ~p)", "--env", "p=sigma", "--json")
    assert code == 0
    assert json.loads(out) == {"value": "r"}


def test_eval_unbound_variable_is_usage_error(capsys):
    code, _, err = invoke(capsys, "eval", "p & q", "--env", "p=0")
    assert code == 2
    assert "q" in err


def test_eval_bad_binding(capsys):
    code, _, err = invoke(capsys, "eval", "p", "--env", "p=x")
    assert code == 2


def test_table_golden(capsys):
    code, out, _ = invoke(capsys, "table", "# p")
    assert code == 0
    assert out == "1:ss11\n"


def test_table_json_round_trips(capsys):
    code, out, _ = invoke(capsys, "table", "p & q", "--json")
    payload = json.loads(out)
    table = FuncTable.from_text(f"{payload['arity']}:{payload['entries']}")
    assert table == truth_table(parse("p & q"), ("p", "q"))


def test_table_respects_var_order(capsys):
    _, out_pq, _ = invoke(capsys, "table", "p -> q", "--vars", "p,q")
    _, out_qp, _ = invoke(capsys, "table", "p -> q", "--vars", "q,p")
    assert out_pq != out_qp


def test_table_missing_variable_is_usage_error(capsys):
    code, _, err = invoke(capsys, "table", "p & q", "--vars", "p")
    assert code == 2
    assert "q" in err


def test_equiv_negative_with_counterexample(capsys):
    code, out, _ = invoke(capsys, "equiv", "p", "q")
    assert code == 1
    assert out == "not equivalent at p=0,q=r: 0 vs r\n"


def test_equiv_positive(capsys):
    code, out, _ = invoke(capsys, "equiv", "# # (p & ~p)", "1")
    assert code == 0
    assert out == "equivalent\n"


def test_parse_error_is_usage_error(capsys):
    code, _, err = invoke(capsys, "eval", "p &")
    assert code == 2
    assert "error" in err


# ---------------------------------------------------------------------------
# classify / violations
# ---------------------------------------------------------------------------


def test_classify_table_golden(capsys):
    code, out, _ = invoke(capsys, "classify", "--table", "1:ss11")
    assert code == 0
    assert out == "P2 P9 P10\n"


def test_classify_formula_and_json(capsys):
    code, out, _ = invoke(capsys, "classify", "p", "--json")
    assert code == 0
    assert json.loads(out) == {"classes": list(range(1, 13))}


def test_violations_single_relation(capsys):
    code, out, _ = invoke(capsys, "violations", "--table", "1:ss11", "--relations", "R1")
    assert code == 0
    assert out == "R1: violated by columns (0) -> image (s)\n"


def test_violations_preserved_is_negative_answer(capsys):
    code, out, _ = invoke(capsys, "violations", "--table", "1:ss11", "--relations", "R2")
    assert code == 1
    assert out == "R2: preserved\n"


def test_violations_all_relations_json(capsys):
    code, out, _ = invoke(capsys, "violations", "# p", "--json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["results"]) == 12
    first = payload["results"][0]
    assert first == {
        "relation": "R1",
        "preserved": False,
        "witness": {"columns": ["0"], "image": "s"},
    }


def test_violations_matrix_text_relation(capsys):
    code, out, _ = invoke(
        capsys, "violations", "--table", "1:1sr0", "--relations", "0rs1;r01s"
    )
    assert code == 1  # negation commutes with the swap, so it preserves
    assert "preserved" in out


# ---------------------------------------------------------------------------
# synthesize
# ---------------------------------------------------------------------------


def test_synthesize_round_trips_through_the_grammar(capsys):
    code, out, _ = invoke(capsys, "synthesize", "--table", "1:ss11")
    assert code == 0
    assert truth_table(parse(out.strip()), ("p1",)) == FuncTable.from_text("1:ss11")


def test_synthesize_rejects_breaker_with_exit_1(capsys):
    code, _, err = invoke(capsys, "synthesize", "--table", "1:0s00")
    assert code == 1
    assert "not representable" in err


def test_synthesize_arity_cap_is_usage_error(capsys):
    entries = "0" * (4**5)
    code, _, _ = invoke(capsys, "synthesize", "--table", f"5:{entries}")
    assert code == 2


def test_synthesize_bad_table_text(capsys):
    code, _, _ = invoke(capsys, "synthesize", "--table", "1:ssx1")
    assert code == 2


# ---------------------------------------------------------------------------
# closure / derive-constants
# ---------------------------------------------------------------------------


def test_closure_json_schema(tmp_path, capsys):
    sigma = tmp_path / "sigma.txt"
    sigma.write_text("~ p\n# p\n")
    code, out, _ = invoke(capsys, "closure", "--sigma", str(sigma), "--arity", "1")
    assert code == 0
    payload = json.loads(out)
    assert payload == {"arity": 1, "size": 10, "constants": ["0", "1", "r", "s"]}


def test_closure_accepts_tables_and_labels(tmp_path, capsys):
    sigma = tmp_path / "sigma.txt"
    sigma.write_text("neg: 1:1sr0\n")
    code, out, _ = invoke(capsys, "closure", "--sigma", str(sigma))
    assert code == 0
    assert json.loads(out) == {"arity": 1, "size": 2, "constants": []}


def test_closure_missing_file_is_usage_error(capsys):
    code, _, _ = invoke(capsys, "closure", "--sigma", "/nonexistent/sigma.txt")
    assert code == 2


def test_closure_binary_fragment(tmp_path, capsys):
    sigma = tmp_path / "sigma.txt"
    sigma.write_text("meet: p & q\n")
    code, out, _ = invoke(capsys, "closure", "--sigma", str(sigma), "--arity", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["arity"] == 2
    assert payload["size"] == 3  # p, q, p & q
    assert payload["constants"] == []


def _write_canned(tmp_path):
    lines = [f"F{i}: {CANNED_FORMULAS[i]}" for i in range(1, 13)]
    path = tmp_path / "twelve.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_derive_constants_end_to_end(tmp_path, capsys):
    path = _write_canned(tmp_path)
    code, out, _ = invoke(capsys, "derive-constants", "--sigma", str(path))
    assert code == 0
    payload = json.loads(out)["constants"]
    assert sorted(payload) == ["0", "1", "r", "s"]
    for token, entry in payload.items():
        assert entry["constant"] == token
        assert entry["table"] == "1:" + token * 4
        assert entry["trace"]
        # the reported formula really realizes the constant table
        assert truth_table(parse(entry["formula"]), ("p",)).entries == tuple(
            [FuncTable.from_text(entry["table"]).entries[0]] * 4
        )


def test_derive_constants_projection_is_negative(tmp_path, capsys):
    lines = [f"F{i}: {CANNED_FORMULAS[i]}" for i in range(1, 13)]
    lines[4] = "F5: p"
    path = tmp_path / "twelve.txt"
    path.write_text("\n".join(lines) + "\n")
    code, _, err = invoke(capsys, "derive-constants", "--sigma", str(path))
    assert code == 1
    assert "F5 preserves R5" in err


def test_derive_constants_missing_member(tmp_path, capsys):
    path = tmp_path / "eleven.txt"
    path.write_text("\n".join(f"F{i}: # p" for i in range(1, 12)) + "\n")
    code, _, err = invoke(capsys, "derive-constants", "--sigma", str(path))
    assert code == 2
    assert "F12" in err


def test_derive_constants_duplicate_member(tmp_path, capsys):
    path = tmp_path / "dup.txt"
    path.write_text("F1: # p\nF1: ~ p\n")
    code, _, err = invoke(capsys, "derive-constants", "--sigma", str(path))
    assert code == 2
    assert "duplicate" in err


# ---------------------------------------------------------------------------
# selftest and dispatch
# ---------------------------------------------------------------------------


def test_selftest_passes(capsys, monkeypatch):
    monkeypatch.setenv("MAGARI4_SEED", "7")
    code, out, _ = invoke(capsys, "selftest")
    assert code == 0
    assert "checks passed" in out
    assert "FAIL" not in out
    assert "(seed 7)" in out


def test_selftest_json(capsys):
    code, out, _ = invoke(capsys, "selftest", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert all(check["passed"] for check in payload["checks"])


def test_unknown_command_is_usage_error(capsys):
    assert run(["frobnicate"]) == 2


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0


def test_console_entry_point():
    import shutil
    import subprocess

    exe = shutil.which("magari4")
    if exe is None:
        pytest.skip("package not installed with console scripts")
    proc = subprocess.run(
        [exe, "eval", "p -> p", "--env", "p=s"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout == "1\n"


def test_derivation_output_identical_across_processes(tmp_path):
    # object identities differ between interpreter runs; the payload must not
    import subprocess
    import sys

    path = _write_canned(tmp_path)
    outs = [
        subprocess.run(
            [sys.executable, "-m", "magari4.cli", "derive-constants",
             "--sigma", str(path)],
            capture_output=True,
            text=True,
        ).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["constants"]
