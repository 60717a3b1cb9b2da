import json
import subprocess
import sys
from pathlib import Path

import pytest

from wob import corpus
from wob.cli import main
from wob.logic import save_structure


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_ord_cmp(capsys):
    code, out = run_cli(["ord", "cmp", "w^2*3+w", "w^2*3+5"], capsys)
    assert code == 0
    assert out == "greater\n"


def test_ord_add_mul_pow_fs(capsys):
    assert run_cli(["ord", "add", "1", "w"], capsys) == (0, "w\n")
    assert run_cli(["ord", "add", "w", "1"], capsys) == (0, "w+1\n")
    assert run_cli(["ord", "mul", "w+1", "w"], capsys) == (0, "w^2\n")
    assert run_cli(["ord", "pow", "w"], capsys) == (0, "w^w\n")
    assert run_cli(["ord", "fs", "w^w", "2"], capsys) == (0, "w^3\n")


def test_ord_malformed(capsys):
    code, _ = run_cli(["ord", "cmp", "wot", "1"], capsys)
    assert code == 4


def test_fgh_eval(capsys):
    code, out = run_cli(["fgh", "eval", "--system", "std", "--alpha", "w", "--x", "2"], capsys)
    assert code == 0
    assert out == "2048\n"


def test_fgh_eval_exceeded(capsys):
    code, out = run_cli(
        ["fgh", "eval", "--alpha", "w^2", "--x", "9", "--max-steps", "1000"], capsys
    )
    assert code == 3
    assert out.startswith("exceeded")


def test_fgh_compare_table(capsys):
    code, out = run_cli(
        ["fgh", "compare", "--alpha", "2", "--beta", "3", "--xs", "2,3"], capsys
    )
    assert code == 0
    assert "x=2: lt" in out and "x=3: lt" in out
    assert "asymptotic" in out  # the disclaimer is part of the output


def test_query_and_recognize(tmp_path, capsys):
    p = corpus.omega_unary()
    manifest = save_structure(p.structure, tmp_path)
    code, out = run_cli(["query", manifest, "(exists x (forall y (not (rel < y x))))"], capsys)
    assert (code, out) == (0, "true\n")
    code, out = run_cli(["query", manifest, "(exists x (forall y (not (rel < x y))))"], capsys)
    assert (code, out) == (1, "false\n")
    code, out = run_cli(["recognize", manifest], capsys)
    assert (code, out) == (0, "well-order w\n")


def test_recognize_negative_exit(tmp_path, capsys):
    p = corpus.integer_line()
    manifest = save_structure(p.structure, tmp_path)
    code, out = run_cli(["recognize", manifest], capsys)
    assert code == 1
    assert out.startswith("not-well-order")


def test_recognize_trace_dumps_levels(tmp_path, capsys):
    p = corpus.omega_times_2()
    manifest = save_structure(p.structure, tmp_path)
    code, out = run_cli(["recognize", manifest, "--trace"], capsys)
    assert code == 0
    assert "; condensation level 0" in out
    assert "; condensation level 1" in out
    assert "automaton level0_order" in out
    assert out.rstrip().endswith("well-order w*2")


def test_recognize_json(tmp_path, capsys):
    p = corpus.omega_times_2()
    manifest = save_structure(p.structure, tmp_path)
    code, out = run_cli(["recognize", manifest, "--json"], capsys)
    assert code == 0
    assert json.loads(out) == {"verdict": "well-order", "cnf": "w*2"}


def test_query_compiled_out(tmp_path, capsys):
    p = corpus.omega_unary()
    manifest = save_structure(p.structure, tmp_path)
    out_file = tmp_path / "preds.aut"
    code, _ = run_cli(["query", manifest, "(exists y (rel < y x))", "--out", str(out_file)], capsys)
    assert code == 0
    text = out_file.read_text(encoding="utf-8")
    assert text.startswith("automaton query")


def test_pathology_kreisel_compare(capsys):
    code, out = run_cli(
        ["pathology", "kreisel", "--pi0", "builtin:except=2", "compare", "3", "5"], capsys
    )
    assert (code, out) == (0, "greater\n")


def test_pathology_kreisel_descend(capsys):
    code, out = run_cli(
        ["pathology", "kreisel", "--pi0", "builtin:except=2", "descend", "10", "5"], capsys
    )
    assert (code, out) == (0, "10 11 12 13 14\n")
    code, out = run_cli(
        ["pathology", "kreisel", "--pi0", "builtin:true", "descend", "10", "5"], capsys
    )
    assert (code, out) == (1, "none\n")


def test_pathology_kreisel_to_structure(tmp_path, capsys):
    code, out = run_cli(
        ["pathology", "kreisel", "--pi0", "builtin:true", "to-structure", str(tmp_path)], capsys
    )
    assert code == 0
    manifest = out.split()[-1]
    code, out = run_cli(["recognize", manifest], capsys)
    assert (code, out) == (0, "well-order w\n")


def test_pathology_omega1(capsys):
    code, out = run_cli(["pathology", "omega1", "--f", "2^n", "fgh", "--x", "3"], capsys)
    assert code == 0
    assert ">= 8" in out


def test_tm_check_reversible(capsys):
    code, out = run_cli(["tm", "check-reversible", "builtin:comparator"], capsys)
    assert (code, out) == (0, "reversible\n")


def test_tm_wf_check(capsys):
    code, out = run_cli(
        ["tm", "wf-check", "builtin:comparator", "--word-len", "2", "--run-len", "1"], capsys
    )
    assert code == 0
    assert out.startswith("wf-check ok")


def test_hopda_run(capsys):
    assert run_cli(["hopda", "run", "builtin:anbn", "aabb"], capsys)[0] == 0
    assert run_cli(["hopda", "run", "builtin:anbn", "aab"], capsys)[0] == 1


def test_hopda_graph_and_dot(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    code, out = run_cli(
        ["hopda", "contract", "builtin:omega2", "--budget", "50", "--dot", str(dot)], capsys
    )
    assert code == 0
    assert dot.read_text(encoding="utf-8").startswith("digraph")


def test_unknown_subcommand_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_saved_automata_byte_identical_across_hash_seeds(tmp_path):
    # state numbering must not depend on the per-process string hash seed
    p = corpus.omega_times_2()
    manifest = save_structure(p.structure, tmp_path)
    env_base = {"PYTHONPATH": str(Path(__file__).resolve().parent.parent / "src"),
                "PATH": "/usr/bin:/bin"}
    outputs = []
    for seed in ("1", "31337"):
        out_file = tmp_path / f"q_{seed}.aut"
        got = subprocess.run(
            [sys.executable, "-m", "wob.cli", "query", manifest,
             "(exists y (rel < y x))", "--out", str(out_file)],
            capture_output=True, env={**env_base, "PYTHONHASHSEED": seed},
        )
        assert got.returncode == 0, got.stderr
        outputs.append(out_file.read_bytes())
    assert outputs[0] == outputs[1]


def test_cli_entrypoint_subprocess(tmp_path):
    env = {"PYTHONPATH": str(Path(__file__).resolve().parent.parent / "src")}
    got = subprocess.run(
        [sys.executable, "-m", "wob.cli", "ord", "cmp", "w", "5"],
        capture_output=True, text=True, env={**env, "PATH": "/usr/bin:/bin"},
    )
    assert got.returncode == 0
    assert got.stdout == "greater\n"
