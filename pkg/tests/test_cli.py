import io
import os
import subprocess
import sys

import pytest

from cdpcf.cli import EXIT_OK, EXIT_TIMEOUT, EXIT_TYPE, main

from conftest import CORPUS, corpus_programs


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def corpus(name):
    return os.path.join(CORPUS, name + ".cdpcf")


def test_run_iter_det():
    assert run("run", corpus("iter"), "--machine", "det") == (EXIT_OK, "result: 2\n")


def test_run_iter_multiset():
    assert run("run", corpus("iter"), "--machine", "multiset") == (EXIT_OK, "result: 2\n")


def test_run_zero_result():
    assert run("run", corpus("proj_inj_zero")) == (EXIT_OK, "result: zero\n")


def test_run_timeout():
    assert run("run", corpus("omega"), "--fuel", "100") == (EXIT_TIMEOUT, "timeout\n")


def test_typecheck_dt():
    assert run("typecheck", corpus("dt")) == (EXIT_OK, "(Nat -> D Nat) -> Nat -> D Nat\n")


def test_interp_omega():
    assert run("interp", corpus("omega"), "--fuel", "50") == (EXIT_OK, "{}\n")


def test_interp_value():
    assert run("interp", corpus("lin_succ"), "--nu-bound", "6") == (EXIT_OK, "{5}\n")


def test_check_sim():
    code, text = run("check-sim", corpus("iter"))
    assert code == EXIT_OK and text.endswith("agree\n")
    assert "steps=60" in text


def test_diff_prints_derivative(tmp_path):
    src = tmp_path / "f.cdpcf"
    src.write_text("succ[0] x\n")
    assert run("diff", str(src), "--var", "x") == (EXIT_OK, "succ[1] x\n")


def test_reduce_dt():
    code, text = run("reduce", corpus("dt"), "--steps", "10")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "steps: 1"
    assert "sum[0](D f)" in text


def test_type_error_exit(tmp_path):
    src = tmp_path / "bad.cdpcf"
    src.write_text("succ[0](\\x:Nat. x)\n")
    assert run("typecheck", str(src))[0] == EXIT_TYPE


def test_syntax_error_exit(tmp_path, capsys):
    src = tmp_path / "bad.cdpcf"
    src.write_text("succ[0] (\n")
    assert run("typecheck", str(src))[0] == EXIT_TYPE


def test_missing_file():
    assert run("typecheck", "/nonexistent/file.cdpcf")[0] == EXIT_TYPE


def test_trace_to_stdout():
    code, text = run("run", corpus("proj_inj"), "--machine", "multiset", "--trace", "-")
    lines = text.splitlines()
    assert code == EXIT_OK and lines[-1] == "result: 5"
    assert lines[0] == "0 | ε | Proj | proj | 0"


def test_det_trace_has_counter(tmp_path):
    dest = tmp_path / "trace.txt"
    code, _ = run("run", corpus("sum_split"), "--machine", "det", "--trace", str(dest))
    lines = dest.read_text().splitlines()
    assert code == EXIT_OK
    assert any("sum1-cell" in ln for ln in lines)
    assert all(len(ln.split(" | ")) == 6 for ln in lines)


@pytest.mark.parametrize("name, term, expect", corpus_programs(), ids=lambda v: v if isinstance(v, str) else "")
def test_corpus_expectations(name, term, expect):
    if name == "random_walk":
        pytest.skip("slow; covered by scripts/run_corpus.py")
    if expect == "diverge":
        assert run("run", corpus(name), "--fuel", "300")[0] == EXIT_TIMEOUT
        return
    for machine in ("det", "multiset"):
        assert run("run", corpus(name), "--machine", machine) == (EXIT_OK, f"result: {expect}\n")


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cdpcf.cli", "run", corpus("twice")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "result: 5\n"
