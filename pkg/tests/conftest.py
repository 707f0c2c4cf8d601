import glob
import os

import pytest

from cdpcf.deep import run_deep
from cdpcf.parser import load
from cdpcf.syntax import NAT
from cdpcf.typecheck import elaborate, infer

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(ROOT, "corpus")


@pytest.hookimpl(tryfirst=True)
def pytest_pyfunc_call(pyfuncitem):
    # Terms built by the machines get deep; run every test on a big stack.
    funcargs = pyfuncitem.funcargs
    args = {name: funcargs[name] for name in pyfuncitem._fixtureinfo.argnames}
    run_deep(pyfuncitem.obj, **args)
    return True


def corpus_files():
    return sorted(glob.glob(os.path.join(CORPUS, "*.cdpcf")))


def corpus_programs():
    """``(name, term, expect)`` for every closed ground program in the corpus."""
    def go():
        out = []
        for path in corpus_files():
            prog = load(path)
            term = elaborate(prog.term)
            if infer({}, term) == NAT:
                out.append((os.path.basename(path)[: -len(".cdpcf")], term, prog.expected))
        return out

    return run_deep(go)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(criterion: int, ok: bool, detail: str) -> None:
        lines[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(lines[criterion])

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
