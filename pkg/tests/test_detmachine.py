import pytest

from cdpcf.checks import dwords_simulation
from cdpcf.detmachine import (
    Cell,
    DetNext,
    DetState,
    DetTerminal,
    IllFormed,
    ShapeMismatch,
    Stuck,
    ZeroHalt,
    det_run,
    det_step,
    dwords_expand,
    iter_det_states,
    nwcell,
    well_formed,
)
from cdpcf.machine import Command, IfFrame, run_term
from cdpcf.parser import parse
from cdpcf.syntax import Inj, Num, SumOp, Var

from conftest import corpus_programs

W0, W1 = Cell(0), Cell(1)
M = Var("m")


def test_sum_on_one_mints_cell():
    r = det_step(DetState((1,), 0, SumOp(0, M)))
    assert r == DetNext(DetState((W0, W0), 1, M), "sum1-cell")


def test_sum_on_zero_and_cell():
    assert det_step(DetState((0,), 0, SumOp(0, M))).state.access == (0, 0)
    r = det_step(DetState((W0,), 1, SumOp(0, M)))
    assert r.state == DetState((W0, W0), 1, M)


def test_inj1_on_cell_zeroes_the_rest():
    r = det_step(DetState((W0, W0), 1, Inj(1, 0, Inj(0, 0, Num(5)))))
    assert r.state == DetState((0,), 1, Inj(0, 0, Num(5)))


def test_inj0_on_cell():
    r = det_step(DetState((W0, W0), 1, Inj(0, 0, M)))
    assert r.state == DetState((W0,), 1, M)
    assert isinstance(det_step(DetState((W0,), 1, Inj(0, 0, M))), Stuck)


def test_inj_mismatch_literal():
    assert isinstance(det_step(DetState((1,), 0, Inj(0, 0, M))), ZeroHalt)


def test_ill_formed_counter():
    g = DetState((W1,), 1, M)
    assert not well_formed(g)
    with pytest.raises(IllFormed):
        det_step(g)


def test_det_run_examples():
    r = det_run(parse(r"(\x:Nat. succ[0] x) 3"))
    assert (r.outcome, r.steps) == (4, 4)
    prog = parse("proj[1,0](sum[0](inj[1,0](inj[0,0] 5)))")
    r = det_run(prog)
    assert r.outcome == 5
    assert r.steps == run_term(prog).successful_steps()
    r = det_run(parse(r"fix (\x:Nat. x)"), fuel=50)
    assert r.outcome is None and r.exhausted


def test_dwords_examples():
    c = Command((0, 1), M, ())
    assert dwords_expand(DetState((0, 1), 0, M)) == {c}
    assert dwords_expand(DetState((W0, W0), 1, M)) == {Command((1, 0), M, ()), Command((0, 1), M, ())}
    g = DetState((W0,), 1, M, (IfFrame((W0,), Num(1), Num(2)),))
    got = dwords_expand(g)
    assert got == {
        Command((1,), M, (IfFrame((0,), Num(1), Num(2)),)),
        Command((0,), M, (IfFrame((1,), Num(1), Num(2)),)),
    }


def test_dwords_two_cells():
    assert len(dwords_expand(DetState((W0, W1, W0, W1), 2, M))) == 4


def test_nwcell_examples():
    assert nwcell(0, Command((1,), M), DetState((1,), 0, M)) == 0
    assert nwcell(0, Command((1,), M), DetState((W0,), 1, M)) == 1
    assert nwcell(0, Command((1, 0, 0), M), DetState((W0, 0, W0), 1, M)) == 1
    with pytest.raises(ShapeMismatch):
        nwcell(0, Command((1, 0), M), DetState((W0,), 1, M))


def test_dwords_expansion_has_one_per_cell():
    g = DetState((W0, 1, W0, W1, W1), 2, M)
    for c in dwords_expand(g):
        assert nwcell(0, c, g) == 1 and nwcell(1, c, g) == 1


@pytest.mark.parametrize("name, term, expect", corpus_programs(), ids=lambda v: v if isinstance(v, str) else "")
def test_dwords_simulation_and_counter_on_corpus(name, term, expect):
    if name == "random_walk":
        pytest.skip("exercised by the acceptance suite")
    for g, r in iter_det_states(term, fuel=500):
        assert well_formed(g)
        assert dwords_simulation(g, r), str(g)
        if isinstance(r, DetNext):
            grew = r.state.counter - g.counter
            assert grew == (1 if r.rule == "sum1-cell" else 0)
