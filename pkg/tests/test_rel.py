import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdpcf.machine import ArgFrame, Command, PredFrame, SuccFrame, run_term
from cdpcf.parser import parse
from cdpcf.rel import (
    PROVED,
    UNKNOWN,
    APoint,
    GPoint,
    icheck,
    icheck_stack,
    icheck_state,
    interp_ground,
    parse_point,
    point_act,
    point_decompose,
    point_str,
    sdiff_expand,
    sdiff_split,
)
from cdpcf.rel.search import PointTypeMismatch
from cdpcf.rewriting import normalize
from cdpcf.syntax import NAT, Abs, Arrow, Fix, If, Multiset, Num, Var, summands

from conftest import corpus_programs
from strategies import words

SUCC = Abs("x", NAT, parse("succ[0] x"))
NAT_FN = Arrow(NAT, NAT)


def g(nu, word=()):
    return GPoint(tuple(word), nu)


def test_point_act_examples():
    p = APoint(Multiset([g(1)]), g(3))
    assert point_act((), p) == p
    assert point_act((0,), g(7)) == g(7, (0,))
    assert point_act((1,), p) == APoint(Multiset([g(1)]), g(3, (1,)))


ground_points = st.builds(GPoint, words, st.integers(0, 9))
points = st.recursive(
    ground_points,
    lambda sub: st.builds(APoint, st.lists(sub, max_size=3).map(Multiset), sub),
    max_leaves=5,
)


@given(points, words)
def test_point_decompose_round_trip(p, delta):
    d, core = point_decompose(p)
    assert point_act(d, core) == p
    d2, core2 = point_decompose(point_act(delta, core))
    assert (d2, core2) == (delta, core)


@given(points)
def test_point_text_round_trip(p):
    assert parse_point(point_str(p)) == p


def test_point_text_forms():
    assert parse_point("([<0>·3], <1>·(ε·5))") == APoint(Multiset([g(3, (0,))]), g(5, (1,)))
    assert point_str(APoint(Multiset([g(3, (0,))]), g(5, (1,)))) == "([<0>·3], <1>·5)"


def test_sdiff_expand_examples():
    a, b = g(1), g(2)
    assert sdiff_expand(0, Multiset([a, b])) == {Multiset([g(1, (0,)), g(2, (0,))])}
    assert sdiff_expand(1, Multiset([a])) == {Multiset([g(1, (1,))])}
    assert sdiff_expand(1, Multiset()) == set()


@given(st.lists(st.integers(0, 3), max_size=5))
def test_sdiff_expand_cardinality(nus):
    m = Multiset(g(n) for n in nus)
    assert len(sdiff_expand(0, m)) == 1
    assert len(sdiff_expand(1, m)) == len(m.support())
    for tagged in sdiff_expand(1, m):
        ones = [p for p in tagged if p.word == (1,)]
        assert len(ones) == 1 and len(tagged) == len(m)


def test_sdiff_split_examples():
    m1, m2 = Multiset([g(1)]), Multiset([g(2)])
    m = m1 + m2
    assert len(sdiff_split(0, m, [m1, m2])) == 1
    bits = {b for b, _ in sdiff_split(1, m, [m1, m2])}
    assert bits == {(1, 0), (0, 1)}
    assert {p for _, (p,) in sdiff_split(1, m, [m])} == sdiff_expand(1, m)
    with pytest.raises(ValueError):
        sdiff_split(0, m, [m1])


def test_icheck_successor():
    assert icheck({}, SUCC, APoint(Multiset([g(3)]), g(4)), fuel=50) is PROVED
    assert icheck({}, SUCC, APoint(Multiset([g(3)]), g(5)), fuel=50) is UNKNOWN
    # a variable occurrence consumes exactly one point
    assert icheck({}, SUCC, APoint(Multiset([g(3), g(3)]), g(4)), fuel=200) is UNKNOWN


def test_icheck_linear_application():
    phi = {"f": (Multiset([APoint(Multiset([g(3)]), g(5))]), NAT_FN), "x": (Multiset([g(3)]), NAT)}
    assert icheck(phi, parse("lin f x"), g(5), fuel=200) is PROVED
    assert icheck(phi, parse("lin f x"), g(4), fuel=200) is UNKNOWN


def test_icheck_type_mismatch():
    with pytest.raises(PointTypeMismatch):
        icheck({}, Num(3), g(3, (0,)))


def test_icheck_stack_examples():
    assert icheck_stack((), g(5), NAT, 5) is PROVED
    assert icheck_stack((), g(5), NAT, 4) is UNKNOWN
    assert icheck_stack((SuccFrame(),), g(3), NAT, 4) is PROVED
    assert icheck_stack((PredFrame(),), g(0), NAT, 1) is UNKNOWN
    assert icheck_stack((PredFrame(),), g(0), NAT, 0) is PROVED
    f = APoint(Multiset([g(2)]), g(2))
    assert icheck_stack((ArgFrame(Num(2)),), f, NAT_FN, 2) is PROVED


def test_interp_examples():
    assert interp_ground(Num(7), 9) == {7}
    assert interp_ground(If(0, Num(0), Num(1), Num(2), NAT), 3) == {1}
    for fuel in (10, 100, 500):
        assert interp_ground(Fix(Abs("x", NAT, Var("x"))), 3, fuel=fuel) == set()


def test_icheck_state_matches_run():
    c = Command((), parse(r"(\x:Nat. succ[0] x) 3"), ())
    assert icheck_state(c, 4) is PROVED
    assert icheck_state(c, 3) is UNKNOWN


SMALL = [p for p in corpus_programs() if p[0] in {"twice", "lin_succ", "depth_one", "flip", "sum_split", "lin_else"}]


@pytest.mark.parametrize("name, term, expect", SMALL, ids=[p[0] for p in SMALL])
def test_semantics_stable_under_reduction(name, term, expect):
    before = interp_ground(term, 8)
    mid, _ = normalize(term, 3)
    # a reduct may be a sum; only single-summand reducts are checked directly
    parts = summands(mid)
    if len(parts) == 1:
        assert interp_ground(parts[0], 8) == before
    assert len(before) <= 1


@pytest.mark.parametrize("name, term, expect", SMALL, ids=[p[0] for p in SMALL])
def test_adequacy_against_machine(name, term, expect):
    r = run_term(term)
    vals = set(r.results.support())
    assert interp_ground(term, 8) == vals
    for nu in vals:
        assert icheck_state(Command((), term, ()), nu) is PROVED
