import pytest
from hypothesis import given

from cdpcf.parser import ParseError, parse, parse_program, parse_type
from cdpcf.printer import show
from cdpcf.syntax import (
    NAT,
    Abs,
    App,
    Arrow,
    DOp,
    Ground,
    If,
    Inj,
    Let,
    Num,
    Plus,
    Proj,
    Succ,
    Var,
    Zero,
    alpha_eq,
)

from conftest import corpus_files
from strategies import closed_terms, open_terms


def test_parse_examples():
    assert parse(r"\x:Nat. succ[0] x") == Abs("x", NAT, Succ(0, Var("x")))
    assert parse("proj[1,0](D f)") == Proj(1, 0, DOp(Var("f")))


def test_parse_iterator_body():
    t = parse("let[0](y = x) if[0](y, 0, succ[0](F (lin f y)))")
    assert isinstance(t, Let) and t.name == "y" and t.bound == Var("x")
    body = t.body
    assert isinstance(body, If) and body.cond == Var("y")
    lin = App(Proj(1, 0, DOp(Var("f"))), Inj(1, 0, Var("y")))
    assert body.orelse == Succ(0, App(Var("F"), lin))


def test_parse_types():
    assert parse_type("Nat -> Nat -> Nat") == Arrow(NAT, Arrow(NAT, NAT))
    assert parse_type("(Nat -> Nat) -> D Nat") == Arrow(Arrow(NAT, NAT), Ground(1))
    assert parse_type("D (Nat -> Nat)") == Arrow(NAT, Ground(1))
    assert parse_type("D D Nat") == Ground(2)


def test_parse_sums_and_zero():
    assert parse("1 + 2 + zero:Nat") == Plus(Plus(Num(1), Num(2)), Zero(NAT))


def test_annotations_kept():
    t = parse("if[0](0, 1, 2):Nat")
    assert t.ann == NAT
    assert parse("if[0](0, 1, 2)").ann is None


def test_defs_are_inlined():
    t = parse(r"def a = 1; def b = succ[0] a; b")
    assert t == Succ(0, Num(1))


def test_expect_annotation():
    src = "# expect: 5\nproj[0,0](inj[0,0] 5)\n"
    assert parse_program(src).expected == "5"
    assert parse_program("3").expected is None


@pytest.mark.parametrize(
    "src, line, col",
    [
        ("succ[0] (", 1, 10),
        ("\\x Nat. x", 1, 4),
        ("proj[2,0] x", 1, 6),
        ("1\n  + $", 2, 5),
    ],
)
def test_errors_carry_position(src, line, col):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert (info.value.line, info.value.col) == (line, col)


@given(closed_terms())
def test_round_trip_closed(case):
    m, _ = case
    assert alpha_eq(parse(show(m)), m)
    assert show(parse(show(m))) == show(m)


@given(open_terms())
def test_round_trip_open(case):
    _, _, m, _ = case
    assert parse(show(m)) == m


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.rsplit("/", 1)[-1])
def test_corpus_round_trip(path):
    with open(path, encoding="utf-8") as fh:
        m = parse(fh.read())
    assert parse(show(m)) == m
