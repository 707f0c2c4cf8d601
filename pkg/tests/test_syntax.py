from hypothesis import given
from hypothesis import strategies as st

from cdpcf.syntax import (
    NAT,
    Abs,
    App,
    Arrow,
    Flip,
    Ground,
    Multiset,
    Num,
    Plus,
    Var,
    Zero,
    alpha_eq,
    d_type,
    decompose_type,
    free_vars,
    is_sharp,
    is_simplicit,
    lcycle,
    rcycle,
    rev,
    subst,
    undiff_type,
)

from strategies import closed_terms, open_terms, types, words


def test_d_type_examples():
    assert d_type(Ground(0)) == Ground(1)
    assert d_type(Arrow(NAT, NAT)) == Arrow(NAT, Ground(1))
    assert d_type(d_type(Ground(0))) == Ground(2)
    assert d_type(NAT, 2) == Ground(2)


def test_decompose_examples():
    assert decompose_type(Ground(3)) == (3, NAT)
    assert decompose_type(Arrow(NAT, Ground(2))) == (2, Arrow(NAT, NAT))
    assert decompose_type(Arrow(Ground(1), NAT)) == (0, Arrow(Ground(1), NAT))


@given(types, st.integers(0, 4))
def test_decompose_round_trip(a, k):
    d, core = decompose_type(d_type(a, k))
    assert is_sharp(core)
    assert d_type(core, d) == d_type(a, k)
    assert d == decompose_type(a)[0] + k
    assert undiff_type(d_type(a, k), k) == a


def test_subst_examples():
    assert subst(Var("x"), Num(3), "x") == Num(3)
    assert subst(App(Var("x"), Var("x")), Num(2), "x") == App(Num(2), Num(2))
    r = subst(Abs("y", NAT, Var("x")), Var("y"), "x")
    assert isinstance(r, Abs) and r.name != "y"
    assert r.body == Var("y")


def test_subst_respects_shadowing():
    t = Abs("x", NAT, Var("x"))
    assert subst(t, Num(1), "x") == t


def test_alpha_eq_examples():
    assert alpha_eq(Abs("x", NAT, Var("x")), Abs("y", NAT, Var("y")))
    assert not alpha_eq(Abs("x", NAT, Var("x")), Abs("x", NAT, Num(0)))
    assert not alpha_eq(Flip(0, 0, Var("m")), Flip(0, 1, Var("m")))
    assert not alpha_eq(Abs("x", NAT, Var("x")), Abs("x", Ground(1), Var("x")))
    assert not alpha_eq(Var("x"), Var("y"))


@given(open_terms())
def test_subst_identity(case):
    x, _, m, _ = case
    assert alpha_eq(subst(m, Var(x), x), m)


@given(open_terms())
def test_subst_removes_variable(case):
    x, _, m, _ = case
    assert x not in free_vars(subst(m, Num(0), x))


@given(closed_terms())
def test_generated_terms_are_simplicit(case):
    m, _ = case
    assert is_simplicit(m)
    assert not is_simplicit(Plus(m, m))
    assert not is_simplicit(Zero(NAT))


@given(words)
def test_word_cycles(w):
    assert lcycle(rcycle(w)) == w
    assert rcycle(lcycle(w)) == w
    assert rev(rev(w)) == w


@given(st.tuples(st.integers(0, 1), st.integers(0, 1)))
def test_cycles_agree_on_length_two(w):
    assert rcycle(w) == lcycle(w)


def test_rcycle_moves_last_letter_first():
    assert rcycle((0, 0, 1)) == (1, 0, 0)
    assert lcycle((1, 0, 0)) == (0, 0, 1)


def test_num_is_natural():
    try:
        Num(-1)
    except ValueError:
        pass
    else:
        raise AssertionError("negative numeral accepted")


small = st.lists(st.integers(0, 3), max_size=5).map(Multiset)


@given(small, small, small)
def test_multiset_monoid(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + Multiset() == a
    assert len(a + b) == len(a) + len(b)


def test_multiset_structural_equality():
    assert Multiset([1, 2, 1]) == Multiset([2, 1, 1])
    assert Multiset([1]) != Multiset([1, 1])
    assert hash(Multiset([3, 4])) == hash(Multiset([4, 3]))
    assert Multiset([1, 1, 2]).count(1) == 2
    assert Multiset([1, 2]).remove(1) == Multiset([2])
