"""Abstract syntax: types, terms, access words and finite multisets."""

from __future__ import annotations

import functools
import itertools
import re
from collections import Counter
from dataclasses import dataclass, fields, replace
from typing import Any, Callable, Hashable, Iterable, Iterator, Optional, Union

# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Ground:
    """``D^d Nat``."""

    d: int = 0


@dataclass(frozen=True)
class Arrow:
    dom: "Ty"
    cod: "Ty"


Ty = Union[Ground, Arrow]
NAT = Ground(0)


def d_type(a: Ty, times: int = 1) -> Ty:
    """Apply the ``D`` type operator ``times`` times."""
    for _ in range(times):
        if isinstance(a, Ground):
            a = Ground(a.d + 1)
        else:
            a = Arrow(a.dom, d_type(a.cod))
    return a


def decompose_type(a: Ty) -> tuple[int, Ty]:
    """Split ``a`` as ``D^d F`` with ``F`` sharp."""
    if isinstance(a, Ground):
        return a.d, NAT
    d, core = decompose_type(a.cod)
    return d, Arrow(a.dom, core)


def undiff_type(a: Ty, times: int = 1) -> Ty:
    """Inverse of :func:`d_type`; raises ``ValueError`` when ``a`` is too shallow."""
    d, core = decompose_type(a)
    if d < times:
        raise ValueError(f"type has depth {d} < {times}")
    return d_type(core, d - times)


def is_sharp(a: Ty) -> bool:
    return decompose_type(a)[0] == 0


def type_depth(a: Ty) -> int:
    return decompose_type(a)[0]


def ty_str(a: Ty) -> str:
    if isinstance(a, Ground):
        return "D " * a.d + "Nat"
    dom = ty_str(a.dom)
    if isinstance(a.dom, Arrow):
        dom = f"({dom})"
    return f"{dom} -> {ty_str(a.cod)}"


# ---------------------------------------------------------------------------
# Terms
#
# Every node lists its subterm fields in ``_kids`` (left to right); these
# indices are the node addresses used by redex paths.


class Term:
    __slots__ = ()
    _kids: tuple[str, ...] = ()

    def children(self) -> tuple["Term", ...]:
        return tuple(getattr(self, k) for k in self._kids)

    def with_children(self, kids: Iterable["Term"]) -> "Term":
        return replace(self, **dict(zip(self._kids, kids)))

    def __str__(self) -> str:  # pragma: no cover - convenience
        from .printer import show

        return show(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Abs(Term):
    name: str
    ann: Ty
    body: Term
    _kids = ("body",)


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term
    _kids = ("fun", "arg")


@dataclass(frozen=True)
class Fix(Term):
    body: Term
    _kids = ("body",)


@dataclass(frozen=True)
class Num(Term):
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("numerals are natural numbers")


@dataclass(frozen=True)
class Succ(Term):
    d: int
    arg: Term
    _kids = ("arg",)


@dataclass(frozen=True)
class Pred(Term):
    d: int
    arg: Term
    _kids = ("arg",)


@dataclass(frozen=True)
class If(Term):
    """``if^d(cond, then, orelse)``; ``ann`` is the branch type (optional in source)."""

    d: int
    cond: Term
    then: Term
    orelse: Term
    ann: Optional[Ty] = None
    _kids = ("cond", "then", "orelse")


@dataclass(frozen=True)
class Let(Term):
    """``let^d(name = bound) body``; ``ann`` is the body type."""

    d: int
    name: str
    bound: Term
    body: Term
    ann: Optional[Ty] = None
    _kids = ("bound", "body")


@dataclass(frozen=True)
class DOp(Term):
    arg: Term
    _kids = ("arg",)


@dataclass(frozen=True)
class Proj(Term):
    i: int
    d: int
    arg: Term
    _kids = ("arg",)


@dataclass(frozen=True)
class Inj(Term):
    i: int
    d: int
    arg: Term
    _kids = ("arg",)


@dataclass(frozen=True)
class SumOp(Term):
    d: int
    arg: Term
    _kids = ("arg",)


@dataclass(frozen=True)
class Flip(Term):
    d: int
    l: int
    arg: Term
    _kids = ("arg",)


@dataclass(frozen=True)
class Zero(Term):
    ann: Ty


@dataclass(frozen=True)
class Plus(Term):
    left: Term
    right: Term
    _kids = ("left", "right")


@dataclass(frozen=True)
class Hole(Term):
    """The hole of a one-hole context; never appears in programs."""


UNARY_DEPTH_OPS = (Succ, Pred, Proj, Inj, SumOp, Flip)


# Terms get large during machine runs and are hashed often (sets of
# commands, memo tables), so each node caches its hash.


@functools.cache
def _field_names(cls: type) -> tuple[str, ...]:
    return tuple(f.name for f in fields(cls))


def _cached_hash(self: Term) -> int:
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in _field_names(type(self))))
        object.__setattr__(self, "_hash", h)
    return h


for _cls in (Var, Abs, App, Fix, Num, Succ, Pred, If, Let, DOp, Proj, Inj, SumOp, Flip, Zero, Plus, Hole):
    _cls.__hash__ = _cached_hash  # type: ignore[method-assign]


def binder_of(t: Term, kid: int) -> Optional[str]:
    """Name bound by ``t`` in its ``kid``-th subterm, if any."""
    if isinstance(t, Abs):
        return t.name
    if isinstance(t, Let) and kid == 1:
        return t.name
    return None


def is_simplicit(t: Term) -> bool:
    if isinstance(t, (Zero, Plus)):
        return False
    return all(is_simplicit(c) for c in t.children())


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in t.children())


def subterm(t: Term, path: Iterable[int]) -> Term:
    for k in path:
        t = t.children()[k]
    return t


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    kids = list(t.children())
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return t.with_children(kids)


def plus_all(terms: list[Term], ann: Ty) -> Term:
    """Right-nested sum of ``terms``; the empty sum is ``Zero(ann)``."""
    if not terms:
        return Zero(ann)
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = Plus(t, acc)
    return acc


def summands(t: Term) -> list[Term]:
    """Flatten nested sums and drop zeros."""
    if isinstance(t, Plus):
        return summands(t.left) + summands(t.right)
    if isinstance(t, Zero):
        return []
    return [t]


# ---------------------------------------------------------------------------
# Variables and substitution


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.name}
    if isinstance(t, Let):
        return free_vars(t.bound) | (free_vars(t.body) - {t.name})
    out: frozenset[str] = frozenset()
    for c in t.children():
        out |= free_vars(c)
    return out


def all_names(t: Term) -> set[str]:
    out: set[str] = set()

    def go(u: Term) -> None:
        if isinstance(u, Var):
            out.add(u.name)
        elif isinstance(u, (Abs, Let)):
            out.add(u.name)
        for c in u.children():
            go(c)

    go(t)
    return out


_TRAILING = re.compile(r"^(.*?)(\d*)$")


def fresh(base: str, avoid: Iterable[str]) -> str:
    """Smallest ``root<k>`` (k >= 1) not in ``avoid``, where root drops trailing digits."""
    avoid = set(avoid)
    root = _TRAILING.match(base).group(1) or "v"  # type: ignore[union-attr]
    for k in itertools.count(1):
        cand = f"{root}{k}"
        if cand not in avoid:
            return cand
    raise AssertionError  # pragma: no cover


def rename_bound(t: Term, old: str, new: str) -> Term:
    """Rename free occurrences of ``old`` to the (fresh) name ``new``."""
    return subst(t, Var(new), old)


def subst(m: Term, n: Term, x: str) -> Term:
    """Capture-avoiding ``m[n/x]``."""
    fv_n = free_vars(n)
    return _subst(m, n, x, fv_n)


def _subst(m: Term, n: Term, x: str, fv_n: frozenset[str]) -> Term:
    if isinstance(m, Var):
        return n if m.name == x else m
    if not m._kids:
        return m
    if isinstance(m, Abs):
        if m.name == x:
            return m
        name, body = m.name, m.body
        if name in fv_n and x in free_vars(body):
            name = fresh(name, fv_n | all_names(body) | {x})
            body = _subst(body, Var(name), m.name, frozenset((name,)))
        return Abs(name, m.ann, _subst(body, n, x, fv_n))
    if isinstance(m, Let):
        bound = _subst(m.bound, n, x, fv_n)
        if m.name == x:
            return replace(m, bound=bound)
        name, body = m.name, m.body
        if name in fv_n and x in free_vars(body):
            name = fresh(name, fv_n | all_names(body) | {x})
            body = _subst(body, Var(name), m.name, frozenset((name,)))
        return replace(m, name=name, bound=bound, body=_subst(body, n, x, fv_n))
    return m.with_children(_subst(c, n, x, fv_n) for c in m.children())


def nameless(t: Term, env: tuple[str, ...] = ()) -> Hashable:
    """A hashable key identifying ``t`` up to renaming of bound variables."""
    if isinstance(t, Var):
        for k, name in enumerate(reversed(env)):
            if name == t.name:
                return ("#", k)
        return ("free", t.name)
    if isinstance(t, Abs):
        return ("Abs", t.ann, nameless(t.body, env + (t.name,)))
    if isinstance(t, Let):
        return ("Let", t.d, t.ann, nameless(t.bound, env), nameless(t.body, env + (t.name,)))
    head: list[Any] = [type(t).__name__]
    head.extend(getattr(t, f) for f in label_fields(type(t)))
    head.extend(nameless(c, env) for c in t.children())
    return tuple(head)


@functools.cache
def label_fields(cls: type) -> tuple[str, ...]:
    """Names of the non-subterm fields of a term class."""
    return tuple(f.name for f in fields(cls) if f.name not in cls._kids)


def alpha_eq(m: Term, n: Term) -> bool:
    return nameless(m) == nameless(n)


def map_vars(t: Term, f: Callable[[str], Optional[Term]]) -> Term:
    """Replace free variables ``y`` by ``f(y)`` when not ``None`` (no capture check)."""

    def go(u: Term, bound: frozenset[str]) -> Term:
        if isinstance(u, Var):
            if u.name in bound:
                return u
            r = f(u.name)
            return u if r is None else r
        if not u._kids:
            return u
        kids = []
        for k, c in enumerate(u.children()):
            b = binder_of(u, k)
            kids.append(go(c, bound | {b} if b else bound))
        return u.with_children(kids)

    return go(t, frozenset())


# ---------------------------------------------------------------------------
# Words

Word = tuple[int, ...]


def rcycle(w: tuple) -> tuple:
    """Move the last letter to the front."""
    return w[-1:] + w[:-1] if w else w


def lcycle(w: tuple) -> tuple:
    """Move the first letter to the back."""
    return w[1:] + w[:1] if w else w


def rev(w: tuple) -> tuple:
    return tuple(reversed(w))


def word_str(w: Iterable[Any]) -> str:
    w = tuple(w)
    return "".join(str(x) for x in w) if w else "ε"


# ---------------------------------------------------------------------------
# Multisets


class Multiset:
    """Immutable finite multiset; equality and hashing are structural."""

    __slots__ = ("_c", "_hash")

    def __init__(self, items: Iterable[Any] = ()) -> None:
        c = Counter(items)
        self._c = {k: v for k, v in c.items() if v > 0}
        self._hash: Optional[int] = None

    @classmethod
    def from_counts(cls, counts: dict) -> "Multiset":
        m = cls()
        m._c = {k: v for k, v in counts.items() if v > 0}
        return m

    def __iter__(self) -> Iterator[Any]:
        for k, v in self._c.items():
            for _ in range(v):
                yield k

    def __len__(self) -> int:
        return sum(self._c.values())

    def __contains__(self, x: Any) -> bool:
        return x in self._c

    def count(self, x: Any) -> int:
        return self._c.get(x, 0)

    def support(self) -> list[Any]:
        return list(self._c)

    def items(self) -> list[tuple[Any, int]]:
        return list(self._c.items())

    def __add__(self, other: "Multiset") -> "Multiset":
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return Multiset.from_counts(c)

    def remove(self, x: Any) -> "Multiset":
        if x not in self._c:
            raise KeyError(x)
        c = dict(self._c)
        c[x] -= 1
        return Multiset.from_counts(c)

    def add(self, x: Any) -> "Multiset":
        return self + Multiset((x,))

    def map(self, f: Callable[[Any], Any]) -> "Multiset":
        return Multiset(f(x) for x in self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Multiset) and self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def sorted(self, key: Callable[[Any], Any] = repr) -> list[Any]:
        return sorted(self, key=key)

    def __repr__(self) -> str:
        return "Multiset([" + ", ".join(repr(x) for x in self.sorted()) + "])"
