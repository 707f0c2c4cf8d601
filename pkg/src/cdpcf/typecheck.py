"""Syntax-directed simple typing and multiset typing."""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping, Optional

from .syntax import (
    NAT,
    Abs,
    App,
    Arrow,
    DOp,
    Fix,
    Flip,
    Ground,
    Hole,
    If,
    Inj,
    Let,
    Multiset,
    Num,
    Plus,
    Pred,
    Proj,
    Succ,
    SumOp,
    Term,
    Ty,
    Var,
    Zero,
    d_type,
    decompose_type,
    ty_str,
)

TyCtx = Mapping[str, Ty]
Path = tuple[int, ...]


class TypingError(Exception):
    def __init__(self, message: str, position: Path = ()) -> None:
        super().__init__(message)
        self.position = position

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{msg} at node {list(self.position)}" if self.position else msg


class UnboundVariable(TypingError):
    pass


class TypeMismatch(TypingError):
    def __init__(self, expected: object, found: Ty, position: Path = ()) -> None:
        exp = ty_str(expected) if isinstance(expected, (Ground, Arrow)) else str(expected)
        super().__init__(f"expected {exp}, found {ty_str(found)}", position)
        self.expected = expected
        self.found = found


class DepthTooShallow(TypingError):
    pass


class NotSimplicit(TypingError):
    pass


def _need_ground(t: Ty, d: int, pos: Path) -> None:
    if t != Ground(d):
        raise TypeMismatch(Ground(d), t, pos)


def _need_depth(t: Ty, k: int, what: str, pos: Path) -> tuple[int, Ty]:
    d, core = decompose_type(t)
    if d < k:
        raise DepthTooShallow(f"{what} needs depth >= {k}, argument has type {ty_str(t)}", pos)
    return d, core


def _infer(ctx: TyCtx, m: Term, sums: bool, pos: Path) -> Ty:
    if isinstance(m, Var):
        if m.name not in ctx:
            raise UnboundVariable(f"unbound variable {m.name}", pos)
        return ctx[m.name]
    if isinstance(m, Abs):
        return Arrow(m.ann, _infer({**ctx, m.name: m.ann}, m.body, sums, pos + (0,)))
    if isinstance(m, App):
        f = _infer(ctx, m.fun, sums, pos + (0,))
        if not isinstance(f, Arrow):
            raise TypeMismatch("a function type", f, pos + (0,))
        a = _infer(ctx, m.arg, sums, pos + (1,))
        if a != f.dom:
            raise TypeMismatch(f.dom, a, pos + (1,))
        return f.cod
    if isinstance(m, Fix):
        f = _infer(ctx, m.body, sums, pos + (0,))
        if not isinstance(f, Arrow) or f.dom != f.cod:
            raise TypeMismatch("a type A -> A", f, pos + (0,))
        return f.dom
    if isinstance(m, Num):
        return NAT
    if isinstance(m, (Succ, Pred)):
        _need_ground(_infer(ctx, m.arg, sums, pos + (0,)), m.d, pos + (0,))
        return Ground(m.d)
    if isinstance(m, If):
        _need_ground(_infer(ctx, m.cond, sums, pos + (0,)), m.d, pos + (0,))
        a = _infer(ctx, m.then, sums, pos + (1,))
        b = _infer(ctx, m.orelse, sums, pos + (2,))
        if a != b:
            raise TypeMismatch(a, b, pos + (2,))
        if m.ann is not None and m.ann != a:
            raise TypeMismatch(m.ann, a, pos)
        return d_type(a, m.d)
    if isinstance(m, Let):
        _need_ground(_infer(ctx, m.bound, sums, pos + (0,)), m.d, pos + (0,))
        b = _infer({**ctx, m.name: NAT}, m.body, sums, pos + (1,))
        if m.ann is not None and m.ann != b:
            raise TypeMismatch(m.ann, b, pos)
        return d_type(b, m.d)
    if isinstance(m, DOp):
        f = _infer(ctx, m.arg, sums, pos + (0,))
        if not isinstance(f, Arrow):
            raise TypeMismatch("a function type", f, pos + (0,))
        return Arrow(d_type(f.dom), d_type(f.cod))
    if isinstance(m, Proj):
        d, core = _need_depth(_infer(ctx, m.arg, sums, pos + (0,)), m.d + 1, "proj", pos)
        return d_type(core, d - 1)
    if isinstance(m, Inj):
        d, core = _need_depth(_infer(ctx, m.arg, sums, pos + (0,)), m.d, "inj", pos)
        return d_type(core, d + 1)
    if isinstance(m, SumOp):
        d, core = _need_depth(_infer(ctx, m.arg, sums, pos + (0,)), m.d + 2, "sum", pos)
        return d_type(core, d - 1)
    if isinstance(m, Flip):
        t = _infer(ctx, m.arg, sums, pos + (0,))
        _need_depth(t, m.d + m.l + 2, "flip", pos)
        return t
    if isinstance(m, Zero):
        if not sums:
            raise NotSimplicit("zero is not allowed in source terms", pos)
        return m.ann
    if isinstance(m, Plus):
        if not sums:
            raise NotSimplicit("sums are not allowed in source terms", pos)
        a = _infer(ctx, m.left, sums, pos + (0,))
        b = _infer(ctx, m.right, sums, pos + (1,))
        if a != b:
            raise TypeMismatch(a, b, pos + (1,))
        return a
    if isinstance(m, Hole):
        raise TypingError("cannot type a context hole", pos)
    raise TypeError(f"not a term: {m!r}")


def infer(ctx: Optional[TyCtx], m: Term) -> Ty:
    """Type of a simplicit term, or a :class:`TypingError`."""
    return _infer(ctx or {}, m, False, ())


def type_of(ctx: Optional[TyCtx], m: Term) -> Ty:
    """Like :func:`infer` but also accepts ``Zero`` and sums of equally typed terms.

    Used on reducts, where sums and zeros legitimately appear.
    """
    return _infer(ctx or {}, m, True, ())


def has_type(ctx: Optional[TyCtx], m: Term, a: Ty, sums: bool = True) -> bool:
    try:
        return _infer(ctx or {}, m, sums, ()) == a
    except TypingError:
        return False


def check_multiset(ctx: Optional[TyCtx], s: Multiset, a: Ty, explain: bool = False):
    """True iff every element of ``s`` has type ``a``.

    With ``explain=True`` returns ``(ok, first_failing_element_or_None)``.
    """
    for m in s.sorted():
        if not has_type(ctx, m, a):
            return (False, m) if explain else False
    return (True, None) if explain else True


def elaborate(m: Term, ctx: Optional[TyCtx] = None) -> Term:
    """Fill in missing ``if``/``let`` annotations; also type-checks ``m``."""
    ctx = dict(ctx or {})
    out = _elab(ctx, m)
    infer(ctx, out)
    return out


def _elab(ctx: dict, m: Term) -> Term:
    if isinstance(m, Abs):
        return replace(m, body=_elab({**ctx, m.name: m.ann}, m.body))
    if isinstance(m, Let):
        bound = _elab(ctx, m.bound)
        inner = {**ctx, m.name: NAT}
        body = _elab(inner, m.body)
        ann = m.ann if m.ann is not None else _infer(inner, body, False, (1,))
        return replace(m, bound=bound, body=body, ann=ann)
    kids = [_elab(ctx, c) for c in m.children()]
    out = m.with_children(kids) if kids else m
    if isinstance(out, If) and out.ann is None:
        out = replace(out, ann=_infer(ctx, out.then, False, (1,)))
    return out
