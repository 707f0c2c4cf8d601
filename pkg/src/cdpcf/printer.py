"""Pretty-printer for the concrete syntax accepted by :mod:`cdpcf.parser`."""

from __future__ import annotations

from .syntax import (
    Abs,
    App,
    Arrow,
    DOp,
    Fix,
    Flip,
    Hole,
    If,
    Inj,
    Let,
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
    ty_str,
)


def _atomic_ty(a: Ty) -> str:
    s = ty_str(a)
    return f"({s})" if isinstance(a, Arrow) else s


def _prefix_head(t: Term) -> str | None:
    if isinstance(t, Succ):
        return f"succ[{t.d}]"
    if isinstance(t, Pred):
        return f"pred[{t.d}]"
    if isinstance(t, Proj):
        return f"proj[{t.i},{t.d}]"
    if isinstance(t, Inj):
        return f"inj[{t.i},{t.d}]"
    if isinstance(t, SumOp):
        return f"sum[{t.d}]"
    if isinstance(t, Flip):
        return f"flip[{t.d},{t.l}]"
    if isinstance(t, DOp):
        return "D"
    if isinstance(t, Fix):
        return "fix"
    return None


def _is_atom(t: Term) -> bool:
    return isinstance(t, (Var, Num, If, Zero, Hole))


def _atom(t: Term) -> str:
    s = show(t)
    return s if _is_atom(t) else f"({s})"


def _operand(t: Term) -> str:
    """An operand of a prefix operator: atoms bare, everything else parenthesised."""
    return " " + show(t) if _is_atom(t) else f"({show(t)})"


def show(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.n)
    if isinstance(t, Hole):
        return "[]"
    if isinstance(t, Zero):
        return f"zero:{_atomic_ty(t.ann)}"
    if isinstance(t, Abs):
        return f"\\{t.name}:{_atomic_ty(t.ann)}. {show(t.body)}"
    if isinstance(t, Let):
        ann = f":{_atomic_ty(t.ann)}" if t.ann is not None else ""
        return f"let[{t.d}]({t.name} = {show(t.bound)}){ann} {show(t.body)}"
    if isinstance(t, If):
        ann = f":{_atomic_ty(t.ann)}" if t.ann is not None else ""
        return f"if[{t.d}]({show(t.cond)}, {show(t.then)}, {show(t.orelse)}){ann}"
    if isinstance(t, Plus):
        left = show(t.left)
        if isinstance(t.left, (Abs, Let)):
            left = f"({left})"
        right = show(t.right)
        if isinstance(t.right, (Abs, Let, Plus)):
            right = f"({right})"
        return f"{left} + {right}"
    if isinstance(t, App):
        fun = show(t.fun)
        if isinstance(t.fun, (Abs, Let, Plus)):
            fun = f"({fun})"
        elif _prefix_head(t.fun) is not None:
            fun = f"({fun})"
        return f"{fun} {_atom(t.arg)}"
    head = _prefix_head(t)
    if head is not None:
        return head + _operand(t.children()[0])
    raise TypeError(f"not a term: {t!r}")
