"""The syntactic differential of a term with respect to a variable."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    Abs,
    App,
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
    Var,
    Zero,
    all_names,
    d_type,
    fresh,
    rename_bound,
    replace_at,
)


def _rename_binder(name: str, body: Term, x: str) -> tuple[str, Term]:
    if name != x:
        return name, body
    new = fresh(name, all_names(body) | {x})
    return new, rename_bound(body, name, new)


def dlet(x: str, m: Term) -> Term:
    """``∂(x)m``: the derivative of ``m`` along the variable ``x``.

    Binders named ``x`` are renamed on the way down. ``Hole`` is mapped to
    itself, which makes the same pass work on one-hole contexts.
    """
    if isinstance(m, Var):
        return m if m.name == x else Inj(0, 0, m)
    if isinstance(m, Hole):
        return m
    if isinstance(m, Abs):
        name, body = _rename_binder(m.name, m.body, x)
        return Abs(name, m.ann, dlet(x, body))
    if isinstance(m, DOp):
        return Flip(0, 0, DOp(dlet(x, m.arg)))
    if isinstance(m, App):
        return App(SumOp(0, DOp(dlet(x, m.fun))), dlet(x, m.arg))
    if isinstance(m, Fix):
        return Fix(SumOp(0, DOp(dlet(x, m.body))))
    if isinstance(m, Num):
        return Inj(0, 0, m)
    if isinstance(m, Succ):
        return Succ(m.d + 1, dlet(x, m.arg))
    if isinstance(m, Pred):
        return Pred(m.d + 1, dlet(x, m.arg))
    if isinstance(m, If):
        ann = None if m.ann is None else d_type(m.ann)
        inner = If(m.d + 1, dlet(x, m.cond), dlet(x, m.then), dlet(x, m.orelse), ann)
        return SumOp(0, Flip(0, m.d, inner))
    if isinstance(m, Let):
        name, body = _rename_binder(m.name, m.body, x)
        ann = None if m.ann is None else d_type(m.ann)
        inner = Let(m.d + 1, name, dlet(x, m.bound), dlet(x, body), ann)
        return SumOp(0, Flip(0, m.d, inner))
    if isinstance(m, Zero):
        return Zero(d_type(m.ann))
    if isinstance(m, Plus):
        return Plus(dlet(x, m.left), dlet(x, m.right))
    if isinstance(m, Proj):
        return Proj(m.i, m.d + 1, dlet(x, m.arg))
    if isinstance(m, Inj):
        return Inj(m.i, m.d + 1, dlet(x, m.arg))
    if isinstance(m, SumOp):
        return SumOp(m.d + 1, dlet(x, m.arg))
    if isinstance(m, Flip):
        return Flip(m.d + 1, m.l, dlet(x, m.arg))
    raise TypeError(f"not a term: {m!r}")


# ---------------------------------------------------------------------------
# Linear contexts


def _hole_path(t: Term, linear_only: bool) -> tuple[int, ...] | None:
    if isinstance(t, Hole):
        return ()
    found = None
    for k, c in enumerate(t.children()):
        p = _hole_path(c, linear_only)
        if p is not None:
            if found is not None:
                raise ValueError("context has more than one hole")
            if linear_only and k not in linear_positions(t):
                raise ValueError(f"hole below non-linear position of {type(t).__name__}")
            found = (k,) + p
    return found


def linear_positions(t: Term) -> tuple[int, ...]:
    """Child indices of ``t`` that are linear-context positions."""
    if isinstance(t, (Abs, App, If, Let, Succ, Pred, DOp, Proj, Inj, SumOp, Flip)):
        return (0,)
    return ()


@dataclass(frozen=True)
class LinCtx:
    """A linear one-hole context, stored as a term containing one ``Hole``."""

    term: Term

    def __post_init__(self) -> None:
        if _hole_path(self.term, True) is None:
            raise ValueError("context has no hole")

    @property
    def height(self) -> int:
        return len(self.hole_path)

    @property
    def hole_path(self) -> tuple[int, ...]:
        p = _hole_path(self.term, True)
        assert p is not None
        return p

    def bound_above_hole(self) -> set[str]:
        out: set[str] = set()
        t = self.term
        for k in self.hole_path:
            if isinstance(t, Abs) or (isinstance(t, Let) and k == 1):
                out.add(t.name)  # type: ignore[union-attr]
            t = t.children()[k]
        return out

    def fill(self, m: Term) -> Term:
        return replace_at(self.term, self.hole_path, m)


def dlet_ctx(x: str, ctx: LinCtx) -> LinCtx:
    """The differential of a linear context, with ``∂(x)⟨⟩ = ⟨⟩``."""
    if x in ctx.bound_above_hole():
        raise ValueError(f"{x} is bound above the hole")
    return LinCtx(dlet(x, ctx.term))


# ---------------------------------------------------------------------------
# Sugar


def sugar_ldiffd(m: Term) -> Term:
    """``dlin m = proj[1,0](D m)``."""
    return Proj(1, 0, DOp(m))


def sugar_linapp(m: Term, n: Term) -> Term:
    """``lin m n = (dlin m)(inj[1,0] n)``."""
    return App(sugar_ldiffd(m), Inj(1, 0, n))

