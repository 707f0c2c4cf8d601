"""Random type-directed generation of well-typed simplicit terms.

Generation is backwards from a target type: every constructor whose
conclusion can produce the target is a candidate, and a closed inhabitant is
always available as a fallback so generation never gets stuck.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Abs,
    App,
    Arrow,
    DOp,
    Fix,
    Flip,
    Ground,
    If,
    Inj,
    Let,
    Num,
    Pred,
    Proj,
    Succ,
    SumOp,
    Term,
    Ty,
    Var,
    d_type,
    decompose_type,
    free_vars,
    size,
    undiff_type,
)
from .typecheck import elaborate


@dataclass
class GenConfig:
    max_size: int = 25
    max_super: int = 2  # bound on every depth superscript
    max_type_depth: int = 3  # bound on the D-depth of intermediate types
    max_num: int = 4
    var_names: tuple[str, ...] = ("x", "y", "z", "u", "v", "w")
    fix_weight: float = 0.3


@dataclass
class _Gen:
    rng: random.Random
    cfg: GenConfig
    counter: int = 0

    def fresh(self) -> str:
        self.counter += 1
        base = self.cfg.var_names[self.counter % len(self.cfg.var_names)]
        return f"{base}{self.counter}"

    # -- types -------------------------------------------------------------

    def ty(self, budget: int = 2) -> Ty:
        if budget <= 0 or self.rng.random() < 0.6:
            return Ground(self.rng.choice([0, 0, 0, 1, 1, 2]))
        return Arrow(self.ty(budget - 1), self.ty(budget - 1))

    # -- closed inhabitants ------------------------------------------------

    def minimal(self, a: Ty) -> Term:
        if isinstance(a, Arrow):
            return Abs(self.fresh(), a.dom, self.minimal(a.cod))
        t: Term = Num(self.rng.randint(0, self.cfg.max_num))
        for k in range(a.d):
            t = Inj(self.rng.randint(0, 1), self.rng.randint(0, min(k, self.cfg.max_super)), t)
        return t

    # -- terms -------------------------------------------------------------

    def term(self, ctx: dict[str, Ty], a: Ty, budget: int) -> Term:
        if budget <= 1:
            return self.leaf(ctx, a)
        options = self.options(ctx, a, budget)
        self.rng.shuffle(options)
        for make in options:
            t = make()
            if t is not None:
                return t
        return self.leaf(ctx, a)

    def leaf(self, ctx: dict[str, Ty], a: Ty) -> Term:
        vs = [x for x, b in ctx.items() if b == a]
        if vs and self.rng.random() < 0.8:
            return Var(self.rng.choice(vs))
        return self.minimal(a)

    def options(self, ctx: dict[str, Ty], a: Ty, budget: int) -> list:
        rng, cfg = self.rng, self.cfg
        k, core = decompose_type(a)
        opts: list = []

        def sub(c: dict, b: Ty, share: float = 1.0) -> Term:
            return self.term(c, b, max(1, int((budget - 1) * share)))

        vs = [x for x, b in ctx.items() if b == a]
        if vs:
            opts += [lambda: Var(rng.choice(vs))] * 2
        heads = [(x, b) for x, b in ctx.items() if isinstance(b, Arrow) and _result_matches(b, a)]
        if heads:
            opts.append(lambda: self.spine(ctx, rng.choice(heads), a, budget))
        if isinstance(a, Arrow):

            def lam() -> Term:
                x = self.fresh()
                return Abs(x, a.dom, sub({**ctx, x: a.dom}, a.cod))

            opts += [lam] * 2
            dom_k, _ = decompose_type(a.dom)
            cod_k, _ = decompose_type(a.cod)
            if dom_k >= 1 and cod_k >= 1:
                opts.append(lambda: DOp(sub(ctx, Arrow(undiff_type(a.dom), undiff_type(a.cod)))))
        if isinstance(a, Ground) and a.d <= cfg.max_super:
            opts.append(lambda: Succ(a.d, sub(ctx, a)))
            opts.append(lambda: Pred(a.d, sub(ctx, a)))
        if a == Ground(0):
            opts.append(lambda: Num(rng.randint(0, cfg.max_num)))
        for d in range(min(k, cfg.max_super) + 1):
            b = d_type(core, k - d)

            def mk_if(d: int = d, b: Ty = b) -> Term:
                return If(d, sub(ctx, Ground(d), 0.3), sub(ctx, b, 0.35), sub(ctx, b, 0.35))

            def mk_let(d: int = d, b: Ty = b) -> Term:
                x = self.fresh()
                return Let(d, x, sub(ctx, Ground(d), 0.4), sub({**ctx, x: Ground(0)}, b, 0.6))

            opts += [mk_if, mk_let]
        if k + 1 <= cfg.max_type_depth:
            for d in range(min(k, cfg.max_super) + 1):
                opts.append(lambda d=d: Proj(rng.randint(0, 1), d, sub(ctx, d_type(a))))
        if k >= 1:
            below = d_type(core, k - 1)
            for d in range(min(k - 1, cfg.max_super) + 1):
                opts.append(lambda d=d: Inj(rng.randint(0, 1), d, sub(ctx, below)))
                if k + 1 <= cfg.max_type_depth:
                    opts.append(lambda d=d: SumOp(d, sub(ctx, d_type(a))))
        for d in range(min(k, cfg.max_super) + 1):
            for l in range(min(k - d - 2, cfg.max_super) + 1):
                opts.append(lambda d=d, l=l: Flip(d, l, sub(ctx, a)))
        if budget >= 4:

            def app() -> Term:
                b = self.ty(1)
                return App(sub(ctx, Arrow(b, a), 0.6), sub(ctx, b, 0.4))

            opts += [app] * 2
            if rng.random() < cfg.fix_weight:
                opts.append(lambda: Fix(sub(ctx, Arrow(a, a))))
        return opts

    def spine(self, ctx: dict[str, Ty], head: tuple[str, Ty], a: Ty, budget: int) -> Term:
        """Apply a context variable to enough generated arguments to reach ``a``."""
        x, b = head
        t: Term = Var(x)
        args = []
        while b != a:
            assert isinstance(b, Arrow)
            args.append(b.dom)
            b = b.cod
        share = max(1, (budget - 1) // max(1, len(args)))
        for dom in args:
            t = App(t, self.term(ctx, dom, share))
        return t


def _result_matches(b: Ty, a: Ty) -> bool:
    while isinstance(b, Arrow):
        b = b.cod
        if b == a:
            return True
    return False


def gen_term(
    rng: random.Random,
    ty: Optional[Ty] = None,
    ctx: Optional[dict[str, Ty]] = None,
    cfg: Optional[GenConfig] = None,
) -> tuple[Term, Ty]:
    """A well-typed simplicit term of ``ty`` (random if omitted) under ``ctx``.

    If/let annotations are filled in; the size stays within ``cfg.max_size``.
    """
    cfg = cfg or GenConfig()
    g = _Gen(rng, cfg)
    ctx = dict(ctx or {})
    a = ty if ty is not None else g.ty()
    for _ in range(20):
        t = g.term(ctx, a, rng.randint(3, cfg.max_size))
        if size(t) <= cfg.max_size:
            return elaborate(t, ctx), a
    t = g.minimal(a)
    return elaborate(t, ctx), a


def gen_open_term(rng: random.Random, cfg: Optional[GenConfig] = None) -> tuple[str, Ty, Term, Ty]:
    """``(x, A, M, B)`` with ``x:A ⊢ M : B`` and ``x`` free in ``M`` whenever possible."""
    cfg = cfg or GenConfig()
    g = _Gen(rng, cfg)
    x = "x0"
    a = g.ty(1)
    best = None
    for _ in range(10):
        m, b = gen_term(rng, None, {x: a}, cfg)
        best = (x, a, m, b)
        if x in free_vars(m):
            break
    assert best is not None
    return best


def gen_ground_program(rng: random.Random, cfg: Optional[GenConfig] = None) -> Term:
    return gen_term(rng, Ground(0), {}, cfg)[0]
