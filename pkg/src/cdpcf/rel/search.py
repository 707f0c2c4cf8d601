"""Fuel-bounded proof search for the intersection typing systems.

The search builds one derivation at a time. A point whose components are
not yet known is represented with logic variables: ``LVar`` for bits and
naturals, and ``MsVar`` for multisets. A multiset variable is a stream.
Producers (variable occurrences, the differential tagging map, known
contexts) append elements, and consumers (argument premises of application
and fixpoint rules) attach listeners. Natural numbers mostly flow bottom-up
through arithmetic propagators, while bits flow top-down from the goal point.

Whenever the rules leave a genuine choice (which summand of a sum, which
branch of a conditional when the scrutinee value is still unknown, how to
pair elements of two multisets that must be equal, ...), the engine calls
``choose``. Backtracking replays the whole construction with a different
choice sequence, in depth-first order. Fuel bounds the number of
derivation nodes of a single attempt, and ``max_runs`` bounds the attempts.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

from ..machine import (
    ArgFrame,
    Command,
    DiffFrame,
    IfFrame,
    LetFrame,
    PredFrame,
    Stack,
    SuccFrame,
    stack_type,
)
from ..syntax import (
    NAT,
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
    lcycle,
    rev,
    undiff_type,
)
from ..typecheck import type_of
from .points import APoint, GPoint, Point, is_point_of, point_str


class Verdict(enum.Enum):
    PROVED = "proved"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:
        return self is Verdict.PROVED


PROVED = Verdict.PROVED
UNKNOWN = Verdict.UNKNOWN


class PointTypeMismatch(ValueError):
    pass


class _Fail(Exception):
    pass


class _OutOfFuel(Exception):
    pass


# ---------------------------------------------------------------------------
# Logic variables


class LVar:
    __slots__ = ("val", "link", "waiters", "is_bit")

    def __init__(self, is_bit: bool) -> None:
        self.val: Optional[int] = None
        self.link: Optional[LVar] = None
        self.waiters: list[Callable[[], None]] = []
        self.is_bit = is_bit


Val = Union[int, LVar]


class MsVar:
    __slots__ = ("link", "elems", "listeners", "produced", "closed", "ty")

    def __init__(self, ty: Ty) -> None:
        self.link: Optional[MsVar] = None
        self.elems: list[EPoint] = []
        self.listeners: list[Callable[[EPoint], None]] = []
        self.produced = False
        self.closed = False
        self.ty = ty

    def root(self) -> "MsVar":
        r = self
        while r.link is not None:
            r = r.link
        return r

    @property
    def free(self) -> bool:
        return not self.produced and not self.closed and not self.elems


@dataclass(eq=False)
class EG:
    bits: tuple
    nu: Val


@dataclass(eq=False)
class EA:
    ms: MsVar
    res: "EPoint"


EPoint = Union[EG, EA]


def leaf(p: EPoint) -> EG:
    while isinstance(p, EA):
        p = p.res
    return p


def map_leaf(p: EPoint, f: Callable[[EG], EG]) -> EPoint:
    if isinstance(p, EG):
        return f(p)
    return EA(p.ms, map_leaf(p.res, f))


def act(bits: tuple, p: EPoint) -> EPoint:
    return map_leaf(p, lambda g: EG(tuple(bits) + g.bits, g.nu))


def split_prefix(p: EPoint, d: int) -> tuple[tuple, EPoint]:
    return leaf(p).bits[:d], map_leaf(p, lambda g: EG(g.bits[d:], g.nu))


# ---------------------------------------------------------------------------
# Engine


@dataclass
class _Matching:
    """Two multiset roots constrained to be equal."""

    x: MsVar
    y: MsVar
    pending_x: list = field(default_factory=list)
    pending_y: list = field(default_factory=list)


@dataclass
class _TagSum:
    r: Val
    tags: list = field(default_factory=list)


class Engine:
    def __init__(self, prefix: list[int], fuel: int) -> None:
        self.prefix = prefix
        self.trail: list[tuple[int, int]] = []
        self.fuel = fuel
        self.nodes = 0
        self.goals: deque = deque()
        self.props: deque = deque()
        self.tasks: list[Callable[[], bool]] = []
        self.matchings: list[_Matching] = []
        self.tagsums: list[_TagSum] = []
        self.free_listened: list[MsVar] = []
        self._types: dict = {}

    # -- choices ----------------------------------------------------------
    def choose(self, n: int) -> int:
        if n <= 0:
            raise _Fail
        k = len(self.trail)
        c = self.prefix[k] if k < len(self.prefix) else 0
        self.trail.append((c, n))
        return c

    # -- values -----------------------------------------------------------
    def new_bit(self) -> LVar:
        return LVar(True)

    def new_nat(self) -> LVar:
        return LVar(False)

    @staticmethod
    def walk(x: Val) -> Val:
        if isinstance(x, int):
            return x
        while x.link is not None:
            x = x.link
        return x.val if x.val is not None else x

    def bind(self, v: LVar, val: int) -> None:
        if val < 0 or (v.is_bit and val > 1):
            raise _Fail
        v.val = val
        self.props.extend(v.waiters)
        v.waiters = []

    def unify_val(self, a: Val, b: Val) -> None:
        a, b = self.walk(a), self.walk(b)
        if isinstance(a, int):
            if isinstance(b, int):
                if a != b:
                    raise _Fail
            else:
                self.bind(b, a)
        elif isinstance(b, int):
            self.bind(a, b)
        elif a is not b:
            a.link = b
            b.is_bit = b.is_bit or a.is_bit
            b.waiters.extend(a.waiters)
            a.waiters = []

    def wait(self, x: Val, cb: Callable[[], None]) -> None:
        x = self.walk(x)
        if isinstance(x, int):
            self.props.append(cb)
        else:
            x.waiters.append(cb)

    # -- points -----------------------------------------------------------
    def fresh_point(self, ty: Ty) -> EPoint:
        if isinstance(ty, Ground):
            return EG(tuple(self.new_bit() for _ in range(ty.d)), self.new_nat())
        return EA(MsVar(ty.dom), self.fresh_point(ty.cod))

    def from_point(self, a: Point, ty: Ty) -> EPoint:
        if isinstance(ty, Ground):
            assert isinstance(a, GPoint)
            return EG(tuple(a.word), a.nu)
        assert isinstance(a, APoint)
        return EA(self.closed_ms(a.args, ty.dom), self.from_point(a.res, ty.cod))

    def closed_ms(self, m: Multiset, ty: Ty) -> MsVar:
        ms = MsVar(ty)
        ms.elems = [self.from_point(x, ty) for x in sorted(m, key=point_str)]
        ms.produced = ms.closed = True
        return ms

    def unify_point(self, p: EPoint, q: EPoint) -> None:
        if isinstance(p, EG):
            assert isinstance(q, EG) and len(p.bits) == len(q.bits), "point shapes differ"
            for a, b in zip(p.bits, q.bits):
                self.unify_val(a, b)
            self.unify_val(p.nu, q.nu)
        else:
            assert isinstance(q, EA), "point shapes differ"
            self.unify_ms(p.ms, q.ms)
            self.unify_point(p.res, q.res)

    def compatible(self, p: EPoint, q: EPoint) -> bool:
        if isinstance(p, EG):
            for a, b in zip(p.bits + (p.nu,), q.bits + (q.nu,)):  # type: ignore[union-attr]
                a, b = self.walk(a), self.walk(b)
                if isinstance(a, int) and isinstance(b, int) and a != b:
                    return False
            return True
        x, y = p.ms.root(), q.ms.root()  # type: ignore[union-attr]
        if x.closed and y.closed and len(x.elems) != len(y.elems):
            return False
        return self.compatible(p.res, q.res)  # type: ignore[union-attr]

    def ground_key(self, p: EPoint) -> Optional[tuple]:
        """A hashable value for a fully known point, else ``None``."""
        if isinstance(p, EG):
            vals = tuple(self.walk(x) for x in p.bits + (p.nu,))
            return vals if all(isinstance(v, int) for v in vals) else None
        r = p.ms.root()
        if not r.closed:
            return None
        keys = [self.ground_key(e) for e in r.elems]
        if any(k is None for k in keys):
            return None
        res = self.ground_key(p.res)
        return None if res is None else (tuple(sorted(keys)), res)  # type: ignore[type-var]

    # -- multisets ----------------------------------------------------------
    def append(self, ms: MsVar, p: EPoint) -> None:
        r = ms.root()
        if r.closed:
            raise _Fail
        r.produced = True
        r.elems.append(p)
        for cb in list(r.listeners):
            self.props.append(lambda cb=cb: cb(p))

    def listen(self, ms: MsVar, cb: Callable[[EPoint], None]) -> None:
        r = ms.root()
        r.listeners.append(cb)
        for e in list(r.elems):
            self.props.append(lambda e=e: cb(e))
        if r.free:
            self.free_listened.append(r)

    def unify_ms(self, x: MsVar, y: MsVar) -> None:
        rx, ry = x.root(), y.root()
        if rx is ry:
            return
        if rx.free:
            self._alias(rx, ry)
        elif ry.free:
            self._alias(ry, rx)
        else:
            self._match(rx, ry)

    def _alias(self, a: MsVar, b: MsVar) -> None:
        a.link = b
        for cb in a.listeners:
            self.listen(b, cb)
        a.listeners = []

    def _match(self, x: MsVar, y: MsVar) -> None:
        if x.closed and not y.closed:
            x, y = y, x
        mt = _Matching(x, y)
        self.matchings.append(mt)
        if y.closed:
            mt.pending_y = list(y.elems)
            self.listen(x, lambda e: self._match_eager(mt, e))
        else:
            self.listen(x, mt.pending_x.append)
            self.listen(y, mt.pending_y.append)

    def _pick(self, e: EPoint, cands: list) -> int:
        """Choose an index into ``cands`` for a partner of ``e`` (duplicates tried once)."""
        seen = set()
        options = []
        for idx, c in enumerate(cands):
            if not self.compatible(e, c):
                continue
            key = self.ground_key(c)
            if key is not None:
                if key in seen:
                    continue
                seen.add(key)
            options.append(idx)
        return options[self.choose(len(options))]

    def _match_eager(self, mt: _Matching, e: EPoint) -> None:
        idx = self._pick(e, mt.pending_y)
        partner = mt.pending_y.pop(idx)
        self.unify_point(e, partner)

    # -- arithmetic and bit constraints ------------------------------------
    def succ_rel(self, mu: Val, nu: Val) -> None:
        """``nu = mu + 1``."""

        def prop() -> None:
            m, n = self.walk(mu), self.walk(nu)
            if isinstance(m, int):
                self.unify_val(n, m + 1)
            elif isinstance(n, int):
                if n == 0:
                    raise _Fail
                self.unify_val(m, n - 1)

        self.wait(mu, prop)
        self.wait(nu, prop)

    def pred_rel(self, mu: Val, nu: Val) -> None:
        """``nu = max(mu - 1, 0)``."""

        def prop() -> None:
            m, n = self.walk(mu), self.walk(nu)
            if isinstance(m, int):
                self.unify_val(n, max(m - 1, 0))
            elif isinstance(n, int) and n > 0:
                self.unify_val(m, n + 1)

        def task() -> bool:
            m, n = self.walk(mu), self.walk(nu)
            if isinstance(m, int) or not (isinstance(n, int) and n == 0):
                return False
            self.unify_val(m, self.choose(2))
            return True

        self.wait(mu, prop)
        self.wait(nu, prop)
        self.tasks.append(task)

    def branch_on(self, mu: Val, on_zero: Callable[[], None], on_pos: Callable[[], None]) -> None:
        """Run ``on_zero`` or ``on_pos`` once ``mu`` is known (or guessed)."""
        state = {"fired": False, "pos": False}

        def prop() -> None:
            m = self.walk(mu)
            if not isinstance(m, int):
                return
            if state["pos"]:
                if m == 0:
                    raise _Fail
                return
            if not state["fired"]:
                state["fired"] = True
                (on_zero if m == 0 else on_pos)()

        def task() -> bool:
            if state["fired"] or isinstance(self.walk(mu), int):
                return False
            if self.choose(2) == 0:
                self.unify_val(mu, 0)
            else:
                state["fired"] = state["pos"] = True
                on_pos()
                self.wait(mu, prop)
            return True

        self.wait(mu, prop)
        self.tasks.append(task)

    def sum_rel(self, r: Val, parts: list[Val]) -> None:
        """``r = Σ parts`` over bits."""

        def prop() -> None:
            rv = self.walk(r)
            vals = [self.walk(p) for p in parts]
            ones = sum(1 for v in vals if v == 1)
            unknown = [v for v in vals if not isinstance(v, int)]
            if ones > 1:
                raise _Fail
            if isinstance(rv, int):
                if rv < ones:
                    raise _Fail
                if rv == ones:
                    for v in unknown:
                        self.bind(v, 0)  # type: ignore[arg-type]
                elif len(unknown) == 1:
                    self.bind(unknown[0], 1)  # type: ignore[arg-type]
                elif not unknown:
                    raise _Fail
            elif not unknown:
                self.unify_val(rv, ones)

        def task() -> bool:
            for v in [r] + list(parts):
                v = self.walk(v)
                if not isinstance(v, int):
                    self.bind(v, self.choose(2))
                    return True
            return False

        for v in [r] + list(parts):
            self.wait(v, prop)
        self.tasks.append(task)

    # -- differential tagging ------------------------------------------------
    def sdiff_link(self, m: MsVar, r: Val, m_tagged: MsVar) -> None:
        """Constrain ``(m_tagged, (r, m))`` to lie in the differential relation."""
        image = MsVar(m_tagged.ty)
        image.produced = True
        ts = _TagSum(r)
        self.tagsums.append(ts)

        def check() -> None:
            rv = self.walk(r)
            vals = [self.walk(t) for t in ts.tags]
            ones = sum(1 for v in vals if v == 1)
            if ones > 1 or (isinstance(rv, int) and ones > rv):
                raise _Fail
            if isinstance(rv, int) and ones == rv:
                for v in vals:
                    if not isinstance(v, int):
                        self.bind(v, 0)

        def on_elem(a: EPoint) -> None:
            t = self.new_bit()
            ts.tags.append(t)
            self.wait(t, check)
            check()
            self.append(image, act((t,), a))

        self.wait(r, check)
        self.listen(m, on_elem)
        self.unify_ms(m_tagged, image)

    # -- goals --------------------------------------------------------------
    def type_in(self, t: Term, tyenv: Mapping[str, Ty]) -> Ty:
        key = (id(t), tuple(sorted(tyenv.items(), key=lambda kv: kv[0])))
        hit = self._types.get(key)
        if hit is None:
            hit = (t, type_of(dict(tyenv), t))
            self._types[key] = hit
        return hit[1]

    def goal(self, t: Term, p: EPoint, env: Mapping[str, tuple[MsVar, Ty]]) -> None:
        self.goals.append((t, p, env))

    def expand(self, t: Term, p: EPoint, env: Mapping[str, tuple[MsVar, Ty]]) -> None:
        self.nodes += 1
        if self.nodes > self.fuel:
            raise _OutOfFuel
        if isinstance(t, Var):
            self.append(env[t.name][0], p)
        elif isinstance(t, Abs):
            assert isinstance(p, EA)
            stream = MsVar(t.ann)
            stream.produced = True
            self.unify_ms(p.ms, stream)
            self.goal(t.body, p.res, {**env, t.name: (stream, t.ann)})
        elif isinstance(t, App):
            arg_ty = self.type_in(t.arg, {k: v[1] for k, v in env.items()})
            m = MsVar(arg_ty)
            self.listen(m, lambda e: self.goal(t.arg, e, env))
            self.goal(t.fun, EA(m, p), env)
        elif isinstance(t, Fix):
            ty = self.type_in(t, {k: v[1] for k, v in env.items()})
            m = MsVar(ty)
            self.listen(m, lambda e: self.goal(t, e, env))
            self.goal(t.body, EA(m, p), env)
        elif isinstance(t, Num):
            assert isinstance(p, EG) and not p.bits
            self.unify_val(p.nu, t.n)
        elif isinstance(t, (Succ, Pred)):
            assert isinstance(p, EG)
            mu = self.new_nat()
            self.goal(t.arg, EG(p.bits, mu), env)
            (self.succ_rel if isinstance(t, Succ) else self.pred_rel)(mu, p.nu)
        elif isinstance(t, If):
            delta, a = split_prefix(p, t.d)
            mu = self.new_nat()
            self.goal(t.cond, EG(delta, mu), env)
            self.branch_on(mu, lambda: self.goal(t.then, a, env), lambda: self.goal(t.orelse, a, env))
        elif isinstance(t, Let):
            delta, b = split_prefix(p, t.d)
            mu = self.new_nat()
            self.goal(t.bound, EG(delta, mu), env)
            stream = MsVar(NAT)
            stream.produced = True
            self.listen(stream, lambda e: self.unify_val(e.nu, mu))  # type: ignore[union-attr]
            self.goal(t.body, b, {**env, t.name: (stream, NAT)})
        elif isinstance(t, DOp):
            assert isinstance(p, EA)
            bits = leaf(p.res).bits
            r = bits[0]
            b = map_leaf(p.res, lambda g: EG(g.bits[1:], g.nu))
            m = MsVar(undiff_type(p.ms.root().ty))
            self.goal(t.arg, EA(m, b), env)
            self.sdiff_link(m, r, p.ms)
        elif isinstance(t, Proj):
            d, i = t.d, t.i
            self.goal(t.arg, map_leaf(p, lambda g: EG(g.bits[:d] + (i,) + g.bits[d:], g.nu)), env)
        elif isinstance(t, Inj):
            d = t.d
            self.unify_val(leaf(p).bits[d], t.i)
            self.goal(t.arg, map_leaf(p, lambda g: EG(g.bits[:d] + g.bits[d + 1 :], g.nu)), env)
        elif isinstance(t, SumOp):
            d = t.d
            r0, r1 = self.new_bit(), self.new_bit()
            self.sum_rel(leaf(p).bits[d], [r0, r1])
            self.goal(t.arg, map_leaf(p, lambda g: EG(g.bits[:d] + (r0, r1) + g.bits[d + 1 :], g.nu)), env)
        elif isinstance(t, Flip):
            d, w = t.d, t.l + 2
            self.goal(
                t.arg,
                map_leaf(p, lambda g: EG(g.bits[:d] + lcycle(g.bits[d : d + w]) + g.bits[d + w :], g.nu)),
                env,
            )
        elif isinstance(t, Plus):
            self.goal(t.right if self.choose(2) else t.left, p, env)
        elif isinstance(t, Zero):
            raise _Fail
        else:
            raise TypeError(f"cannot check {type(t).__name__}")

    # -- stacks ---------------------------------------------------------------
    def stack_goal(self, s: Stack, f: EPoint, nu: Val) -> None:
        self.goals.append(("stack", s, f, nu))

    def expand_stack(self, s: Stack, f: EPoint, nu: Val) -> None:
        self.nodes += 1
        if self.nodes > self.fuel:
            raise _OutOfFuel
        if not s:
            assert isinstance(f, EG)
            self.unify_val(f.nu, nu)
            return
        top, rest = s[0], s[1:]
        if isinstance(top, SuccFrame):
            k1 = self.new_nat()
            self.succ_rel(f.nu, k1)  # type: ignore[union-attr]
            self.stack_goal(rest, EG((), k1), nu)
        elif isinstance(top, PredFrame):
            k1 = self.new_nat()
            self.pred_rel(f.nu, k1)  # type: ignore[union-attr]
            self.stack_goal(rest, EG((), k1), nu)
        elif isinstance(top, (IfFrame, LetFrame)):
            g = self.fresh_point(stack_type(rest))
            self.stack_goal(rest, g, nu)
            kappa = f.nu  # type: ignore[union-attr]
            word = rev(tuple(top.word))
            if isinstance(top, IfFrame):
                self.branch_on(
                    kappa,
                    lambda: self.goal(top.then, act(word, g), {}),
                    lambda: self.goal(top.orelse, act(word, g), {}),
                )
            else:
                stream = MsVar(NAT)
                stream.produced = True
                self.listen(stream, lambda e: self.unify_val(e.nu, kappa))  # type: ignore[union-attr]
                self.goal(top.body, act(word, g), {top.name: (stream, NAT)})
        elif isinstance(top, ArgFrame):
            assert isinstance(f, EA)
            self.listen(f.ms, lambda e: self.goal(top.term, e, {}))
            self.stack_goal(rest, f.res, nu)
        elif isinstance(top, DiffFrame):
            assert isinstance(f, EA)
            below = stack_type(rest)
            assert isinstance(below, Arrow)
            tagged = MsVar(below.dom)
            self.sdiff_link(f.ms, top.letter, tagged)
            self.stack_goal(rest, EA(tagged, f.res), nu)
        else:
            raise TypeError(f"not a frame: {top!r}")

    # -- main loop ------------------------------------------------------------
    def run(self) -> None:
        while True:
            if self.props:
                self.props.popleft()()
                continue
            if self.goals:
                g = self.goals.popleft()
                if g[0] == "stack":
                    self.expand_stack(g[1], g[2], g[3])
                else:
                    self.expand(*g)
                continue
            if self._label():
                continue
            return

    def _label(self) -> bool:
        """One labeling step at quiescence; ``False`` when the derivation is complete."""
        for task in self.tasks:
            if task():
                return True
        for ms in self.free_listened:
            r = ms.root()
            if r.free and r.listeners:
                if self.choose(2) == 0:
                    r.closed = r.produced = True
                else:
                    self.append(r, self.fresh_point(r.ty))
                return True
        for mt in self.matchings:
            if mt.pending_x or mt.pending_y:
                if len(mt.pending_x) != len(mt.pending_y):
                    raise _Fail
                e = mt.pending_x.pop(0)
                idx = self._pick(e, mt.pending_y)
                self.unify_point(e, mt.pending_y.pop(idx))
                return True
        for ts in self.tagsums:
            rv = self.walk(ts.r)
            vals = [self.walk(t) for t in ts.tags]
            ones = sum(1 for v in vals if v == 1)
            unknown = [v for v in vals if not isinstance(v, int)]
            if isinstance(rv, int):
                if ones == rv:
                    continue
                if not unknown:
                    raise _Fail
                self.bind(unknown[self.choose(len(unknown))], 1)
                return True
            if unknown:
                self.bind(unknown[0], self.choose(2))
                return True
            self.unify_val(rv, ones)
            return True
        return False


# ---------------------------------------------------------------------------
# Driver


@dataclass
class SearchStats:
    runs: int = 0
    max_nodes: int = 0
    budget_hit: bool = False
    fuel_hit: bool = False


def _solve(setup: Callable[[Engine], None], fuel: int, max_runs: int, stats: Optional[SearchStats]) -> Verdict:
    prefix: list[int] = []
    st = stats if stats is not None else SearchStats()
    while True:
        if st.runs >= max_runs:
            st.budget_hit = True
            return UNKNOWN
        st.runs += 1
        eng = Engine(prefix, fuel)
        try:
            setup(eng)
            eng.run()
            st.max_nodes = max(st.max_nodes, eng.nodes)
            return PROVED
        except _Fail:
            pass
        except _OutOfFuel:
            st.fuel_hit = True
        st.max_nodes = max(st.max_nodes, eng.nodes)
        trail = eng.trail
        while trail and trail[-1][0] + 1 >= trail[-1][1]:
            trail.pop()
        if not trail:
            return UNKNOWN
        prefix = [c for c, _ in trail[:-1]] + [trail[-1][0] + 1]


IContext = Mapping[str, tuple[Multiset, Ty]]

DEFAULT_FUEL = 1000
DEFAULT_RUNS = 20_000


def icheck(
    phi: Optional[IContext],
    m: Term,
    a: Point,
    fuel: int = DEFAULT_FUEL,
    max_runs: int = DEFAULT_RUNS,
    stats: Optional[SearchStats] = None,
) -> Verdict:
    """Search for a derivation of ``Φ ⊢ m : a`` with at most ``fuel`` nodes."""
    phi = dict(phi or {})
    tyenv = {x: ty for x, (_, ty) in phi.items()}
    ty = type_of(tyenv, m)
    if not is_point_of(a, ty):
        raise PointTypeMismatch(f"{point_str(a)} is not a point of the type of the term")
    for x, (ms, xty) in phi.items():
        if not all(is_point_of(e, xty) for e in ms):
            raise PointTypeMismatch(f"context entry for {x} has points of the wrong type")

    def setup(eng: Engine) -> None:
        env = {}
        for x, (ms, xty) in phi.items():
            stream = MsVar(xty)
            stream.produced = True
            eng.unify_ms(stream, eng.closed_ms(ms, xty))
            env[x] = (stream, xty)
        eng.goal(m, eng.from_point(a, ty), env)

    return _solve(setup, fuel, max_runs, stats)


def icheck_stack(
    s: Stack,
    f: Point,
    ftype: Ty,
    nu: int,
    fuel: int = DEFAULT_FUEL,
    max_runs: int = DEFAULT_RUNS,
    stats: Optional[SearchStats] = None,
) -> Verdict:
    """Search for a derivation of ``s : f : F ⊢ ν``."""
    if not is_point_of(f, ftype):
        raise PointTypeMismatch(f"{point_str(f)} is not a point of the stack type")

    def setup(eng: Engine) -> None:
        eng.stack_goal(s, eng.from_point(f, ftype), nu)

    return _solve(setup, fuel, max_runs, stats)


def icheck_state(
    c: Command,
    nu: int,
    fuel: int = DEFAULT_FUEL,
    max_runs: int = DEFAULT_RUNS,
    stats: Optional[SearchStats] = None,
) -> Verdict:
    """Search for a derivation of ``⟨δ | M | s⟩ ⊢ ν``.

    Access words are read in reverse to obtain point words, since the
    machine consumes its word from the right.
    """
    e = stack_type(c.stack)

    def setup(eng: Engine) -> None:
        f = eng.fresh_point(e)
        eng.goal(c.code, act(rev(tuple(c.access)), f), {})
        eng.stack_goal(c.stack, f, nu)

    return _solve(setup, fuel, max_runs, stats)


def interp_ground(
    m: Term,
    nu_bound: int,
    fuel: int = DEFAULT_FUEL,
    max_runs: int = DEFAULT_RUNS,
) -> set[int]:
    """Values ``ν <= nu_bound`` for which ``⊢ m : ν`` has a derivation within ``fuel``."""
    out = set()
    for nu in range(nu_bound + 1):
        if icheck(None, m, GPoint((), nu), fuel, max_runs):
            out.add(nu)
    return out


__all__ = [
    "Engine",
    "PROVED",
    "PointTypeMismatch",
    "SearchStats",
    "UNKNOWN",
    "Verdict",
    "icheck",
    "icheck_stack",
    "icheck_state",
    "interp_ground",
]

