"""Term rewriting: redex enumeration under evaluation contexts, a
deterministic strategy, multiset rewriting and bounded reachability."""

from __future__ import annotations

import heapq
import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional

from .differential import dlet, linear_positions
from .syntax import (
    NAT,
    Abs,
    App,
    DOp,
    Fix,
    Flip,
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
    Zero,
    d_type,
    label_fields,
    nameless,
    replace_at,
    size,
    subst,
    subterm,
    summands,
    undiff_type,
)
from .typecheck import TyCtx, type_of

Path = tuple[int, ...]

# Rules the deterministic strategy never fires: each undoes another rule.
STRATEGY_EXCLUDED = frozenset({"proj-proj-out", "diff-proj"})

# How far below the focus root the first reachability pass looks.
FOCUS_DEPTH = 16


@dataclass(frozen=True)
class Redex:
    path: Path
    rule: str
    result: Term

    def apply(self, m: Term) -> Term:
        return replace_at(m, self.path, self.result)


def _undiff(a):
    return None if a is None else undiff_type(a)


def _proj_tower(t: Proj) -> Optional[Term]:
    """``π_{i_{l+1}} .. π_{i_0} c^{d,l} M -> π_{i_0} π_{i_{l+1}} .. π_{i_1} M`` rooted at ``t``."""
    d = t.d
    bits = []
    u: Term = t
    while isinstance(u, Proj) and u.d == d:
        bits.append(u.i)
        u = u.arg
        if isinstance(u, Flip) and u.d == d and u.l + 2 == len(bits):
            order = bits[-1:] + bits[:-1]
            out = u.arg
            for b in reversed(order):
                out = Proj(b, d, out)
            return out
    return None


def rules_at(t: Term, ctx: TyCtx) -> list[tuple[str, Term]]:
    """All ``(rule, result)`` pairs for a redex rooted exactly at ``t``."""
    out: list[tuple[str, Term]] = []
    if linear_positions(t):
        head = t.children()[0]
        rest = list(t.children()[1:])
        if isinstance(head, Zero):
            out.append(("lin-zero", Zero(type_of(ctx, t))))
        elif isinstance(head, Plus):
            out.append(
                ("lin-sum", Plus(t.with_children([head.left] + rest), t.with_children([head.right] + rest)))
            )
    if isinstance(t, App) and isinstance(t.fun, Abs):
        out.append(("beta", subst(t.fun.body, t.arg, t.fun.name)))
    elif isinstance(t, DOp):
        a = t.arg
        if isinstance(a, Abs):
            out.append(("diff-abs", Abs(a.name, d_type(a.ann), dlet(a.name, a.body))))
        elif isinstance(a, Proj):
            out.append(("diff-proj", Proj(a.i, a.d + 1, DOp(a.arg))))
    elif isinstance(t, Fix):
        out.append(("fix", App(t.body, t)))
    elif isinstance(t, Succ) and t.d == 0 and isinstance(t.arg, Num):
        out.append(("succ", Num(t.arg.n + 1)))
    elif isinstance(t, Pred) and t.d == 0 and isinstance(t.arg, Num):
        out.append(("pred-zero" if t.arg.n == 0 else "pred-succ", Num(max(t.arg.n - 1, 0))))
    elif isinstance(t, If) and t.d == 0 and isinstance(t.cond, Num):
        out.append(("if-zero", t.then) if t.cond.n == 0 else ("if-succ", t.orelse))
    elif isinstance(t, Let) and t.d == 0 and isinstance(t.bound, Num):
        out.append(("let", subst(t.body, t.bound, t.name)))
    elif isinstance(t, Proj):
        out.extend(_proj_rules(t, ctx))
    return out


def _proj_rules(t: Proj, ctx: TyCtx) -> list[tuple[str, Term]]:
    i, d, a = t.i, t.d, t.arg
    out: list[tuple[str, Term]] = []
    tower = _proj_tower(t)
    if tower is not None:
        out.append(("proj-flip-tower", tower))
    if isinstance(a, Abs):
        out.append(("proj-abs", Abs(a.name, a.ann, Proj(i, d, a.body))))
    elif isinstance(a, App):
        out.append(("proj-app", App(Proj(i, d, a.fun), a.arg)))
    elif isinstance(a, (Succ, Pred)) and d < a.d:
        rule = "proj-succ" if isinstance(a, Succ) else "proj-pred"
        out.append((rule, type(a)(a.d - 1, Proj(i, d, a.arg))))
    elif isinstance(a, If):
        if d < a.d:
            out.append(("proj-if-in", If(a.d - 1, Proj(i, d, a.cond), a.then, a.orelse, a.ann)))
        else:
            k = d - a.d
            out.append(
                ("proj-if-out", If(a.d, a.cond, Proj(i, k, a.then), Proj(i, k, a.orelse), _undiff(a.ann)))
            )
    elif isinstance(a, Let):
        if d < a.d:
            out.append(("proj-let-in", Let(a.d - 1, a.name, Proj(i, d, a.bound), a.body, a.ann)))
        else:
            out.append(
                ("proj-let-out", Let(a.d, a.name, a.bound, Proj(i, d - a.d, a.body), _undiff(a.ann)))
            )
    elif isinstance(a, SumOp):
        m = a.arg
        if d == a.d:
            if i == 0:
                out.append(("proj0-sum", Proj(0, d, Proj(0, d, m))))
            else:
                out.append(("proj1-sum", Plus(Proj(1, d, Proj(0, d, m)), Proj(0, d, Proj(1, d, m)))))
        elif d < a.d:
            out.append(("proj-sum-in", SumOp(a.d - 1, Proj(i, d, m))))
        else:
            out.append(("proj-sum-out", SumOp(a.d, Proj(i, d + 1, m))))
    elif isinstance(a, Flip):
        if d < a.d:
            out.append(("proj-flip-in", Flip(a.d - 1, a.l, Proj(i, d, a.arg))))
        elif a.d + a.l + 2 <= d:
            out.append(("proj-flip-out", Flip(a.d, a.l, Proj(i, d, a.arg))))
    elif isinstance(a, Inj):
        m = a.arg
        if d == a.d:
            if i == a.i:
                out.append(("proj-inj-eq", m))
            else:
                out.append(("proj-inj-ne", Zero(type_of(ctx, m))))
        elif d < a.d:
            out.append(("proj-inj-in", Inj(a.i, a.d - 1, Proj(i, d, m))))
        else:
            out.append(("proj-inj-out", Inj(a.i, a.d, Proj(i, d - 1, m))))
    elif isinstance(a, Proj):
        if d < a.d:
            out.append(("proj-proj-in", Proj(a.i, a.d - 1, Proj(i, d, a.arg))))
        else:
            out.append(("proj-proj-out", Proj(a.i, a.d, Proj(i, d + 1, a.arg))))
    elif isinstance(a, DOp) and d >= 1:
        out.append(("proj-diff", DOp(Proj(i, d - 1, a.arg))))
    return out


def _positions(m: Term, ctx: dict, path: Path = (), limit: Optional[int] = None) -> Iterator[tuple[Path, Term, dict]]:
    """Evaluation-context positions in pre-order (outermost, then left to right),
    optionally only down to path length ``limit``."""
    yield path, m, ctx
    if isinstance(m, (Plus, Zero, Hole)) or (limit is not None and len(path) >= limit):
        return
    for k, c in enumerate(m.children()):
        inner = ctx
        if isinstance(m, Abs):
            inner = {**ctx, m.name: m.ann}
        elif isinstance(m, Let) and k == 1:
            inner = {**ctx, m.name: NAT}
        yield from _positions(c, inner, path + (k,), limit)


def enumerate_redexes(m: Term, ctx: Optional[TyCtx] = None) -> list[Redex]:
    out = []
    for path, t, c in _positions(m, dict(ctx or {})):
        for rule, res in rules_at(t, c):
            out.append(Redex(path, rule, res))
    return out


def strategy_redex(m: Term, ctx: Optional[TyCtx] = None) -> Optional[Redex]:
    """The leftmost-outermost redex, skipping the two reverse commutation rules."""
    for path, t, c in _positions(m, dict(ctx or {})):
        for rule, res in rules_at(t, c):
            if rule not in STRATEGY_EXCLUDED:
                return Redex(path, rule, res)
    return None


def step_strategy(m: Term, ctx: Optional[TyCtx] = None) -> Optional[Term]:
    r = strategy_redex(m, ctx)
    return None if r is None else r.apply(m)


def lin_step(m: Term, ctx: Optional[TyCtx] = None) -> Optional[Term]:
    """One linear-reduction step, outermost-leftmost."""
    for path, t, c in _positions(m, dict(ctx or {})):
        for rule, res in rules_at(t, c):
            if rule in ("lin-zero", "lin-sum"):
                return replace_at(m, path, res)
    return None


def normalize(m: Term, max_steps: int = 10_000, ctx: Optional[TyCtx] = None) -> tuple[Term, int]:
    """Iterate :func:`step_strategy`; returns the last term and the step count."""
    for k in range(max_steps):
        nxt = step_strategy(m, ctx)
        if nxt is None:
            return m, k
        m = nxt
    return m, max_steps


# ---------------------------------------------------------------------------
# Multiset rewriting


def term_order_key(m: Term) -> tuple[int, str]:
    from .printer import show

    return size(m), show(m)


def msrs_step(s: Multiset, ctx: Optional[TyCtx] = None) -> Optional[Multiset]:
    """One step of the multiset system: drop a zero, split a sum, or reduce an element."""
    elems = sorted(s.support(), key=term_order_key)
    for e in elems:
        if isinstance(e, Zero):
            return s.remove(e)
    for e in elems:
        if isinstance(e, Plus):
            return s.remove(e) + Multiset((e.left, e.right))
    for e in elems:
        nxt = step_strategy(e, ctx)
        if nxt is not None:
            return s.remove(e).add(nxt)
    return None


# ---------------------------------------------------------------------------
# Bounded reachability


@dataclass(frozen=True)
class Reach:
    """Outcome of :func:`reduces_to`; truthy iff the target was found."""

    found: bool
    exhausted: bool
    steps: Optional[int] = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.found


def _sum_key(terms) -> frozenset:
    return frozenset(Counter(nameless(t) for t in terms).items())


def _is_linear_path(m: Term, path: Path) -> bool:
    t = m
    for k in path:
        if k not in linear_positions(t):
            return False
        t = t.children()[k]
    return True


def _positions_below(m: Term, ctx: dict, root: Path, depth: Optional[int] = None) -> Iterator[tuple[Path, Term, dict]]:
    """Positions of the subterm at ``root`` (all of ``m`` if ``root`` does not fit),
    at most ``depth`` levels below it."""
    t, inner = m, ctx
    for k in root:
        kids = t.children()
        if isinstance(t, (Plus, Zero, Hole)) or k >= len(kids):
            t, inner, root = m, ctx, ()
            break
        if isinstance(t, Abs):
            inner = {**inner, t.name: t.ann}
        elif isinstance(t, Let) and k == 1:
            inner = {**inner, t.name: NAT}
        t = kids[k]
    yield from _positions(t, inner, tuple(root), None if depth is None else len(root) + depth)


def _successors(elem: Term, ctx: dict, root: Path = (), depth: Optional[int] = None) -> Iterator[tuple[list[Term], str]]:
    """Each successor is the list of summands replacing ``elem``, with the rule used."""
    for path, t, c in _positions_below(elem, ctx, root, depth):
        for rule, res in rules_at(t, c):
            r = Redex(path, rule, res)
            yield summands(r.apply(elem)), rule
            # A zero or sum produced under a purely linear context lifts to the
            # top in height-many linear steps; offer the lifted result directly.
            if r.path and isinstance(r.result, (Zero, Plus)) and _is_linear_path(elem, r.path):
                if isinstance(r.result, Zero):
                    yield [], rule
                else:
                    yield [replace_at(elem, r.path, s) for s in summands(r.result)], rule


def _diff_path(a: Term, b: Term) -> Path:
    """Path to the smallest subterm outside of which ``a`` and ``b`` coincide."""
    path: list[int] = []
    while type(a) is type(b) and a != b:
        ka, kb = a.children(), b.children()
        if len(ka) != len(kb) or a.with_children(kb) != b:
            break
        diff = [k for k in range(len(ka)) if ka[k] != kb[k]]
        if len(diff) != 1:
            break
        path.append(diff[0])
        a, b = ka[diff[0]], kb[diff[0]]
    return tuple(path)


def _subterm_bag(terms) -> Counter:
    """Bag of structural subterm keys; a heuristic, so names are not normalised."""
    bag: Counter = Counter()

    def go(t: Term) -> int:
        key = hash((type(t).__name__, *(getattr(t, f) for f in label_fields(type(t))), *(go(c) for c in t.children())))
        bag[key] += 1
        return key

    for t in terms:
        go(t)
    return bag


def _distance(state: tuple, target_bag: Counter) -> int:
    bag = _subterm_bag(state)
    return sum(((bag - target_bag) + (target_bag - bag)).values())


def reduces_to(
    m: Term,
    n: Term,
    fuel: int,
    ctx: Optional[TyCtx] = None,
    max_states: int = 20_000,
    focus_slack: Optional[int] = 3,
) -> Reach:
    """Is ``n`` reachable from ``m`` in at most ``fuel`` rewriting steps?

    States are multisets of summands (zeros dropped, sums split), compared
    with the target up to renaming of bound variables. Search is best-first
    on a subterm-bag distance; ``max_states`` caps the explored states, and
    hitting the cap is reported through ``exhausted``.

    When ``m`` and ``n`` share a large common context, a first pass only
    fires redexes inside the differing subterm (widened by ``focus_slack``
    levels, and at most ``FOCUS_DEPTH`` levels below it). Anything it finds
    is a genuine reduction; if it finds nothing the unrestricted search
    runs. Each pass gets its own ``max_states`` budget. ``focus_slack=None`` disables the pass.
    """
    ctx = dict(ctx or {})
    if focus_slack is not None:
        root = _diff_path(m, n)
        root = root[: max(0, len(root) - focus_slack)]
        # Projection towers rewrite as a whole; widen the focus past them.
        while root and isinstance(subterm(m, root[:-1]), Proj):
            root = root[:-1]
        hit = _search(m, n, fuel, ctx, max_states, root, FOCUS_DEPTH)
        if hit.found:
            return hit
    return _search(m, n, fuel, ctx, max_states, (), None)


def _search(m: Term, n: Term, fuel: int, ctx: dict, max_states: int, root: Path, below: Optional[int]) -> Reach:
    target = _sum_key(summands(n))
    target_bag = _subterm_bag(summands(n))
    start = tuple(summands(m))
    if _sum_key(start) == target:
        return Reach(True, False, 0, 1)
    seen = {_sum_key(start)}
    tie = itertools.count()
    # Ties go first to paths using fewer outward projection commutations
    # (they mostly shuffle projection towers), then to deeper states: long chains of small
    # moves barely change the distance.
    heap = [(_distance(start, target_bag), 0, 0, next(tie), start)]
    explored = 0
    capped = False
    while heap:
        _, detours, neg_depth, _, state = heapq.heappop(heap)
        depth = -neg_depth
        explored += 1
        if explored > max_states:
            capped = True
            break
        if depth >= fuel:
            capped = True
            continue
        for idx, elem in enumerate(state):
            rest = state[:idx] + state[idx + 1 :]
            for repl, rule in _successors(elem, ctx, root, below):
                nxt = rest + tuple(repl)
                key = _sum_key(nxt)
                if key == target:
                    return Reach(True, False, depth + 1, explored)
                if key in seen:
                    continue
                seen.add(key)
                cost = detours + (rule == "proj-proj-out")
                heapq.heappush(heap, (_distance(nxt, target_bag), cost, -(depth + 1), next(tie), nxt))
    return Reach(False, capped, None, explored)
