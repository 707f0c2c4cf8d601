"""Points of the relational model: ground points ``(word, ν)`` and arrow
points ``(multiset of argument points, result point)``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..syntax import Ground, Multiset, Ty, word_str


@dataclass(frozen=True)
class GPoint:
    word: tuple[int, ...]
    nu: int


@dataclass(frozen=True)
class APoint:
    args: Multiset
    res: "Point"


Point = Union[GPoint, APoint]


def point_act(delta: tuple[int, ...], a: Point) -> Point:
    """``δ·a``: prepend ``δ`` to the word at the ground leaf."""
    if isinstance(a, GPoint):
        return GPoint(tuple(delta) + a.word, a.nu)
    return APoint(a.args, point_act(delta, a.res))


def point_decompose(a: Point) -> tuple[tuple[int, ...], Point]:
    """``(δ, f)`` with ``a = δ·f`` and ``f`` a point of the sharp core."""
    if isinstance(a, GPoint):
        return a.word, GPoint((), a.nu)
    delta, f = point_decompose(a.res)
    return delta, APoint(a.args, f)


def is_point_of(a: Point, ty: Ty) -> bool:
    if isinstance(ty, Ground):
        return isinstance(a, GPoint) and len(a.word) == ty.d and all(b in (0, 1) for b in a.word) and a.nu >= 0
    return (
        isinstance(a, APoint)
        and all(is_point_of(x, ty.dom) for x in a.args)
        and is_point_of(a.res, ty.cod)
    )


def sdiff_expand(r: int, m: Multiset) -> set[Multiset]:
    """All ``m'`` with ``(m', (r, m))`` in the differential relation."""
    tag0 = m.map(lambda a: point_act((0,), a))
    if r == 0:
        return {tag0}
    out = set()
    for a in m.support():
        rest = m.remove(a).map(lambda b: point_act((0,), b))
        out.add(rest.add(point_act((1,), a)))
    return out


def sdiff_split(r: int, m: Multiset, parts: list[Multiset]) -> set[tuple[tuple[int, ...], tuple[Multiset, ...]]]:
    """Decompositions ``r = Σ r_i`` and ``m' = Σ m'_i`` compatible with ``m = Σ parts``."""
    total = Multiset()
    for p in parts:
        total = total + p
    if total != m:
        raise ValueError("parts do not sum to m")
    k = len(parts)
    if r == 0:
        return {((0,) * k, tuple(next(iter(sdiff_expand(0, p))) for p in parts))}
    out = set()
    zeros = [next(iter(sdiff_expand(0, p))) for p in parts]
    for i, p in enumerate(parts):
        for tagged in sdiff_expand(1, p):
            bits = tuple(1 if j == i else 0 for j in range(k))
            out.add((bits, tuple(tagged if j == i else zeros[j] for j in range(k))))
    return out


def zero_point(ty: Ty, nu: int = 0) -> Point:
    """A canonical point of ``ty``: all-zero words, empty argument multisets."""
    if isinstance(ty, Ground):
        return GPoint((0,) * ty.d, nu)
    return APoint(Multiset(), zero_point(ty.cod, nu))


def point_type_check(a: Point, ty: Ty) -> None:
    if not is_point_of(a, ty):
        from .search import PointTypeMismatch

        raise PointTypeMismatch(f"{point_str(a)} is not a point of the given type")


# ---------------------------------------------------------------------------
# Text format


def point_str(a: Point) -> str:
    if isinstance(a, GPoint):
        return str(a.nu) if not a.word else f"<{word_str(a.word)}>·{a.nu}"
    elems = sorted(point_str(x) for x in a.args)
    return f"([{', '.join(elems)}], {point_str(a.res)})"


_PTOK = re.compile(r"\s*(<[01]*>|ε|·|\.|\d+|[()\[\],])")


class PointSyntaxError(ValueError):
    pass


def parse_point(text: str) -> Point:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _PTOK.match(text, pos)
        if m is None:
            raise PointSyntaxError(f"bad point syntax at offset {pos}: {text[pos:pos + 10]!r}")
        toks.append(m.group(1))
        pos = m.end()
    toks.append("")
    i = 0

    def peek() -> str:
        return toks[i]

    def take(expected: str | None = None) -> str:
        nonlocal i
        t = toks[i]
        if expected is not None and t != expected:
            raise PointSyntaxError(f"expected {expected!r}, found {t!r}")
        i += 1
        return t

    def point() -> Point:
        t = peek()
        if t.startswith("<") or t == "ε":
            take()
            word = tuple(int(c) for c in t[1:-1]) if t != "ε" else ()
            if peek() in ("·", "."):
                take()
            return point_act(word, point())
        if t.isdigit():
            take()
            return GPoint((), int(t))
        if t == "(":
            take()
            if peek() == "[":
                take()
                elems = []
                if peek() != "]":
                    elems.append(point())
                    while peek() == ",":
                        take()
                        elems.append(point())
                take("]")
                take(",")
                res = point()
                take(")")
                return APoint(Multiset(elems), res)
            inner = point()
            take(")")
            return inner
        raise PointSyntaxError(f"unexpected token {t!r}")

    out = point()
    if peek() != "":
        raise PointSyntaxError(f"trailing input {peek()!r}")
    return out

