"""The deterministic machine with writable cells ``W(n)`` in access words."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterator, Optional, Union

from .machine import (
    ArgFrame,
    Command,
    DiffFrame,
    IfFrame,
    LetFrame,
    Stack,
    _cut,
    common_step,
    frame_str,
)
from .syntax import Inj, Num, SumOp, Term, word_str


@dataclass(frozen=True)
class Cell:
    n: int

    def __str__(self) -> str:
        return f"W{self.n}"


def ext_word_str(w: tuple) -> str:
    if not w:
        return "ε"
    return " ".join(str(x) for x in w) if any(isinstance(x, Cell) for x in w) else word_str(w)


@dataclass(frozen=True)
class DetState:
    access: tuple
    counter: int
    code: Term
    stack: Stack = ()

    def __str__(self) -> str:
        from .printer import show

        frames = "·".join(_ext_frame_str(f) for f in self.stack) + ("·" if self.stack else "") + "Empty"
        return f"⟨{ext_word_str(self.access)}, {self.counter} | {show(self.code)} | {frames}⟩"


def _ext_frame_str(f: Any) -> str:
    if isinstance(f, (IfFrame, LetFrame)):
        text = frame_str(f)
        return text.replace(word_str(f.word), ext_word_str(f.word), 1)
    return frame_str(f)


class IllFormed(Exception):
    pass


# ---------------------------------------------------------------------------
# Letter positions
#
# A state's letters are visited in a fixed order: the access word, then each
# frame's word (or its single letter for differential frames), top first.


def letters(access: tuple, stack: Stack) -> list:
    out = list(access)
    for f in stack:
        if isinstance(f, (IfFrame, LetFrame)):
            out.extend(f.word)
        elif isinstance(f, DiffFrame):
            out.append(f.letter)
    return out


def with_letters(access: tuple, stack: Stack, new: list) -> tuple[tuple, Stack]:
    """Rebuild ``(access, stack)`` with the letters replaced by ``new`` in order."""
    it = iter(new)
    acc = tuple(next(it) for _ in access)
    frames = []
    for f in stack:
        if isinstance(f, (IfFrame, LetFrame)):
            f = replace(f, word=tuple(next(it) for _ in f.word))
        elif isinstance(f, DiffFrame):
            f = DiffFrame(next(it))
        frames.append(f)
    return acc, tuple(frames)


def cell_names(access: tuple, stack: Stack) -> set[int]:
    return {x.n for x in letters(access, stack) if isinstance(x, Cell)}


def well_formed(g: DetState) -> bool:
    return all(n < g.counter for n in cell_names(g.access, g.stack))


def _zero_cell(access: tuple, stack: Stack, n: int) -> tuple[tuple, Stack]:
    new = [0 if x == Cell(n) else x for x in letters(access, stack)]
    return with_letters(access, stack, new)


# ---------------------------------------------------------------------------
# Transitions


@dataclass(frozen=True)
class DetNext:
    state: DetState
    rule: str


@dataclass(frozen=True)
class DetTerminal:
    value: int
    counter: int


@dataclass(frozen=True)
class ZeroHalt:
    rule: str = "inj-zero"


@dataclass(frozen=True)
class Stuck:
    rule: str = "inj0-last-cell"


DetResult = Union[DetNext, DetTerminal, ZeroHalt, Stuck]


def det_step(g: DetState) -> DetResult:
    if not well_formed(g):
        raise IllFormed(f"counter {g.counter} does not exceed every cell name")
    w, k, m, s = g.access, g.counter, g.code, g.stack
    r = common_step(w, m, s)
    if r is not None:
        return DetNext(DetState(r[0], k, r[1], r[2]), r[3])
    if isinstance(m, Num):
        return DetTerminal(m.n, k)
    eps, rest = _cut(w, m.d + 1)  # type: ignore[union-attr]
    u, delta = rest[0], rest[1:]
    if isinstance(m, Inj):
        if isinstance(u, Cell):
            if m.i == 0:
                if u.n not in cell_names(eps + delta, s):
                    return Stuck()
                return DetNext(DetState(eps + delta, k, m.arg, s), "inj0-cell")
            acc, st = _zero_cell(eps + delta, s, u.n)
            return DetNext(DetState(acc, k, m.arg, st), "inj1-cell")
        if u != m.i:
            return ZeroHalt()
        return DetNext(DetState(eps + delta, k, m.arg, s), "inj")
    if isinstance(m, SumOp):
        if isinstance(u, Cell):
            return DetNext(DetState(eps + (u, u) + delta, k, m.arg, s), "sum-cell")
        if u == 0:
            return DetNext(DetState(eps + (0, 0) + delta, k, m.arg, s), "sum0")
        return DetNext(DetState(eps + (Cell(k), Cell(k)) + delta, k + 1, m.arg, s), "sum1-cell")
    raise AssertionError(f"unhandled code {type(m).__name__}")


def det_trace_line(g: DetState, rule: str) -> str:
    return (
        f"0 | {ext_word_str(g.access)} | {type(g.code).__name__} | {rule} | "
        f"{len(g.stack)} | {g.counter}"
    )


@dataclass
class DetRun:
    outcome: Optional[int]
    steps: int
    halt: str  # "value", "zero", "stuck" or "timeout"
    final: Optional[DetState] = None

    @property
    def exhausted(self) -> bool:
        return self.halt == "timeout"


def det_run(
    m: Term,
    fuel: int = 10_000,
    trace: Optional[Callable[[str], None]] = None,
    on_step: Optional[Callable[[DetState, DetResult], None]] = None,
) -> DetRun:
    g = DetState((), 0, m, ())
    for steps in range(fuel + 1):
        r = det_step(g)
        if on_step is not None:
            on_step(g, r)
        if isinstance(r, DetTerminal):
            return DetRun(r.value, steps, "value", g)
        if steps == fuel:
            break
        if trace:
            trace(det_trace_line(g, getattr(r, "rule", "")))
        if isinstance(r, ZeroHalt):
            return DetRun(None, steps + 1, "zero", g)
        if isinstance(r, Stuck):
            return DetRun(None, steps + 1, "stuck", g)
        g = r.state
    return DetRun(None, fuel, "timeout", g)


# ---------------------------------------------------------------------------
# Dwords and Nwcell


class ShapeMismatch(Exception):
    pass


def dwords_expand(g: DetState) -> set[Command]:
    """All bit instantiations where each cell name carries exactly one 1."""
    lets = letters(g.access, g.stack)
    by_name: dict[int, list[int]] = {}
    for pos, x in enumerate(lets):
        if isinstance(x, Cell):
            by_name.setdefault(x.n, []).append(pos)
    names = sorted(by_name)
    out = set()
    for choice in itertools.product(*(by_name[n] for n in names)):
        ones = set(choice)
        new = [(1 if p in ones else 0) if isinstance(x, Cell) else x for p, x in enumerate(lets)]
        acc, st = with_letters(g.access, g.stack, new)
        out.add(Command(acc, g.code, st))
    return out


def _shape(access: tuple, stack: Stack) -> tuple:
    def frame_shape(f: Any) -> Any:
        if isinstance(f, (IfFrame, LetFrame)):
            return (type(f), len(f.word))
        return type(f)

    return len(access), tuple(frame_shape(f) for f in stack)


def nwcell(n: int, c: Command, g: DetState) -> int:
    """Sum of the bits of ``c`` at the positions where ``g`` holds ``W(n)``."""
    if _shape(c.access, c.stack) != _shape(g.access, g.stack):
        raise ShapeMismatch("command and state have different shapes")
    total = 0
    for x, y in zip(letters(c.access, c.stack), letters(g.access, g.stack)):
        if y == Cell(n):
            if isinstance(x, Cell):
                raise ShapeMismatch("command letters must be bits")
            total += x
    return total


def iter_det_states(m: Term, fuel: int = 10_000) -> Iterator[tuple[DetState, DetResult]]:
    """Yield every ``(state, result)`` pair of a deterministic run."""
    g = DetState((), 0, m, ())
    for _ in range(fuel):
        r = det_step(g)
        yield g, r
        if not isinstance(r, DetNext):
            return
        g = r.state


__all__ = [
    "ArgFrame",
    "Cell",
    "DetNext",
    "DetRun",
    "DetState",
    "DetTerminal",
    "IllFormed",
    "ShapeMismatch",
    "Stuck",
    "ZeroHalt",
    "det_run",
    "det_step",
    "dwords_expand",
    "iter_det_states",
    "nwcell",
]
