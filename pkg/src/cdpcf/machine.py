"""The non-deterministic Krivine machine over bit access words.

A command ``⟨δ | M | s⟩`` is stored with its access word as a tuple (letters
read right to left by the depth-``d`` operators), its code, and its stack as
a tuple of frames with the top frame first. Frames are generic in the letter
type so that :mod:`cdpcf.detmachine` can reuse them with writable cells.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Union

from .differential import dlet
from .syntax import (
    NAT,
    Abs,
    App,
    Arrow,
    DOp,
    Fix,
    Flip,
    If,
    Inj,
    Let,
    Multiset,
    Num,
    Pred,
    Proj,
    Succ,
    SumOp,
    Term,
    Ty,
    d_type,
    decompose_type,
    rcycle,
    subst,
    undiff_type,
    word_str,
)
from .typecheck import TypingError, infer

# ---------------------------------------------------------------------------
# Stacks


@dataclass(frozen=True)
class ArgFrame:
    term: Term


@dataclass(frozen=True)
class SuccFrame:
    pass


@dataclass(frozen=True)
class PredFrame:
    pass


@dataclass(frozen=True)
class IfFrame:
    word: tuple
    then: Term
    orelse: Term


@dataclass(frozen=True)
class LetFrame:
    word: tuple
    name: str
    body: Term


@dataclass(frozen=True)
class DiffFrame:
    letter: Any


Frame = Union[ArgFrame, SuccFrame, PredFrame, IfFrame, LetFrame, DiffFrame]
Stack = tuple  # of Frame, top first


@dataclass(frozen=True)
class Command:
    access: tuple
    code: Term
    stack: Stack = ()

    def __str__(self) -> str:
        from .printer import show

        return f"⟨{word_str(self.access)} | {show(self.code)} | {stack_str(self.stack)}⟩"


def letter_str(x: Any) -> str:
    return str(x)


def frame_str(f: Frame) -> str:
    from .printer import show

    if isinstance(f, ArgFrame):
        return f"Arg({show(f.term)})"
    if isinstance(f, SuccFrame):
        return "Succ"
    if isinstance(f, PredFrame):
        return "Pred"
    if isinstance(f, IfFrame):
        return f"If({word_str(f.word)}, {show(f.then)}, {show(f.orelse)})"
    if isinstance(f, LetFrame):
        return f"Let({word_str(f.word)}, {f.name}, {show(f.body)})"
    return f"D({letter_str(f.letter)})"


def stack_str(s: Stack) -> str:
    return "·".join(frame_str(f) for f in s) + ("·" if s else "") + "Empty"


class StackIllTyped(TypingError):
    def __init__(self, message: str, frame: Optional[Frame] = None) -> None:
        super().__init__(message)
        self.frame = frame


class IllTyped(Exception):
    pass


class NoRule(Exception):
    """A non-terminal command with no applicable transition."""


def stack_type(s: Stack) -> Ty:
    """The sharp type ``E`` such that ``s : E ⊢ ι``."""
    if not s:
        return NAT
    f, rest = s[0], s[1:]
    e = stack_type(rest)
    try:
        if isinstance(f, (SuccFrame, PredFrame)):
            if e != NAT:
                raise StackIllTyped("arithmetic frame above a non-ground stack", f)
            return NAT
        if isinstance(f, IfFrame):
            want = d_type(e, len(f.word))
            if infer({}, f.then) != want or infer({}, f.orelse) != want:
                raise StackIllTyped("if-frame branches do not match the stack", f)
            return NAT
        if isinstance(f, LetFrame):
            if infer({f.name: NAT}, f.body) != d_type(e, len(f.word)):
                raise StackIllTyped("let-frame body does not match the stack", f)
            return NAT
        if isinstance(f, ArgFrame):
            return Arrow(infer({}, f.term), e)
        if isinstance(f, DiffFrame):
            if not isinstance(e, Arrow) or decompose_type(e.dom)[0] < 1:
                raise StackIllTyped("differential frame needs a stack of type DA -> E", f)
            return Arrow(undiff_type(e.dom), e.cod)
    except StackIllTyped:
        raise
    except TypingError as exc:
        raise StackIllTyped(f"ill-typed frame term: {exc}", f) from exc
    raise TypeError(f"not a frame: {f!r}")


def command_well_typed(c: Command) -> bool:
    try:
        e = stack_type(c.stack)
        return infer({}, c.code) == d_type(e, len(c.access))
    except TypingError:
        return False


# ---------------------------------------------------------------------------
# Transitions


@dataclass(frozen=True)
class Terminal:
    value: int
    rule: str = "terminal"


@dataclass(frozen=True)
class Halt0:
    rule: str = "inj-zero"


@dataclass(frozen=True)
class Next:
    command: Any
    rule: str


@dataclass(frozen=True)
class Split:
    left: Command
    right: Command
    rule: str = "sum1"


StepResult = Union[Terminal, Halt0, Next, Split]


def _cut(w: tuple, d: int) -> tuple[tuple, tuple]:
    """Split ``w`` as ``(ε, δ)`` with ``|δ| = d``."""
    if d > len(w):
        raise IllTyped(f"access word {word_str(w)} shorter than depth {d}")
    return w[: len(w) - d], w[len(w) - d :]


def common_step(w: tuple, m: Term, s: Stack) -> Optional[tuple[tuple, Term, Stack, str]]:
    """Transitions that never inspect the value of an access letter.

    Returns ``(access, code, stack, rule)`` or ``None`` when the command is a
    numeral at the bottom, an injection, or a sum operator.
    """
    if isinstance(m, App):
        return w, m.fun, (ArgFrame(m.arg),) + s, "app"
    if isinstance(m, Abs):
        if not s:
            raise IllTyped("abstraction with an empty stack")
        top, rest = s[0], s[1:]
        if isinstance(top, ArgFrame):
            return w, subst(m.body, top.term, m.name), rest, "beta"
        if isinstance(top, DiffFrame):
            return w + (top.letter,), Abs(m.name, d_type(m.ann), dlet(m.name, m.body)), rest, "diff-lam"
        raise IllTyped("abstraction facing an arithmetic frame")
    if isinstance(m, DOp):
        if not w:
            raise IllTyped("D with an empty access word")
        return w[:-1], m.arg, (DiffFrame(w[-1]),) + s, "diff"
    if isinstance(m, Fix):
        return w, m.body, (ArgFrame(m),) + s, "fix"
    if isinstance(m, Succ):
        return w, m.arg, (SuccFrame(),) + s, "succ"
    if isinstance(m, Pred):
        return w, m.arg, (PredFrame(),) + s, "pred"
    if isinstance(m, If):
        eps, delta = _cut(w, m.d)
        return delta, m.cond, (IfFrame(eps, m.then, m.orelse),) + s, "if"
    if isinstance(m, Let):
        eps, delta = _cut(w, m.d)
        return delta, m.bound, (LetFrame(eps, m.name, m.body),) + s, "let"
    if isinstance(m, Proj):
        eps, delta = _cut(w, m.d)
        return eps + (m.i,) + delta, m.arg, s, "proj"
    if isinstance(m, Flip):
        eps, rest = _cut(w, m.d + m.l + 2)
        alpha, delta = rest[: m.l + 2], rest[m.l + 2 :]
        return eps + rcycle(alpha) + delta, m.arg, s, "flip"
    if isinstance(m, Num):
        if w:
            raise IllTyped("numeral with a non-empty access word")
        if not s:
            return None
        top, rest = s[0], s[1:]
        n = m.n
        if isinstance(top, SuccFrame):
            return (), Num(n + 1), rest, "num-succ"
        if isinstance(top, PredFrame):
            return (), Num(max(n - 1, 0)), rest, "num-pred"
        if isinstance(top, IfFrame):
            return top.word, top.then if n == 0 else top.orelse, rest, "num-if"
        if isinstance(top, LetFrame):
            return top.word, subst(top.body, m, top.name), rest, "num-let"
        raise IllTyped("numeral facing a function frame")
    if isinstance(m, (Inj, SumOp)):
        return None
    raise IllTyped(f"no transition for {type(m).__name__}")


def machine_step(c: Command) -> StepResult:
    w, m, s = c.access, c.code, c.stack
    r = common_step(w, m, s)
    if r is not None:
        return Next(Command(r[0], r[1], r[2]), r[3])
    if isinstance(m, Num):
        return Terminal(m.n)
    if isinstance(m, Inj):
        eps, rest = _cut(w, m.d + 1)
        j, delta = rest[0], rest[1:]
        if j != m.i:
            return Halt0()
        return Next(Command(eps + delta, m.arg, s), "inj")
    if isinstance(m, SumOp):
        eps, rest = _cut(w, m.d + 1)
        j, delta = rest[0], rest[1:]
        if j == 0:
            return Next(Command(eps + (0, 0) + delta, m.arg, s), "sum0")
        return Split(Command(eps + (1, 0) + delta, m.arg, s), Command(eps + (0, 1) + delta, m.arg, s))
    raise NoRule(str(c))


# ---------------------------------------------------------------------------
# Readback


def proj_word(w: Iterable[int], m: Term) -> Term:
    """``π_δ M`` with the last letter innermost."""
    for b in reversed(tuple(w)):
        m = Proj(b, 0, m)
    return m


def plug_stack(s: Stack, m: Term) -> Term:
    """``s[m]``: wrap ``m`` in the context associated with the stack."""
    for f in s:
        if isinstance(f, ArgFrame):
            m = App(m, f.term)
        elif isinstance(f, SuccFrame):
            m = Succ(0, m)
        elif isinstance(f, PredFrame):
            m = Pred(0, m)
        elif isinstance(f, IfFrame):
            ann = _safe_infer({}, f.then)
            m = proj_word(f.word, If(0, m, f.then, f.orelse, ann))
        elif isinstance(f, LetFrame):
            ann = _safe_infer({f.name: NAT}, f.body)
            m = proj_word(f.word, Let(0, f.name, m, f.body, ann))
        elif isinstance(f, DiffFrame):
            m = Proj(f.letter, 0, DOp(m))
        else:
            raise TypeError(f"not a frame: {f!r}")
    return m


def _safe_infer(ctx: dict, t: Term) -> Optional[Ty]:
    try:
        return infer(ctx, t)
    except TypingError:
        return None


def readback(c: Command) -> Term:
    return plug_stack(c.stack, proj_word(c.access, c.code))


# ---------------------------------------------------------------------------
# Multiset runs


@dataclass(frozen=True)
class BranchOutcome:
    branch: str
    kind: str  # "value", "zero", or "running"
    steps: int
    value: Optional[int] = None


@dataclass
class RunResult:
    results: Multiset
    residual: list[Command]
    steps: int
    exhausted: bool
    outcomes: list[BranchOutcome] = field(default_factory=list)

    def value(self) -> Optional[int]:
        """The collected numeral when exactly one was collected."""
        vals = self.results.support()
        return vals[0] if len(vals) == 1 and len(self.results) == 1 else None

    def successful_steps(self) -> Optional[int]:
        hits = [o.steps for o in self.outcomes if o.kind == "value"]
        return hits[0] if len(hits) == 1 else None


def trace_line(branch: str, c: Command, rule: str) -> str:
    return f"{branch} | {word_str(c.access)} | {type(c.code).__name__} | {rule} | {len(c.stack)}"


def msrs_run(
    commands: Iterable[Command],
    fuel: int = 10_000,
    trace: Optional[Callable[[str], None]] = None,
    on_step: Optional[Callable[[Command, StepResult], None]] = None,
) -> RunResult:
    """Drive every branch breadth-first until all halt or ``fuel`` steps are spent."""
    queue = deque((str(k), c, 0) for k, c in enumerate(commands))
    results: list[int] = []
    outcomes: list[BranchOutcome] = []
    used = 0
    while queue:
        branch, c, steps = queue.popleft()
        if isinstance(c.code, Num) and not c.access and not c.stack:
            results.append(c.code.n)
            outcomes.append(BranchOutcome(branch, "value", steps, c.code.n))
            continue
        if used >= fuel:
            queue.appendleft((branch, c, steps))
            break
        r = machine_step(c)
        if on_step is not None:
            on_step(c, r)
        used += 1
        if trace:
            trace(trace_line(branch, c, r.rule))
        if isinstance(r, Halt0):
            outcomes.append(BranchOutcome(branch, "zero", steps + 1))
        elif isinstance(r, Next):
            queue.append((branch, r.command, steps + 1))
        else:
            queue.append((branch + ".0", r.left, steps + 1))
            queue.append((branch + ".1", r.right, steps + 1))
    residual = [c for _, c, _ in queue]
    outcomes.extend(BranchOutcome(b, "running", k) for b, _, k in queue)
    return RunResult(Multiset(results), residual, used, bool(queue), outcomes)


def run_term(m: Term, fuel: int = 10_000, **kw: Any) -> RunResult:
    return msrs_run([Command((), m, ())], fuel, **kw)
