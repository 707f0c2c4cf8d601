"""Executable versions of the machine correctness properties.

These are shared by the test suite and the experiment scripts: each check
takes one machine step and reports whether the property holds for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .detmachine import DetNext, DetResult, DetState, DetTerminal, dwords_expand
from .machine import Command, Halt0, Next, Split, StepResult, Terminal, machine_step, readback
from .rewriting import Reach, reduces_to
from .syntax import NAT, Plus, Term, Zero


def step_target(r: StepResult) -> Optional[Term]:
    """The term a machine step should reduce to, or ``None`` for terminal commands."""
    if isinstance(r, Next):
        return readback(r.command)
    if isinstance(r, Split):
        return Plus(readback(r.left), readback(r.right))
    if isinstance(r, Halt0):
        return Zero(NAT)
    return None


def simulates(c: Command, r: StepResult, fuel: int = 8, max_states: int = 20_000) -> Optional[Reach]:
    """``readback(c) →* readback(r)`` within ``fuel`` rewriting steps."""
    target = step_target(r)
    if target is None:
        return None
    return reduces_to(readback(c), target, fuel, max_states=max_states)


def _successors(c: Command) -> Optional[set[Command]]:
    """Non-zero successors of ``c``; ``None`` for terminal commands."""
    r = machine_step(c)
    if isinstance(r, Terminal):
        return None
    if isinstance(r, Halt0):
        return set()
    if isinstance(r, Next):
        return {r.command}
    return {r.left, r.right}


@dataclass(frozen=True)
class DwordsCheck:
    forward: bool
    backward: bool

    def __bool__(self) -> bool:
        return self.forward and self.backward


def dwords_simulation(g: DetState, r: DetResult) -> DwordsCheck:
    """Compare one deterministic step with the steps of its instantiations.

    Forward: every instantiation of the next state is reached from some
    instantiation of ``g``. Backward: every non-zero step of an instantiation
    of ``g`` lands in an instantiation of the next state.
    """
    before = dwords_expand(g)
    succ = [_successors(c) for c in before]
    if isinstance(r, DetTerminal):
        ok = all(s is None for s in succ)
        return DwordsCheck(ok, ok)
    if any(s is None for s in succ):
        return DwordsCheck(False, False)
    reached: set[Command] = set().union(*succ) if succ else set()
    if not isinstance(r, DetNext):
        # zero halt or stuck: every instantiation must vanish
        return DwordsCheck(True, not reached)
    after = dwords_expand(r.state)
    return DwordsCheck(after <= reached, reached <= after)
