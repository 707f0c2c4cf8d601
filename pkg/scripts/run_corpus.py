"""Run every corpus program on both machines and the relational interpreter.

Prints one row per program: expected value, deterministic outcome and step
count, multiset outcome and successful-branch step count, and the values the
relational search proves (up to the machine value plus one).
"""

from __future__ import annotations

import argparse
import glob
import os
import time
from dataclasses import dataclass

from cdpcf.deep import run_deep
from cdpcf.detmachine import det_run
from cdpcf.machine import run_term
from cdpcf.parser import load
from cdpcf.rel import interp_ground
from cdpcf.syntax import NAT
from cdpcf.typecheck import elaborate, infer

CORPUS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")


@dataclass
class Config:
    corpus: str = CORPUS
    fuel: int = 10_000
    interp: bool = True


def _show(v):
    return "-" if v is None else str(v)


def main(cfg: Config) -> None:
    print(f"{'program':<16} {'expect':>8} {'det':>6} {'steps':>6} {'msrs':>6} {'steps':>6} {'interp':>8} {'time':>6}")
    for path in sorted(glob.glob(os.path.join(cfg.corpus, "*.cdpcf"))):
        name = os.path.basename(path)[: -len(".cdpcf")]
        prog = load(path)
        term = elaborate(prog.term)
        if infer({}, term) != NAT:
            print(f"{name:<16} (not a ground program, skipped)")
            continue
        t0 = time.perf_counter()
        d = det_run(term, fuel=cfg.fuel)
        n = run_term(term, fuel=cfg.fuel)
        msrs = "timeout" if n.exhausted else _show(n.value())
        det = "timeout" if d.exhausted else _show(d.outcome)
        interp = ""
        if cfg.interp:
            bound = (d.outcome if d.outcome is not None else 3) + 1
            interp = "{" + ",".join(map(str, sorted(interp_ground(term, bound)))) + "}"
        print(
            f"{name:<16} {_show(prog.expected):>8} {det:>6} {d.steps:>6} {msrs:>6} "
            f"{_show(n.successful_steps()):>6} {interp:>8} {time.perf_counter() - t0:>5.1f}s"
        )


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", default=CORPUS)
    ap.add_argument("--fuel", type=int, default=10_000)
    ap.add_argument("--no-interp", action="store_true")
    a = ap.parse_args()
    run_deep(main, Config(a.corpus, a.fuel, not a.no_interp))
