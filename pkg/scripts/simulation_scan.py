"""Check every multiset machine step against bounded rewriting.

For each step ``c -> r`` of a program's run, search for a rewriting sequence
from the readback of ``c`` to the readback of ``r`` within ``fuel`` steps, and
report the steps where none is found together with the rule and the length of
the access word. Deep access words need long sequences: a ``diff-lam`` step
with word length ``k`` needs at least ``2k + 1`` rewriting steps.
"""

from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from cdpcf.checks import simulates
from cdpcf.deep import run_deep
from cdpcf.machine import run_term
from cdpcf.parser import load
from cdpcf.typecheck import elaborate


@dataclass
class Config:
    files: list[str]
    fuel: int = 8
    max_states: int = 2_000
    run_fuel: int = 10_000
    verbose: bool = False


def scan(path: str, cfg: Config) -> Counter:
    term = elaborate(load(path).term)
    steps = []
    run_term(term, fuel=cfg.run_fuel, on_step=lambda c, r: steps.append((c, r)))
    t0 = time.perf_counter()
    checked, failed = 0, Counter()
    for k, (c, r) in enumerate(steps):
        res = simulates(c, r, fuel=cfg.fuel, max_states=cfg.max_states)
        if res is None:
            continue
        checked += 1
        if cfg.verbose or not res:
            print(f"  #{k:<5} {r.rule:<12} |w|={len(c.access):<3} found={res.found} steps={res.steps} explored={res.explored}")
        if not res:
            failed[(r.rule, len(c.access))] += 1
    print(f"{path}: {checked} steps, {sum(failed.values())} not simulated, {time.perf_counter() - t0:.1f}s")
    return failed


def main(cfg: Config) -> None:
    total = Counter()
    for path in cfg.files:
        total += scan(path, cfg)
    if total:
        print("failures by (rule, word length):")
        for (rule, d), n in sorted(total.items()):
            print(f"  {rule:<12} {d:>3}  {n}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="+")
    ap.add_argument("--fuel", type=int, default=8)
    ap.add_argument("--max-states", type=int, default=2_000)
    ap.add_argument("--run-fuel", type=int, default=10_000)
    ap.add_argument("-v", "--verbose", action="store_true")
    a = ap.parse_args()
    run_deep(main, Config(a.files, a.fuel, a.max_states, a.run_fuel, a.verbose))
