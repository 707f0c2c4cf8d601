"""Compare the two machines on a program whose multiset run is long.

The multiset machine explores every branch of every sum, so a program whose
deterministic run is short can still need a very large fuel on the multiset
side. This script runs both with a generous budget and reports value and
step-count agreement.
"""

from __future__ import annotations

import argparse
import os
import time
from dataclasses import dataclass

from cdpcf.deep import run_deep
from cdpcf.detmachine import det_run
from cdpcf.machine import run_term
from cdpcf.parser import load
from cdpcf.typecheck import elaborate

DEFAULT = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus", "random_walk.cdpcf")


@dataclass
class Config:
    path: str = DEFAULT
    fuel: int = 200_000


def main(cfg: Config) -> None:
    term = elaborate(load(cfg.path).term)
    t0 = time.perf_counter()
    d = det_run(term, fuel=cfg.fuel)
    print(f"det:      value={d.outcome} steps={d.steps} halt={d.halt} ({time.perf_counter() - t0:.1f}s)")
    t0 = time.perf_counter()
    n = run_term(term, fuel=cfg.fuel)
    kinds = {}
    for o in n.outcomes:
        kinds[o.kind] = kinds.get(o.kind, 0) + 1
    print(
        f"multiset: values={sorted(n.results)} successful_steps={n.successful_steps()} "
        f"total_steps={n.steps} exhausted={n.exhausted} branches={kinds} ({time.perf_counter() - t0:.1f}s)"
    )
    agree = not n.exhausted and d.outcome == n.value() and (d.outcome is None or d.steps == n.successful_steps())
    print("agree" if agree else "MISMATCH")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("path", nargs="?", default=DEFAULT)
    ap.add_argument("--fuel", type=int, default=200_000)
    a = ap.parse_args()
    run_deep(main, Config(a.path, a.fuel))
