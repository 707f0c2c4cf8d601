"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The lines are also collected into an "acceptance criteria" section at the
end of the pytest report.
"""

import random
import time

from cdpcf.checks import dwords_simulation, simulates
from cdpcf.detmachine import det_run, iter_det_states
from cdpcf.differential import dlet
from cdpcf.gen import GenConfig, gen_open_term
from cdpcf.machine import run_term
from cdpcf.parser import parse, parse_program
from cdpcf.rel import PROVED, UNKNOWN, icheck, interp_ground, parse_point
from cdpcf.rewriting import enumerate_redexes, normalize
from cdpcf.syntax import (
    NAT,
    Arrow,
    Flip,
    Multiset,
    Zero,
    alpha_eq,
    d_type,
    free_vars,
    size,
    summands,
)
from cdpcf.typecheck import has_type, infer

from conftest import corpus_programs

PROGRAMS = corpus_programs()
DIVERGING = {name for name, _, expect in PROGRAMS if expect == "diverge"}
DEFAULT_FUEL = 10_000
LONG_FUEL = 200_000  # enough for every corpus program's multiset run
SIM_FUEL = 8
SIM_MAX_STATES = 2_000
SIM_FAILURES_PER_PROGRAM = 3
N_GENERATED = 250


def _generated():
    cfg = GenConfig(max_size=25, max_super=2)
    return [gen_open_term(random.Random(seed), cfg) for seed in range(N_GENERATED)]


def _max_super(t):
    own = [v for f, v in vars(t).items() if f in ("d", "l") and isinstance(v, int)]
    return max(own + [_max_super(c) for c in t.children()], default=0)


# ---------------------------------------------------------------------------


def test_c1_dt_worked_example(acceptance):
    t0 = time.perf_counter()
    dt = parse(r"D(\f:(Nat->Nat).\x:Nat. f (f x))")
    nf, steps = normalize(dt, max_steps=10)
    expected = parse(r"\f:(Nat->D Nat).\x:Nat. (sum[0](D f)) ((sum[0](D f)) (inj[0,0] x))")
    elapsed = time.perf_counter() - t0
    ok = alpha_eq(nf, expected) and steps <= 10 and elapsed < 1.0
    acceptance(1, ok, f"D T normal form matches in {steps} step(s), {elapsed:.3f}s")
    assert ok


def test_c2_differential_typing(acceptance):
    t0 = time.perf_counter()
    cases = _generated()
    failures = []
    for x, a, m, b in cases:
        assert size(m) <= 25 and _max_super(m) <= 2
        assert infer({x: a}, m) == b
        if infer({x: d_type(a)}, dlet(x, m)) != d_type(b):
            failures.append(m)
    elapsed = time.perf_counter() - t0
    with_x = sum(1 for x, _, m, _ in cases if x in free_vars(m))
    ok = not failures and len(cases) >= 200 and elapsed < 10
    acceptance(2, ok, f"{len(cases)} terms ({with_x} use x), {len(failures)} failures, {elapsed:.1f}s")
    assert ok


def test_c3_subject_reduction(acceptance):
    t0 = time.perf_counter()
    redexes = 0
    failures = []
    for x, a, m, b in _generated():
        ctx = {x: a}
        for r in enumerate_redexes(m, ctx):
            redexes += 1
            result = r.apply(m)
            # the whole result (zeros at their annotation, sums summand-wise),
            # then every element after multiset splitting
            good = has_type(ctx, result, b) and all(has_type(ctx, p, b) for p in summands(result))
            if not good:
                failures.append((r.rule, m))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 30
    acceptance(3, ok, f"{redexes} redexes on {N_GENERATED} terms, {len(failures)} failures, {elapsed:.1f}s")
    assert ok, failures[:3]


def test_c4_machine_simulation(acceptance):
    checked = 0
    failures = []
    skipped = {}
    for name, term, _ in PROGRAMS:
        steps = []
        fuel = 60 if name in DIVERGING else DEFAULT_FUEL
        run_term(term, fuel=fuel, on_step=lambda c, r: steps.append((c, r)))
        mine = 0
        for k, (c, r) in enumerate(steps):
            res = simulates(c, r, fuel=SIM_FUEL, max_states=SIM_MAX_STATES)
            if res is None:
                continue
            checked += 1
            if not res:
                mine += 1
                failures.append((name, k, getattr(r, "rule", type(r).__name__), len(c.access)))
                if mine >= SIM_FAILURES_PER_PROGRAM:
                    skipped[name] = len(steps) - k - 1
                    break
    ok = not failures and checked >= 500
    detail = f"{checked} steps checked at fuel {SIM_FUEL}, {len(failures)} failures"
    if failures:
        shown = ", ".join(f"{n}#{k} {rule} |δ|={d}" for n, k, rule, d in failures)
        detail += f" [{shown}]"
    if skipped:
        detail += f"; unchecked after repeated failures: {skipped}"
    acceptance(4, ok, detail)
    assert ok, detail


def test_c5_det_equals_multiset(acceptance):
    t0 = time.perf_counter()
    compared, excluded, mismatches = [], [], []
    for name, term, _ in PROGRAMS:
        n = run_term(term, fuel=DEFAULT_FUEL)
        if n.exhausted:
            excluded.append(name)
            continue
        d = det_run(term, fuel=DEFAULT_FUEL)
        vals = n.results.support()
        if len(vals) > 1:
            mismatches.append((name, "several values"))
            continue
        nd_value = vals[0] if vals else None
        if d.outcome != nd_value:
            mismatches.append((name, d.outcome, nd_value))
        elif nd_value is not None and d.steps != n.successful_steps():
            mismatches.append((name, d.steps, n.successful_steps()))
        compared.append(name)
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 30
    acceptance(
        5,
        ok,
        f"{len(compared)} programs agree on value and steps, {len(mismatches)} mismatches, {elapsed:.1f}s; "
        f"not terminating within fuel {DEFAULT_FUEL}: {', '.join(excluded)}",
    )
    assert ok, mismatches


def test_c6_dwords_bisimulation(acceptance):
    steps = 0
    failures = []
    for name, term, _ in PROGRAMS:
        fuel = 200 if name in DIVERGING else DEFAULT_FUEL
        for g, r in iter_det_states(term, fuel=fuel):
            steps += 1
            check = dwords_simulation(g, r)
            if not check:
                failures.append((name, steps, check))
    ok = not failures
    acceptance(6, ok, f"{steps} deterministic steps, {len(failures)} failures")
    assert ok, failures[:3]


def test_c7_adequacy(acceptance):
    checked, failures = 0, []
    for name, term, _ in PROGRAMS:
        if name in DIVERGING:
            for fuel in (10, 100, 1000):
                checked += 1
                if interp_ground(term, 5, fuel=fuel) != set():
                    failures.append((name, fuel))
            continue
        d = det_run(term, fuel=DEFAULT_FUEL)
        if d.outcome is None:
            continue
        checked += 1
        got = interp_ground(term, d.outcome + 1)
        if got != {d.outcome}:
            failures.append((name, d.outcome, got))
    ok = not failures
    acceptance(7, ok, f"{checked} judgments, {len(failures)} failures")
    assert ok, failures


ITERATOR = parse_program(
    r"""
    fix (\F:((Nat -> Nat) -> Nat -> Nat). \f:(Nat -> Nat). \x:Nat.
      let[0](y = x) if[0](y, 0, succ[0](F f (lin f y))))
    """
).term
NAT_FN = Arrow(NAT, NAT)


def test_c8_golden_judgments(acceptance):
    t0 = time.perf_counter()
    a, a2, b = parse_point("3"), parse_point("4"), parse_point("5")
    lin_phi = {
        "f": (Multiset([parse_point("([3], 5)")]), NAT_FN),
        "x": (Multiset([a]), NAT),
    }
    two_phi = {
        "f": (Multiset([parse_point("([3, 4], 5)")]), NAT_FN),
        "x": (Multiset([a, a2]), NAT),
    }
    results = {
        "linapp": icheck(lin_phi, parse("lin f x"), b),
        "iterator": icheck({}, ITERATOR, parse_point("([([1],2), ([2],0)], ([1],2))")),
        "app [a,a']": icheck(two_phi, parse("f x"), b),
        "linapp [a,a']": icheck(two_phi, parse("lin f x"), b, fuel=200),
    }
    elapsed = time.perf_counter() - t0
    expected = {"linapp": PROVED, "iterator": PROVED, "app [a,a']": PROVED, "linapp [a,a']": UNKNOWN}
    ok = results == expected and elapsed < 10
    shown = ", ".join(f"{k}={v.name}" for k, v in results.items())
    acceptance(8, ok, f"{shown}, {elapsed:.2f}s")
    assert ok


def test_c9_single_numeral(acceptance):
    offenders = []
    collected = {}
    for name, term, _ in PROGRAMS:
        fuel = 60 if name in DIVERGING else LONG_FUEL
        r = run_term(term, fuel=fuel)
        collected[name] = sorted(r.results)
        if len(r.results) > 1:
            offenders.append(name)
    ok = not offenders
    summary = ", ".join(f"{k}:{v}" for k, v in collected.items())
    acceptance(9, ok, f"{len(collected)} runs, at most one numeral each ({summary})")
    assert ok, offenders


def test_flip_superscripts_counted():
    # guard for the superscript walk used by criterion 2
    assert _max_super(Flip(1, 2, Zero(NAT))) == 2
