"""Acceptance gate: one test per headline criterion.

Each test prints a single PASS/FAIL line; the pytest terminal summary repeats
them under "acceptance criteria".
"""

import os
import random
import re
import subprocess
import sys
import time

import pytest

from ltlcheck.automata import accepts_lasso, degeneralize, translate_gba
from ltlcheck.checker import CheckMode, check, verify_counterexample
from ltlcheck.claimchain import EXPECTED, builtin_model, builtin_specs, run_suite
from ltlcheck.gen import Alphabet, case_rng, random_alphabet, random_formula, random_lasso, random_model
from ltlcheck.ltl import Globally, Not, depth, eval_lasso, to_nnf
from ltlcheck.oracle import run_oracle

AS_WRITTEN = CheckMode.AS_WRITTEN
WRAPPED = CheckMode.GLOBALLY_WRAPPED


def report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")
    assert ok, detail


@pytest.mark.criterion("verdict table [T,T,F,T,F], each spec <= 1 s")
def test_verdict_table():
    suite = run_suite(AS_WRITTEN)
    slowest = max(e.elapsed for e in suite.entries)
    report("verdict table", suite.observed == EXPECTED and slowest <= 1.0,
           f"observed {suite.observed_symbols()}, slowest {slowest:.3f}s")


@pytest.mark.criterion("phi3/phi5 counterexamples valid and avoid endorsed/evaluated")
def test_counterexample_validity():
    m = builtin_model()
    specs = builtin_specs()
    problems = []
    for k, banned in ((3, "endorsed"), (5, "evaluated")):
        f = specs[k - 1]
        v = check(m, f, AS_WRITTEN)
        if v.holds:
            problems.append(f"phi{k} holds")
            continue
        w = v.counterexample
        # independent re-derivation of (a) and (b), then (c) via eval_lasso
        if w.states[0] not in m.initial:
            problems.append(f"phi{k} not initial")
        for i, s in enumerate(w.states):
            if w.states[w.successor(i)] not in m.successors(s):
                problems.append(f"phi{k} broken step {i}")
        if eval_lasso(f, w):
            problems.append(f"phi{k} witness satisfies the property")
        if not verify_counterexample(m, f, AS_WRITTEN, w):
            problems.append(f"phi{k} rejected by verify_counterexample")
        if any(s["stage"] == banned for s in w.states):
            problems.append(f"phi{k} witness visits {banned}")
    report("counterexample validity", not problems, "; ".join(problems))


@pytest.mark.criterion("oracle equivalence over >= 1000 cases, zero disagreements")
def test_oracle_equivalence():
    cases, bad = 1000, []
    for i in range(cases):
        rng = case_rng(11, i)
        alphabet = random_alphabet(rng, max_vars=2, max_values=3)
        f = random_formula(rng, alphabet, 4)
        w = random_lasso(rng, alphabet, max_prefix=3, max_cycle=3)
        assert depth(f) <= 4 and len(w.prefix) <= 3 and 1 <= len(w.cycle) <= 3
        if accepts_lasso(degeneralize(translate_gba(to_nnf(f))), w) != eval_lasso(f, w):
            bad.append(i)
    packaged = run_oracle(cases, seed=0)
    report("oracle equivalence", not bad and packaged.ok,
           f"{cases} direct cases, {len(bad)} disagreements; packaged run: {packaged.render()}")


@pytest.mark.criterion("500 random model/formula pairs: exclusive verdicts, valid lassos")
def test_cross_consistency():
    alphabet = Alphabet.of({"p": ("a", "b", "c"), "q": ("x", "y")})
    both, invalid = [], []
    for i in range(500):
        rng = random.Random(f"cross:{i}")
        m = random_model(rng, alphabet, max_states=6)
        f = random_formula(rng, alphabet, 4)
        pos, neg = check(m, f), check(m, Not(f))
        if pos.holds and neg.holds:
            both.append(i)
        for g, v in ((f, pos), (Not(f), neg)):
            if not v.holds and not verify_counterexample(m, g, AS_WRITTEN, v.counterexample):
                invalid.append(i)
    report("cross-consistency", not both and not invalid,
           f"{len(both)} both-hold pairs, {len(invalid)} invalid lassos")


@pytest.mark.criterion("vacuity: phi1, phi4 flagged; phi4 fails when wrapped in G")
def test_vacuity():
    m = builtin_model()
    specs = builtin_specs()
    flags = [check(m, f, AS_WRITTEN).vacuous for f in specs]
    v4 = check(m, specs[3], WRAPPED)
    witness_ok = (not v4.holds
                  and bool(verify_counterexample(m, specs[3], WRAPPED, v4.counterexample))
                  and not eval_lasso(Globally(specs[3]), v4.counterexample))
    report("vacuity", flags[0] and flags[3] and witness_ok,
           f"vacuous flags {flags}, wrapped phi4 {'fails with valid witness' if witness_ok else 'not refuted'}")


ELAPSED = re.compile(r'"elapsed_seconds": [0-9.eE+-]+')


def _suite_json(hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run([sys.executable, "-m", "ltlcheck.cli", "suite", "--output", "json"],
                          capture_output=True, env=env, check=True)
    return ELAPSED.sub('"elapsed_seconds": _', proc.stdout.decode("utf-8"))


@pytest.mark.criterion("determinism: suite --output json byte-identical modulo elapsed")
def test_determinism():
    first, second = _suite_json(1), _suite_json(2)
    report("determinism", first == second and '"elapsed_seconds": _' in first,
           f"{len(first)} bytes compared")
