import json
import random

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlcheck.automata import build_automaton
from ltlcheck.checker import (
    REPORT_SCHEMA,
    CheckMode,
    check,
    product_search,
    verify_counterexample,
)
from ltlcheck.claimchain import builtin_model, builtin_specs
from ltlcheck.errors import StateSpaceLimit, UnknownAtom
from ltlcheck.gen import Alphabet, random_formula, random_model, random_path_lasso
from ltlcheck.kripke import parse_model
from ltlcheck.ltl import (
    FALSE,
    TRUE,
    Atom,
    Eventually,
    Globally,
    Lasso,
    Not,
    eval_lasso,
    to_nnf,
)
from ltlcheck.state import State

AS_WRITTEN = CheckMode.AS_WRITTEN
WRAPPED = CheckMode.GLOBALLY_WRAPPED
ONE = parse_model("var p : {a, b}; init p = a; trans true -> next(p) = a;", name="one")
SMALL = Alphabet.of({"p": ("a", "b", "c"), "q": ("x", "y")})


def phi(k):
    return builtin_specs()[k - 1]


class TestCheck:
    def test_phi3_fails_with_drop_path(self):
        v = check(builtin_model(), phi(3), AS_WRITTEN)
        assert not v.holds
        w = v.counterexample
        assert all(s["stage"] != "endorsed" for s in w.states)
        assert [s["stage"] for s in w.prefix] == ["issued", "signed"]
        assert [s["stage"] for s in w.cycle] == ["claim_asset_dropped"]

    def test_invariant_holds(self):
        v = check(ONE, Globally(Atom("p", "a")))
        assert v.holds and v.counterexample is None

    def test_unreachable_value_fails(self):
        v = check(ONE, Eventually(Atom("p", "b")))
        assert not v.holds
        assert v.counterexample == Lasso([], [State(p="a")])

    def test_unknown_variable(self):
        with pytest.raises(UnknownAtom):
            check(ONE, Atom("r", "a"))

    def test_unknown_value(self):
        with pytest.raises(UnknownAtom):
            check(ONE, Atom("p", "z"))

    def test_deadlocks_are_closed(self):
        m = parse_model("var p : {a, b}; init p = a; trans p = a -> next(p) = b;")
        assert check(m, Eventually(Globally(Atom("p", "b")))).holds

    def test_state_cap(self):
        decls = "".join(f"var x{i} : {{zero, one}};\n" for i in range(12))
        trans = "".join(f"trans true -> next(x{i}) in {{zero, one}};\n" for i in range(12))
        m = parse_model(decls + "init x0 = zero;\n" + trans)
        with pytest.raises(StateSpaceLimit):
            check(m, Globally(TRUE), cap=100)

    def test_deterministic(self):
        m = builtin_model()
        a = check(m, phi(5), WRAPPED)
        b = check(m, phi(5), WRAPPED)
        assert a.counterexample == b.counterexample
        assert a.counterexample.debug == b.counterexample.debug

    def test_debug_keeps_automaton_nodes(self):
        v = check(builtin_model(), phi(3))
        stem, cycle = v.counterexample.debug
        assert cycle and all(isinstance(q, int) for _, q in stem + cycle)


class TestVacuity:
    def test_phi1_phi4_vacuous_as_written(self):
        m = builtin_model()
        flags = [check(m, f).vacuous for f in builtin_specs()]
        assert flags == [True, False, False, True, False]

    def test_not_vacuous_when_wrapped(self):
        m = builtin_model()
        assert not check(m, phi(1), WRAPPED).vacuous

    def test_non_implication_never_vacuous(self):
        assert not check(ONE, Globally(Atom("p", "a"))).vacuous


class TestVerifyCounterexample:
    def test_phi3_witness(self):
        m = builtin_model()
        v = check(m, phi(3))
        assert verify_counterexample(m, phi(3), AS_WRITTEN, v.counterexample)

    def test_broken_transition(self):
        m = builtin_model()
        w = Lasso([{"stage": "issued", "claim_status": "initial"}],
                  [{"stage": "signed", "claim_status": "initial"}])
        r = verify_counterexample(m, phi(3), AS_WRITTEN, w)
        assert not r and r.reason == "broken transition"

    def test_not_violating(self):
        r = verify_counterexample(ONE, Globally(Atom("p", "a")), AS_WRITTEN, Lasso([], [{"p": "a"}]))
        assert not r and r.reason == "not violating"

    def test_not_initial(self):
        r = verify_counterexample(ONE, FALSE, AS_WRITTEN, Lasso([], [{"p": "b"}]))
        assert not r and r.reason == "not initial"

    def test_invalid_state(self):
        r = verify_counterexample(ONE, FALSE, AS_WRITTEN, Lasso([], [{"p": "zz"}]))
        assert not r and r.reason == "invalid state"


class TestProductSearch:
    def test_false_automaton_empty(self):
        assert product_search(builtin_model(), build_automaton(FALSE)) is None

    def test_true_automaton_self_loop(self):
        w = product_search(ONE, build_automaton(TRUE))
        assert w == Lasso([], [State(p="a")])

    def test_negated_phi5(self):
        w = product_search(builtin_model(), build_automaton(to_nnf(Not(phi(5)))))
        assert w is not None
        assert all(s["stage"] != "evaluated" for s in w.states)

    def test_stats(self):
        stats = {}
        product_search(builtin_model(), build_automaton(to_nnf(Not(phi(2)))), stats=stats)
        assert stats["product_states"] > 0


class TestReport:
    def test_schema(self):
        v = check(builtin_model(), phi(3))
        report = v.to_json(name="phi3")
        jsonschema.validate(report, REPORT_SCHEMA)
        assert report["verdict"] == "fails" and report["mode"] == "as-written"
        assert json.loads(json.dumps(report)) == report

    def test_holds_schema(self):
        report = check(ONE, Globally(Atom("p", "a"))).to_json()
        jsonschema.validate(report, REPORT_SCHEMA)
        assert report["counterexample"] is None


def _pair(seed):
    rng = random.Random(seed)
    m = random_model(rng, SMALL, max_states=6)
    f = random_formula(rng, SMALL, 3)
    return m, f


class TestRandomModels:
    @settings(max_examples=150)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(list(CheckMode)))
    def test_fails_witness_is_valid(self, seed, mode):
        m, f = _pair(seed)
        v = check(m, f, mode)
        if not v.holds:
            assert verify_counterexample(m, f, mode, v.counterexample)
            assert not eval_lasso(mode.apply(f), v.counterexample)

    @settings(max_examples=150)
    @given(st.integers(0, 2**32 - 1))
    def test_exclusivity(self, seed):
        m, f = _pair(seed)
        assert not (check(m, f).holds and check(m, Not(f)).holds)

    @settings(max_examples=40)
    @given(st.integers(0, 2**32 - 1))
    def test_holds_survives_random_paths(self, seed):
        m, f = _pair(seed)
        if not check(m, f).holds:
            return
        rng = random.Random(seed)
        for _ in range(200):
            assert eval_lasso(f, random_path_lasso(rng, m))
