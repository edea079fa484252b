import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltlcheck.claimchain import MODEL_TEXT, STAGES, STATUSES
from ltlcheck.errors import ParseError, SemanticError, StateSpaceLimit
from ltlcheck.gen import Alphabet, random_model
from ltlcheck.kripke import (
    Model,
    VariableDecl,
    parse_model,
    reachable_states,
    successors,
    totalize,
)
from ltlcheck.state import State

TWO_STATE = """
var p : {a, b};
init p = a;
trans p = a -> next(p) = b;
trans p = b -> next(p) = b;
"""


def cc(stage, status="initial"):
    return State(stage=stage, claim_status=status)


class TestParseModel:
    def test_two_state(self):
        m = parse_model(TWO_STATE)
        assert m.initial == (State(p="a"),)
        assert reachable_states(m) == [State(p="a"), State(p="b")]
        assert m.variables == (VariableDecl("p", ("a", "b")),)

    def test_claimchain_domains(self):
        m = parse_model(MODEL_TEXT)
        doms = m.domains
        assert len(doms["stage"]) == 7 and doms["stage"] == STAGES
        assert len(doms["claim_status"]) == 4 and doms["claim_status"] == STATUSES

    def test_unconstrained_variables_range_over_domain(self):
        m = parse_model("var p : {a, b}; var q : {x, y, z}; init q != y; trans true -> next(p) = a;")
        assert len(m.initial) == 4
        assert [m.state_key(s) for s in m.initial] == sorted(m.state_key(s) for s in m.initial)

    def test_value_set_update(self):
        m = parse_model("var p : {a, b, c}; init p = a; trans p = a -> next(p) in {c, b};")
        assert successors(m, {"p": "a"}) == (State(p="b"), State(p="c"))

    def test_union_of_firing_rules_and_frame(self):
        m = parse_model("""
            var p : {a, b}; var q : {x, y};
            init p = a & q = x;
            trans p = a -> next(p) = b;
            trans q = x -> next(q) = y;
        """)
        assert successors(m, {"p": "a", "q": "x"}) == (State(p="a", q="y"), State(p="b", q="x"))

    def test_unknown_value(self):
        with pytest.raises(SemanticError):
            parse_model("var p : {a, b}; init p = c; trans true -> next(p) = a;")

    def test_unknown_value_in_update(self):
        with pytest.raises(SemanticError):
            parse_model("var p : {a, b}; init p = a; trans true -> next(p) = z;")

    def test_undeclared_variable_in_guard(self):
        with pytest.raises(SemanticError):
            parse_model("var p : {a, b}; init p = a; trans r = a -> next(p) = a;")

    def test_duplicate_variable(self):
        with pytest.raises(SemanticError):
            parse_model("var p : {a}; var p : {b}; init p = a; trans true -> next(p) = a;")

    def test_duplicate_domain_value(self):
        with pytest.raises(SemanticError):
            parse_model("var p : {a, a}; init p = a; trans true -> next(p) = a;")

    def test_empty_domain_is_syntax_error(self):
        with pytest.raises(ParseError):
            parse_model("var p : {}; init true; trans true -> next(p) = a;")

    def test_empty_init(self):
        with pytest.raises(SemanticError):
            parse_model("var p : {a, b}; init p = a & p = b; trans true -> next(p) = a;")

    def test_missing_trans(self):
        with pytest.raises(ParseError) as exc:
            parse_model("var p : {a}; init p = a;")
        assert "trans" in exc.value.expected

    def test_syntax_error_location(self):
        with pytest.raises(ParseError) as exc:
            parse_model("var p : {a, b};\ninit p = a;\ntrans p = a -> next(p) b;\n")
        assert (exc.value.line, exc.value.column) == (3, 24)
        assert exc.value.expected == {"=", "in"}

    def test_comments(self):
        m = parse_model("# top\nvar p : {a}; # trailing\ninit p = a;\ntrans true -> next(p) = a; # x\n")
        assert reachable_states(m) == [State(p="a")]


class TestSuccessors:
    def test_claimchain_signed_branches(self):
        m = parse_model(MODEL_TEXT)
        assert successors(m, cc("signed")) == (cc("endorsed"), cc("claim_asset_dropped"))

    def test_claimchain_decision(self):
        m = parse_model(MODEL_TEXT)
        assert successors(m, cc("endorsed")) == tuple(
            cc("evaluated", s) for s in ("approved", "denied", "flagged"))

    def test_no_rule_fires(self):
        m = parse_model("var p : {a, b}; init p = a; trans p = a -> next(p) = b;")
        assert successors(m, {"p": "b"}) == ()

    def test_absorbing_after_totalize(self):
        m = totalize(parse_model("var p : {a, b}; init p = a; trans p = a -> next(p) = b;"))
        assert successors(m, {"p": "b"}) == (State(p="b"),)


class TestTotalize:
    def test_deadlock_gets_self_loop(self):
        m = parse_model("var p : {a, b}; init p = a; trans p = a -> next(p) = b;")
        t = totalize(m)
        assert t.stutter == {State(p="b")}

    def test_already_total(self):
        m = parse_model(TWO_STATE)
        t = totalize(m)
        assert t == m and not t.stutter

    def test_claimchain_is_total_as_written(self):
        m = parse_model(MODEL_TEXT)
        t = totalize(m)
        assert not t.stutter
        for stage in ("claim_asset_dropped", "claim_updated_discarded", "evaluated_world_state_updated"):
            for s in reachable_states(t):
                if s["stage"] == stage:
                    assert successors(t, s) == (s,)

    @given(st.integers(0, 10_000))
    def test_idempotent(self, seed):
        rng = random.Random(seed)
        al = Alphabet.of({"p": ("a", "b", "c"), "q": ("x", "y")})
        m = random_model(rng, al)
        # drop some rules to create deadlocks
        m = Model(m.variables, m.initial, m.rules[::2], m.name)
        once = totalize(m)
        assert totalize(once) == once
        for s in reachable_states(once):
            assert successors(once, s)


class TestReachable:
    def test_self_loop(self):
        m = parse_model("var p : {a}; init p = a; trans true -> next(p) = a;")
        assert reachable_states(m) == [State(p="a")]

    def test_claimchain_covers_all_stages(self):
        states = reachable_states(parse_model(MODEL_TEXT))
        assert {s["stage"] for s in states} == set(STAGES)

    def test_state_cap(self):
        decls = "".join(f"var x{i} : {{zero, one}};\n" for i in range(20))
        init = " & ".join(f"x{i} = zero" for i in range(20))
        trans = "".join(f"trans true -> next(x{i}) in {{zero, one}};\n" for i in range(20))
        m = parse_model(decls + f"init {init};\n" + trans)
        with pytest.raises(StateSpaceLimit):
            reachable_states(m, cap=1000)

    @given(st.integers(0, 10_000))
    def test_deterministic_and_sound(self, seed):
        al = Alphabet.of({"p": ("a", "b", "c"), "q": ("x", "y")})
        m1 = random_model(random.Random(seed), al)
        m2 = random_model(random.Random(seed), al)
        assert m1 == m2
        r1, r2 = reachable_states(m1), reachable_states(m2)
        assert r1 == r2
        for s in r1:
            for t in successors(m1, s):
                m1.check_state(t)
                assert t in r1
