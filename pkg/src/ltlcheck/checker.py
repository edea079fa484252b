"""Automata-theoretic model checking with lasso counterexamples.

``check`` negates the property, translates it to a Büchi automaton, and looks
for an accepting cycle in the product with the model using nested depth-first
search. Exploration order is fixed (model successors in state order, automaton
transitions in construction order), so equal inputs give equal verdicts down
to the counterexample.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field

from .automata import BuchiAutomaton, build_automaton, guard_holds
from .errors import SemanticError, StateSpaceLimit, UnknownAtom
from .kripke import DEFAULT_STATE_CAP, Model, totalize
from .ltl import Formula, Globally, Implies, Lasso, Not, atoms, eval_lasso, pretty, to_nnf
from .state import State

log = logging.getLogger(__name__)


class CheckMode(enum.Enum):
    AS_WRITTEN = "as-written"
    GLOBALLY_WRAPPED = "globally-wrapped"

    def apply(self, f: Formula) -> Formula:
        return Globally(f) if self is CheckMode.GLOBALLY_WRAPPED else f


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: Lasso | None
    product_states: int
    elapsed: float
    formula: Formula
    mode: CheckMode
    model_name: str
    vacuous: bool = False

    @property
    def outcome(self) -> str:
        return "holds" if self.holds else "fails"

    def to_json(self, name: str | None = None) -> dict:
        report = {
            "model": self.model_name,
            "spec": pretty(self.formula),
            "mode": self.mode.value,
            "verdict": self.outcome,
            "vacuous": self.vacuous,
            "counterexample": self.counterexample.to_json() if self.counterexample else None,
            "stats": {
                "product_states": self.product_states,
                "elapsed_seconds": round(self.elapsed, 3),
            },
        }
        if name is not None:
            report["name"] = name
        return report


_STATE_SCHEMA = {"type": "object", "additionalProperties": {"type": "string"}}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["model", "spec", "mode", "verdict", "vacuous", "counterexample", "stats"],
    "properties": {
        "name": {"type": "string"},
        "model": {"type": "string"},
        "spec": {"type": "string"},
        "mode": {"enum": ["as-written", "globally-wrapped"]},
        "verdict": {"enum": ["holds", "fails"]},
        "vacuous": {"type": "boolean"},
        "counterexample": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["prefix", "cycle"],
                    "additionalProperties": False,
                    "properties": {
                        "prefix": {"type": "array", "items": _STATE_SCHEMA},
                        "cycle": {"type": "array", "items": _STATE_SCHEMA, "minItems": 1},
                    },
                },
            ]
        },
        "stats": {
            "type": "object",
            "required": ["product_states", "elapsed_seconds"],
            "additionalProperties": False,
            "properties": {
                "product_states": {"type": "integer", "minimum": 0},
                "elapsed_seconds": {"type": "number", "minimum": 0},
            },
        },
    },
    "additionalProperties": False,
}


def check_atoms(m: Model, f: Formula) -> None:
    doms = m.domains
    for a in sorted(atoms(f), key=lambda a: (a.var, a.value)):
        if a.var not in doms:
            raise UnknownAtom(f"undeclared variable {a.var!r} in {pretty(f)}")
        if a.value not in doms[a.var]:
            raise UnknownAtom(f"{a.value!r} is not a value of {a.var!r} in {pretty(f)}")


def product_search(m: Model, a: BuchiAutomaton, cap: int = DEFAULT_STATE_CAP,
                   stats: dict | None = None) -> Lasso | None:
    """Nested DFS for an accepting cycle of the product of ``m`` and ``a``.

    A product node ``(s, q)`` means the automaton is in ``q`` after reading
    model state ``s``. The returned lasso is projected to model states; the
    raw product path is kept in its ``debug`` field as (stem, cycle).
    """

    def succ(node):
        s, q = node
        trans = a.transitions[q]
        return [(t, q2) for t in m.successors(s) for guard, q2 in trans if guard_holds(guard, t)]

    roots = [(s, q) for s in m.initial for q in a.initial if guard_holds(a.labels[q], s)]
    outer: set = set()
    inner: set = set()

    def grow(seen: set, node) -> None:
        seen.add(node)
        if len(outer) + len(inner) > cap:
            raise StateSpaceLimit(cap)

    def find_cycle(seed):
        grow(inner, seed)
        stack = [(seed, iter(succ(seed)))]
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if nxt == seed:
                    return [n for n, _ in stack]
                if nxt not in inner:
                    grow(inner, nxt)
                    stack.append((nxt, iter(succ(nxt))))
                    break
            else:
                stack.pop()
        return None

    result = None
    for root in roots:
        if root in outer:
            continue
        grow(outer, root)
        stack = [(root, iter(succ(root)))]
        while stack and result is None:
            node, it = stack[-1]
            for nxt in it:
                if nxt not in outer:
                    grow(outer, nxt)
                    stack.append((nxt, iter(succ(nxt))))
                    break
            else:
                stack.pop()
                if node[1] in a.accepting:
                    cycle = find_cycle(node)
                    if cycle is not None:
                        stem = [n for n, _ in stack]
                        raw = Lasso([s for s, _ in stem], [s for s, _ in cycle])
                        result = Lasso(raw.prefix, raw.cycle, debug=(tuple(stem), tuple(cycle)))
        if result is not None:
            break
    if stats is not None:
        stats["product_states"] = len(outer | inner)
    if result is None:
        return None
    normal = result.normalized()
    return Lasso(normal.prefix, normal.cycle, debug=result.debug)


def _violation(m: Model, f: Formula, cap: int, stats: dict | None = None) -> Lasso | None:
    return product_search(m, build_automaton(to_nnf(Not(f))), cap, stats)


def check(m: Model, f: Formula, mode: CheckMode = CheckMode.AS_WRITTEN,
          cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Decide whether every path from every initial state satisfies ``f``.

    Deadlocks are closed with self-loops first (see ``kripke.totalize``).
    """
    check_atoms(m, f)
    start = time.perf_counter()
    m = totalize(m, cap)
    target = mode.apply(f)
    stats: dict = {}
    lasso = _violation(m, target, cap, stats)
    vacuous = False
    if lasso is None and isinstance(f, Implies):
        # the antecedent can never be true where the property is evaluated
        trigger = Not(f.left) if mode is CheckMode.AS_WRITTEN else Globally(Not(f.left))
        vacuous = _violation(m, trigger, cap) is None
        if vacuous:
            log.warning("%s holds vacuously on %s (%s): antecedent never true",
                        pretty(f), m.name, mode.value)
    elapsed = time.perf_counter() - start
    return Verdict(
        holds=lasso is None,
        counterexample=lasso,
        product_states=stats["product_states"],
        elapsed=elapsed,
        formula=f,
        mode=mode,
        model_name=m.name,
        vacuous=vacuous,
    )


@dataclass(frozen=True)
class CounterexampleCheck:
    ok: bool
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def verify_counterexample(m: Model, f: Formula, mode: CheckMode, w: Lasso,
                          cap: int = DEFAULT_STATE_CAP) -> CounterexampleCheck:
    """Independently confirm that ``w`` is a path of ``m`` that violates ``f``."""
    try:
        m = totalize(m, cap)
        for s in w.states:
            m.check_state(s)
    except (SemanticError, StateSpaceLimit) as exc:
        return CounterexampleCheck(False, "invalid state", {"error": str(exc)})
    states = [State({v.name: s[v.name] for v in m.variables}) for s in w.states]
    if states[0] not in m.initial:
        return CounterexampleCheck(False, "not initial", {"state": states[0].to_dict()})
    for i in range(len(states)):
        src, dst = states[i], states[w.successor(i)]
        if dst not in m.successors(src):
            return CounterexampleCheck(False, "broken transition",
                                       {"index": i, "from": src.to_dict(), "to": dst.to_dict()})
    if eval_lasso(mode.apply(f), w):
        return CounterexampleCheck(False, "not violating")
    return CounterexampleCheck(True)
