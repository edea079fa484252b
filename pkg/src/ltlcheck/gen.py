"""Seeded random formulas, lassos and small models for cross-validation."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .kripke import Model, VariableDecl
from .ltl import (
    FALSE,
    TRUE,
    And,
    Atom,
    Eventually,
    Formula,
    Globally,
    Implies,
    Lasso,
    Next,
    Not,
    Or,
    Release,
    Until,
    WeakUntil,
)
from .state import State

UNARY = (Not, Next, Eventually, Globally)
BINARY = (And, Or, Implies, Until, WeakUntil, Release)


@dataclass(frozen=True)
class Alphabet:
    """Variables and their domains, e.g. ``{"p": ("a", "b")}``."""

    domains: tuple[tuple[str, tuple[str, ...]], ...]

    @classmethod
    def of(cls, domains: dict[str, tuple[str, ...]]) -> "Alphabet":
        return cls(tuple((k, tuple(v)) for k, v in domains.items()))

    @property
    def names(self) -> list[str]:
        return [v for v, _ in self.domains]

    def random_state(self, rng: random.Random) -> State:
        return State({v: rng.choice(dom) for v, dom in self.domains})

    def all_states(self) -> list[State]:
        states = [{}]
        for v, dom in self.domains:
            states = [{**s, v: x} for s in states for x in dom]
        return [State(s) for s in states]


def random_alphabet(rng: random.Random, max_vars: int = 2, max_values: int = 3) -> Alphabet:
    names = ["p", "q", "r", "s"][:rng.randint(1, max_vars)]
    values = ["a", "b", "c", "d"]
    return Alphabet(tuple((n, tuple(values[:rng.randint(2, max_values)])) for n in names))


def random_formula(rng: random.Random, alphabet: Alphabet, depth: int,
                   unary=UNARY, binary=BINARY) -> Formula:
    """Random formula of nesting depth at most ``depth`` (a leaf has depth 1)."""
    if depth <= 1 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.06:
            return TRUE
        if r < 0.12:
            return FALSE
        var, dom = rng.choice(alphabet.domains)
        return Atom(var, rng.choice(dom))
    if rng.random() < 0.4:
        return rng.choice(unary)(random_formula(rng, alphabet, depth - 1, unary, binary))
    cls = rng.choice(binary)
    return cls(random_formula(rng, alphabet, depth - 1, unary, binary),
               random_formula(rng, alphabet, depth - 1, unary, binary))


def random_lasso(rng: random.Random, alphabet: Alphabet, max_prefix: int = 3,
                 max_cycle: int = 3) -> Lasso:
    prefix = [alphabet.random_state(rng) for _ in range(rng.randint(0, max_prefix))]
    cycle = [alphabet.random_state(rng) for _ in range(rng.randint(1, max_cycle))]
    return Lasso(prefix, cycle)


def random_model(rng: random.Random, alphabet: Alphabet, max_states: int = 6,
                 name: str = "random") -> Model:
    """A total model whose states are a random subset of the alphabet's states."""
    pool = alphabet.all_states()
    rng.shuffle(pool)
    states = pool[:rng.randint(1, min(max_states, len(pool)))]
    edges = []
    for s in states:
        for t in rng.sample(states, rng.randint(1, min(3, len(states)))):
            edges.append((s, t))
    initial = rng.sample(states, rng.randint(1, min(2, len(states))))
    variables = [VariableDecl(v, dom) for v, dom in alphabet.domains]
    return Model.from_explicit(variables, initial, edges, name)


def random_path_lasso(rng: random.Random, m: Model, max_steps: int = 50) -> Lasso:
    """Random walk from an initial state, closed into a lasso at the first repeat."""
    path = [rng.choice(m.initial)]
    pos = {path[0]: 0}
    for _ in range(max_steps):
        nxt = rng.choice(m.successors(path[-1]))
        if nxt in pos:
            k = pos[nxt]
            return Lasso(path[:k], path[k:])
        pos[nxt] = len(path)
        path.append(nxt)
    raise RuntimeError("random walk did not close within max_steps")


def case_rng(seed: int, index: int) -> random.Random:
    """Per-case generator, so case ``index`` of run ``seed`` can be replayed alone."""
    return random.Random(f"{seed}:{index}")
