"""Finite transition systems over enum-typed variables and their text format.

Model files look like::

    var stage : {issued, signed, endorsed};
    init stage = issued;
    trans stage = issued -> next(stage) = signed;
    trans stage = signed -> next(stage) in {signed, endorsed};
    trans stage = endorsed -> next(stage) = endorsed;

A state is a total assignment. Rules whose guard holds fire together and the
successor set is the union of what they produce; variables a rule does not
update keep their value.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import ParseError, SemanticError, StateSpaceLimit, UnknownOperator
from .state import State

DEFAULT_STATE_CAP = 1_000_000

# (variable, value, positive)
Literal = tuple[str, str, bool]


@dataclass(frozen=True)
class VariableDecl:
    name: str
    domain: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise SemanticError(f"variable {self.name!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise SemanticError(f"variable {self.name!r} has duplicate domain values")


@dataclass(frozen=True)
class Update:
    var: str
    values: tuple[str, ...]


@dataclass(frozen=True)
class Rule:
    guard: tuple[Literal, ...]
    updates: tuple[Update, ...]

    def enabled(self, s: Mapping[str, str]) -> bool:
        return all((s[v] == x) == pos for v, x, pos in self.guard)


@dataclass(frozen=True)
class Model:
    variables: tuple[VariableDecl, ...]
    initial: tuple[State, ...]
    rules: tuple[Rule, ...]
    name: str = "model"
    # reachable deadlocks closed with a self-loop by totalize()
    stutter: frozenset[State] = frozenset()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not self.initial:
            raise SemanticError("model has no initial state")
        for s in self.initial:
            self.check_state(s)

    @property
    def domains(self) -> dict[str, tuple[str, ...]]:
        return {v.name: v.domain for v in self.variables}

    def check_state(self, s: Mapping[str, str]) -> None:
        doms = self.domains
        if set(s) != set(doms):
            raise SemanticError(f"state {dict(s)} does not assign exactly {sorted(doms)}")
        for var, val in s.items():
            if val not in doms[var]:
                raise SemanticError(f"value {val!r} not in domain of {var!r}")

    def state_key(self, s: Mapping[str, str]) -> tuple[int, ...]:
        """Lexicographic position: variable order, then domain order."""
        return tuple(v.domain.index(s[v.name]) for v in self.variables)

    def make_state(self, assignment: Mapping[str, str]) -> State:
        s = State({v.name: assignment[v.name] for v in self.variables})
        self.check_state(s)
        return s

    def successors(self, s: State) -> tuple[State, ...]:
        cached = self._cache.get(s)
        if cached is not None:
            return cached
        out = set()
        for rule in self.rules:
            if not rule.enabled(s):
                continue
            choices = [u.values for u in rule.updates]
            names = [u.var for u in rule.updates]
            for combo in itertools.product(*choices):
                nxt = dict(s)
                nxt.update(zip(names, combo))
                out.add(State({v.name: nxt[v.name] for v in self.variables}))
        if s in self.stutter:
            out.add(s)
        result = tuple(sorted(out, key=self.state_key))
        self._cache[s] = result
        return result

    @classmethod
    def from_explicit(cls, variables: Sequence[VariableDecl], initial: Iterable[Mapping[str, str]],
                      edges: Iterable[tuple[Mapping[str, str], Mapping[str, str]]],
                      name: str = "model") -> "Model":
        """Build a model from an explicit edge list (one rule per edge)."""
        variables = tuple(variables)
        order = [v.name for v in variables]
        rules = []
        for src, dst in edges:
            guard = tuple((v, src[v], True) for v in order)
            updates = tuple(Update(v, (dst[v],)) for v in order)
            rules.append(Rule(guard, updates))
        init = [State({v: s[v] for v in order}) for s in initial]
        m = cls(variables, tuple(dict.fromkeys(init)), tuple(rules), name)
        return m._sorted_initial()

    def _sorted_initial(self) -> "Model":
        init = tuple(sorted(self.initial, key=self.state_key))
        return Model(self.variables, init, self.rules, self.name, self.stutter)


def successors(m: Model, s: Mapping[str, str]) -> tuple[State, ...]:
    return m.successors(State.of(s))


def reachable_states(m: Model, cap: int = DEFAULT_STATE_CAP) -> list[State]:
    """Breadth-first enumeration from the initial states."""
    seen = dict.fromkeys(m.initial)
    if len(seen) > cap:
        raise StateSpaceLimit(cap)
    queue = deque(seen)
    while queue:
        s = queue.popleft()
        for t in m.successors(s):
            if t not in seen:
                seen[t] = None
                if len(seen) > cap:
                    raise StateSpaceLimit(cap)
                queue.append(t)
    return list(seen)


def deadlocks(m: Model, cap: int = DEFAULT_STATE_CAP) -> list[State]:
    return [s for s in reachable_states(m, cap) if not m.successors(s)]


def totalize(m: Model, cap: int = DEFAULT_STATE_CAP) -> Model:
    """Give every reachable deadlock a self-loop.

    The returned model's ``stutter`` set doubles as the report of modified
    states; it is empty when the model was already total.
    """
    dead = deadlocks(m, cap)
    if not dead:
        return m
    return Model(m.variables, m.initial, m.rules, m.name, m.stutter | frozenset(dead))


def is_total(m: Model, cap: int = DEFAULT_STATE_CAP) -> bool:
    return not deadlocks(m, cap)


# ---------------------------------------------------------------------------
# Model language

_KEYWORDS = {"var", "init", "trans", "next", "in", "true"}
_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op>->|!=|[:{},;=&()])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise UnknownOperator(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "op":
            toks.append(_Tok(m.group(), m.group(), line, col))
        elif kind == "word":
            w = m.group()
            toks.append(_Tok(w if w in _KEYWORDS else "IDENT", w, line, col))
        pos = m.end()
    toks.append(_Tok("EOF", "", line, pos - line_start + 1))
    return toks


class _ModelParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.variables: dict[str, VariableDecl] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: set[str]):
        t = self.tok
        what = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.line, t.column, expected)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail({kind})
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def ident_list(self) -> list[_Tok]:
        self.expect("{")
        items = [self.expect("IDENT")]
        while self.accept(","):
            items.append(self.expect("IDENT"))
        self.expect("}")
        return items

    def value(self, var: _Tok, val: _Tok) -> str:
        decl = self.variables.get(var.text)
        if decl is None:
            raise SemanticError(f"{var.line}:{var.column}: undeclared variable {var.text!r}")
        if val.text not in decl.domain:
            raise SemanticError(
                f"{val.line}:{val.column}: {val.text!r} is not in the domain of {var.text!r}")
        return val.text

    def literal(self) -> Literal:
        var = self.expect("IDENT")
        if self.accept("="):
            positive = True
        elif self.accept("!="):
            positive = False
        else:
            self.fail({"=", "!="})
        return (var.text, self.value(var, self.expect("IDENT")), positive)

    def conj(self) -> tuple[Literal, ...]:
        if self.accept("true"):
            return ()
        lits = [self.literal()]
        while self.accept("&"):
            lits.append(self.literal())
        return tuple(lits)

    def update(self) -> Update:
        self.expect("next")
        self.expect("(")
        var = self.expect("IDENT")
        self.expect(")")
        if self.accept("="):
            vals = [self.expect("IDENT")]
        elif self.accept("in"):
            vals = self.ident_list()
        else:
            self.fail({"=", "in"})
        values = tuple(dict.fromkeys(self.value(var, v) for v in vals))
        return Update(var.text, values)

    def parse(self, name: str) -> Model:
        while self.tok.kind == "var":
            self.i += 1
            var = self.expect("IDENT")
            self.expect(":")
            domain = [t.text for t in self.ident_list()]
            self.expect(";")
            if var.text in self.variables:
                raise SemanticError(f"{var.line}:{var.column}: duplicate variable {var.text!r}")
            self.variables[var.text] = VariableDecl(var.text, tuple(domain))
        if not self.variables:
            self.fail({"var"})
        self.expect("init")
        init_lits = self.conj()
        self.expect(";")
        rules = []
        if self.tok.kind != "trans":
            self.fail({"trans", "var"} if not rules else {"trans"})
        while self.accept("trans"):
            guard = self.conj()
            self.expect("->")
            ups = [self.update()]
            while self.accept(","):
                ups.append(self.update())
            t = self.expect(";")
            seen = [u.var for u in ups]
            if len(set(seen)) != len(seen):
                raise SemanticError(f"{t.line}: variable updated twice in one rule")
            rules.append(Rule(guard, tuple(ups)))
        if self.tok.kind != "EOF":
            self.fail({"trans", "EOF"})

        decls = tuple(self.variables.values())
        allowed = []
        for d in decls:
            lits = [(x, pos) for v, x, pos in init_lits if v == d.name]
            allowed.append([a for a in d.domain if all((a == x) == pos for x, pos in lits)])
        if not all(allowed):
            raise SemanticError("init denotes the empty set of states")
        names = [d.name for d in decls]
        initial = [State(dict(zip(names, combo))) for combo in itertools.product(*allowed)]
        return Model(decls, tuple(initial), tuple(rules), name)


def parse_model(text: str, name: str = "model") -> Model:
    return _ModelParser(text).parse(name)
