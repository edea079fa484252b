"""LTL syntax trees, the ASCII formula language, normal forms and lasso semantics.

Concrete syntax, loosest to tightest binding::

    ->            right-associative
    |             left-associative
    &             left-associative
    U  W  R       right-associative; different operators may not be chained
                  without parentheses (``a U b R c`` is rejected)
    !  X  F  G    prefix
    atoms         true, false, ident = ident, ident != ident, ( formula )
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ParseError, UnboundVariable, UnknownOperator
from .state import State

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Formula:
    """Base of the LTL syntax tree. Subclasses are frozen dataclasses."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


TRUE = TrueConst()
FALSE = FalseConst()


@dataclass(frozen=True)
class Atom(Formula):
    var: str
    value: str

    def __post_init__(self):
        for name in (self.var, self.value):
            if not isinstance(name, str) or not IDENT_RE.match(name):
                raise ValueError(f"invalid identifier in atom: {name!r}")


@dataclass(frozen=True)
class _Unary(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


class Not(_Unary):
    pass


class Next(_Unary):
    pass


class Eventually(_Unary):
    pass


class Globally(_Unary):
    pass


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Until(_Binary):
    pass


class WeakUntil(_Binary):
    pass


class Release(_Binary):
    pass


def _cached_hash(self) -> int:
    try:
        return self.__dict__["_hash"]
    except KeyError:
        h = hash((type(self).__name__,) + tuple(self.__dict__.values()))
        object.__setattr__(self, "_hash", h)
        return h


# frozen dataclass semantics must be inherited by the concrete node classes;
# trees are hashed constantly during translation, so hashes are memoised
for _cls in (Not, Next, Eventually, Globally, And, Or, Implies, Until, WeakUntil, Release):
    dataclass(frozen=True)(_cls)
for _cls in (TrueConst, FalseConst, Atom, Not, Next, Eventually, Globally, And, Or, Implies,
             Until, WeakUntil, Release):
    _cls.__hash__ = _cached_hash
del _cls

UNARY_SYMBOL = {Not: "!", Next: "X", Eventually: "F", Globally: "G"}
BINARY_SYMBOL = {Implies: "->", Or: "|", And: "&", Until: "U", WeakUntil: "W", Release: "R"}


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order, left-to-right traversal (duplicates included)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    kids = f.children()
    return 1 + max((depth(k) for k in kids), default=0)


def atoms(f: Formula) -> set[Atom]:
    return {g for g in subformulas(f) if isinstance(g, Atom)}


def is_temporal(f: Formula) -> bool:
    return any(isinstance(g, (Next, Eventually, Globally, Until, WeakUntil, Release))
               for g in subformulas(f))


# ---------------------------------------------------------------------------
# Lexing and parsing

_KEYWORDS = {"true", "false", "X", "F", "G", "U", "W", "R"}
_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<op>->|!=|[!&|()=])
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # an operator/keyword literal, "IDENT" or "EOF"
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens = []
    pos, line_start = 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            j = pos
            while j < len(text) and not text[j].isspace() and not text[j].isalnum():
                j += 1
            stray = text[pos:max(j, pos + 1)]
            raise UnknownOperator(f"unknown operator {stray!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "op":
            tokens.append(Token(m.group(), m.group(), line, col))
        elif kind == "word":
            word = m.group()
            tokens.append(Token(word if word in _KEYWORDS else "IDENT", word, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


_ATOM_START = {"true", "false", "IDENT", "("}
_UNARY_START = {"!", "X", "F", "G"} | _ATOM_START
_TEMPORAL_OPS = {"U": Until, "W": WeakUntil, "R": Release}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected: set[str]):
        t = self.tok
        what = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.line, t.column, expected)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail({kind})
        return self.advance()

    def formula(self) -> Formula:
        return self.implies()

    def implies(self) -> Formula:
        left = self.disj()
        if self.tok.kind == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.tok.kind == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.temporal()
        while self.tok.kind == "&":
            self.advance()
            f = And(f, self.temporal())
        return f

    def temporal(self) -> Formula:
        operands = [self.unary()]
        op = None
        while self.tok.kind in _TEMPORAL_OPS:
            if op is not None and self.tok.kind != op:
                raise ParseError(
                    f"cannot mix {op!r} and {self.tok.kind!r} without parentheses",
                    self.tok.line, self.tok.column, {op, "("})
            op = self.advance().kind
            operands.append(self.unary())
        f = operands.pop()
        while operands:
            f = _TEMPORAL_OPS[op](operands.pop(), f)
        return f

    def unary(self) -> Formula:
        kind = self.tok.kind
        if kind == "!":
            self.advance()
            return Not(self.unary())
        if kind == "X":
            self.advance()
            return Next(self.unary())
        if kind == "F":
            self.advance()
            return Eventually(self.unary())
        if kind == "G":
            self.advance()
            return Globally(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind = self.tok.kind
        if kind == "true":
            self.advance()
            return TRUE
        if kind == "false":
            self.advance()
            return FALSE
        if kind == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if kind == "IDENT":
            var = self.advance().text
            if self.tok.kind == "=":
                self.advance()
                return Atom(var, self.expect("IDENT").text)
            if self.tok.kind == "!=":
                self.advance()
                return Not(Atom(var, self.expect("IDENT").text))
            self.fail({"=", "!="})
        self.fail(_UNARY_START)


def parse(text: str, *, line: int = 1) -> Formula:
    """Parse a single formula.

    >>> parse("stage = issued -> F (stage = endorsed)")
    Implies(left=Atom(var='stage', value='issued'), right=Eventually(arg=Atom(var='stage', value='endorsed')))
    """
    p = _Parser(tokenize(text, line))
    f = p.formula()
    if p.tok.kind != "EOF":
        t = p.tok
        if t.kind == "IDENT":
            raise UnknownOperator(f"unknown operator {t.text!r}", t.line, t.column,
                                  {"->", "|", "&", "U", "W", "R", "EOF"})
        p.fail({"->", "|", "&", "U", "W", "R", "EOF"})
    return f


@dataclass(frozen=True)
class SpecEntry:
    name: str
    formula: Formula
    source: str
    line: int


_NAME_COMMENT = re.compile(r"#\s*([A-Za-z_][A-Za-z0-9_]*)\s*\Z")


def parse_spec_file(text: str) -> list[SpecEntry]:
    """Parse a spec file: one formula per line, ``#`` comments, blank lines ignored.

    A comment consisting of a single word names the formula on the following
    line (or the formula it trails). Unnamed formulas are called ``phiN`` with
    N their 1-based position among the file's formulas.
    """
    entries = []
    pending = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body, hash_, comment = raw.partition("#")
        m = _NAME_COMMENT.match(hash_ + comment.strip()) if hash_ else None
        if not body.strip():
            if m:
                pending = m.group(1)
            continue
        f = parse(body, line=lineno)
        name = m.group(1) if m else pending or f"phi{len(entries) + 1}"
        entries.append(SpecEntry(name, f, body.strip(), lineno))
        pending = None
    return entries


# ---------------------------------------------------------------------------
# Printing


def pretty(f: Formula) -> str:
    """Fully parenthesised rendering; ``parse(pretty(f)) == f``."""
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, Atom):
        return f"{f.var} = {f.value}"
    if isinstance(f, _Unary):
        inner = pretty(f.arg)
        if isinstance(f.arg, Atom):
            inner = f"({inner})"
        sym = UNARY_SYMBOL[type(f)]
        return f"{sym}{inner}" if sym == "!" else f"{sym} {inner}"
    if isinstance(f, _Binary):
        return f"({pretty(f.left)} {BINARY_SYMBOL[type(f)]} {pretty(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=None)
def sort_key(f: Formula) -> str:
    """Total order on formulas, independent of hash randomisation."""
    return pretty(f)


# ---------------------------------------------------------------------------
# Normal forms


def wrap_globally(f: Formula) -> Formula:
    return Globally(f)


def to_nnf(f: Formula) -> Formula:
    """Negation normal form without ``->`` and ``W``.

    ``a W b`` becomes ``b R (a | b)``; F and G are kept as primitives.
    """
    return _nnf(f, False)


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, TrueConst):
        return FALSE if neg else TRUE
    if isinstance(f, FalseConst):
        return TRUE if neg else FALSE
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, Next):
        return Next(_nnf(f.arg, neg))
    if isinstance(f, Eventually):
        return Globally(_nnf(f.arg, True)) if neg else Eventually(_nnf(f.arg, False))
    if isinstance(f, Globally):
        return Eventually(_nnf(f.arg, True)) if neg else Globally(_nnf(f.arg, False))
    if isinstance(f, And):
        cls = Or if neg else And
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Or):
        cls = And if neg else Or
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Implies):
        if neg:
            return And(_nnf(f.left, False), _nnf(f.right, True))
        return Or(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Until):
        cls = Release if neg else Until
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Release):
        cls = Until if neg else Release
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, WeakUntil):
        return _nnf(Release(f.right, Or(f.left, f.right)), neg)
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, (Implies, WeakUntil)):
            return False
        if isinstance(g, Not) and not isinstance(g.arg, Atom):
            return False
    return True


def closure(f: Formula) -> frozenset[Formula]:
    """All distinct subformulas of ``f``."""
    return frozenset(subformulas(f))


# ---------------------------------------------------------------------------
# Ultimately periodic words


@dataclass(frozen=True)
class Lasso:
    """The infinite word ``prefix . cycle^omega``."""

    prefix: tuple[State, ...]
    cycle: tuple[State, ...]
    debug: tuple = field(default=(), compare=False, repr=False)

    def __init__(self, prefix: Sequence[Mapping[str, str]], cycle: Sequence[Mapping[str, str]],
                 debug: tuple = ()):
        if len(cycle) < 1:
            raise ValueError("lasso cycle must be nonempty")
        object.__setattr__(self, "prefix", tuple(State.of(s) for s in prefix))
        object.__setattr__(self, "cycle", tuple(State.of(s) for s in cycle))
        object.__setattr__(self, "debug", tuple(debug))

    def __len__(self) -> int:
        return len(self.prefix) + len(self.cycle)

    @property
    def states(self) -> tuple[State, ...]:
        return self.prefix + self.cycle

    def successor(self, i: int) -> int:
        return i + 1 if i + 1 < len(self) else len(self.prefix)

    def normalized(self) -> "Lasso":
        """Shortest representation of the same infinite word."""
        cycle = list(self.cycle)
        n = len(cycle)
        for p in range(1, n + 1):
            if n % p == 0 and cycle == cycle[:p] * (n // p):
                cycle = cycle[:p]
                break
        prefix = list(self.prefix)
        while prefix and prefix[-1] == cycle[-1]:
            cycle = [prefix.pop()] + cycle[:-1]
        return Lasso(prefix, cycle)

    def to_json(self) -> dict:
        return {"prefix": [s.to_dict() for s in self.prefix],
                "cycle": [s.to_dict() for s in self.cycle]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Lasso":
        return cls(data["prefix"], data["cycle"])


def eval_lasso(f: Formula, w: Lasso) -> bool:
    """Decide ``w, 0 |= f`` by direct evaluation over the lasso positions."""
    return _evaluate(f, w, {})[0]


def _evaluate(f: Formula, w: Lasso, memo: dict) -> list[bool]:
    if f in memo:
        return memo[f]
    states = w.states
    n = len(states)
    loop = len(w.prefix)
    nxt = [w.successor(i) for i in range(n)]

    if isinstance(f, TrueConst):
        out = [True] * n
    elif isinstance(f, FalseConst):
        out = [False] * n
    elif isinstance(f, Atom):
        out = []
        for s in states:
            if f.var not in s:
                raise UnboundVariable(f"variable {f.var!r} not assigned in {s!r}")
            out.append(s[f.var] == f.value)
    elif isinstance(f, Not):
        out = [not v for v in _evaluate(f.arg, w, memo)]
    elif isinstance(f, And):
        a, b = _evaluate(f.left, w, memo), _evaluate(f.right, w, memo)
        out = [x and y for x, y in zip(a, b)]
    elif isinstance(f, Or):
        a, b = _evaluate(f.left, w, memo), _evaluate(f.right, w, memo)
        out = [x or y for x, y in zip(a, b)]
    elif isinstance(f, Implies):
        a, b = _evaluate(f.left, w, memo), _evaluate(f.right, w, memo)
        out = [(not x) or y for x, y in zip(a, b)]
    elif isinstance(f, Next):
        a = _evaluate(f.arg, w, memo)
        out = [a[nxt[i]] for i in range(n)]
    else:
        if isinstance(f, Eventually):
            hold, stay, least = _evaluate(f.arg, w, memo), [True] * n, True
        elif isinstance(f, Globally):
            hold, stay, least = [False] * n, _evaluate(f.arg, w, memo), False
        elif isinstance(f, Until):
            stay, hold, least = _evaluate(f.left, w, memo), _evaluate(f.right, w, memo), True
        elif isinstance(f, WeakUntil):
            stay, hold, least = _evaluate(f.left, w, memo), _evaluate(f.right, w, memo), False
        elif isinstance(f, Release):
            # a R b  ==  b & (a | X(a R b)), greatest fixpoint
            a, b = _evaluate(f.left, w, memo), _evaluate(f.right, w, memo)
            out = _fixpoint(n, loop, nxt, lambda i, v: b[i] and (a[i] or v), False)
            memo[f] = out
            return out
        else:
            raise TypeError(f"not a formula: {f!r}")
        out = _fixpoint(n, loop, nxt, lambda i, v: hold[i] or (stay[i] and v), least)
    memo[f] = out
    return out


def _fixpoint(n: int, loop: int, nxt: list[int], step, least: bool) -> list[bool]:
    """Solve ``val[i] = step(i, val[nxt[i]])`` as a least or greatest fixpoint."""
    val = [not least] * n
    cycle_len = n - loop
    for _ in range(cycle_len + 1):
        changed = False
        for i in range(n - 1, loop - 1, -1):
            v = step(i, val[nxt[i]])
            if v != val[i]:
                val[i] = v
                changed = True
        if not changed:
            break
    else:
        raise AssertionError("fixpoint did not stabilise")  # pragma: no cover
    for i in range(loop - 1, -1, -1):
        val[i] = step(i, val[nxt[i]])
    return val
