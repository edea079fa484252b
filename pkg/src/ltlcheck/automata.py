"""Tableau translation of NNF formulas to (generalized) Büchi automata.

Automata are state-labelled: each node carries a guard (a conjunction of
``var = value`` / ``var != value`` literals) that the letter read on entering
the node must satisfy. A run starts in an initial node whose guard matches the
first letter. Transitions are stored as ``(guard, target)`` pairs with the
guard being the target's label, so they can also be read edge-labelled.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from .errors import NotInNNF
from .ltl import (
    And,
    Atom,
    Eventually,
    FalseConst,
    Formula,
    Globally,
    Lasso,
    Next,
    Not,
    Or,
    Release,
    TrueConst,
    Until,
    is_nnf,
    sort_key,
    subformulas,
)

Literal = tuple[str, str, bool]
Guard = frozenset[Literal]


def guard_holds(guard: Guard, s: Mapping[str, str]) -> bool:
    return all((s.get(v) == x) == pos for v, x, pos in guard)


def guard_consistent(guard: Guard) -> bool:
    positive: dict[str, str] = {}
    for v, x, pos in guard:
        if pos:
            if positive.setdefault(v, x) != x:
                return False
    return not any(not pos and positive.get(v) == x for v, x, pos in guard)


def format_guard(guard: Guard) -> str:
    if not guard:
        return "true"
    lits = sorted(guard)
    return " & ".join(f"{v} = {x}" if pos else f"{v} != {x}" for v, x, pos in lits)


@dataclass(frozen=True)
class GeneralizedBuchiAutomaton:
    nodes: tuple[int, ...]
    initial: tuple[int, ...]
    labels: dict[int, Guard]
    transitions: dict[int, tuple[tuple[Guard, int], ...]]
    acceptance: tuple[frozenset[int], ...]
    # per node: (formulas the node asserts now, obligations for the next step)
    debug: dict[int, tuple[frozenset, frozenset]] | None = None


@dataclass(frozen=True)
class BuchiAutomaton:
    nodes: tuple[int, ...]
    initial: tuple[int, ...]
    labels: dict[int, Guard]
    transitions: dict[int, tuple[tuple[Guard, int], ...]]
    accepting: frozenset[int]
    # BA node -> (GBA node, counter)
    origin: dict[int, tuple[int, int]] | None = None


def eventualities(f: Formula) -> list[Formula]:
    """Until/Eventually subformulas in discovery (pre-order) order."""
    out = []
    for g in subformulas(f):
        if isinstance(g, (Until, Eventually)) and g not in out:
            out.append(g)
    return out


def _literal(f: Formula) -> Literal | None:
    if isinstance(f, Atom):
        return (f.var, f.value, True)
    if isinstance(f, Not) and isinstance(f.arg, Atom):
        return (f.arg.var, f.arg.value, False)
    return None


@dataclass
class _Pending:
    incoming: set
    new: frozenset
    old: frozenset
    nxt: frozenset


_INIT = -1


def translate_gba(f: Formula) -> GeneralizedBuchiAutomaton:
    """Tableau construction over (Now, Next) obligation sets.

    One acceptance set per Until/Eventually subformula, in discovery order: a
    node belongs to it unless it promises the eventuality without fulfilling it
    (``true`` counts as fulfilled since it is discharged without being recorded).
    """
    if not is_nnf(f):
        raise NotInNNF(f"formula is not in negation normal form: {f}")

    evs = eventualities(f)
    goals = [ev.right if isinstance(ev, Until) else ev.arg for ev in evs]

    def merge_key(old: frozenset, nxt: frozenset):
        # a node's future depends only on its Next set, so nodes that also agree
        # on label and acceptance membership are interchangeable
        label = frozenset(l for g in old if (l := _literal(g)) is not None)
        member = tuple(ev not in old or goal in old or isinstance(goal, TrueConst)
                       for ev, goal in zip(evs, goals))
        return label, nxt, member

    index: dict[tuple, int] = {}
    keys: list[tuple[frozenset, frozenset]] = []
    incoming: list[set] = []
    stack = [_Pending({_INIT}, frozenset([f]), frozenset(), frozenset())]

    while stack:
        node = stack.pop()
        if not node.new:
            key = merge_key(node.old, node.nxt)
            if key in index:
                incoming[index[key]] |= node.incoming
            else:
                nid = len(keys)
                index[key] = nid
                keys.append((node.old, node.nxt))
                incoming.append(set(node.incoming))
                stack.append(_Pending({nid}, node.nxt, frozenset(), frozenset()))
            continue

        eta = min(node.new, key=sort_key)
        rest = node.new - {eta}
        old = node.old
        if eta in old:
            stack.append(_Pending(node.incoming, rest, old, node.nxt))
            continue

        def child(add_new=(), add_next=(), keep_eta=True):
            new = rest | (frozenset(add_new) - old)
            return _Pending(set(node.incoming), new,
                            old | {eta} if keep_eta else old, node.nxt | frozenset(add_next))

        if isinstance(eta, TrueConst):
            stack.append(child(keep_eta=False))
        elif isinstance(eta, FalseConst):
            continue
        elif (lit := _literal(eta)) is not None:
            lits = {l for g in old if (l := _literal(g)) is not None}
            if guard_consistent(frozenset(lits | {lit})):
                stack.append(child())
        elif isinstance(eta, And):
            stack.append(child(add_new=(eta.left, eta.right)))
        elif isinstance(eta, Next):
            stack.append(child(add_next=(eta.arg,)))
        elif isinstance(eta, Globally):
            stack.append(child(add_new=(eta.arg,), add_next=(eta,)))
        else:
            # split: first branch is pushed last so it is expanded first
            if isinstance(eta, Or):
                first, second = child((eta.left,)), child((eta.right,))
            elif isinstance(eta, Until):
                first, second = child((eta.left,), (eta,)), child((eta.right,))
            elif isinstance(eta, Release):
                first, second = child((eta.right,), (eta,)), child((eta.left, eta.right))
            elif isinstance(eta, Eventually):
                first, second = child((), (eta,)), child((eta.arg,))
            else:
                raise NotInNNF(f"unexpected operator in NNF formula: {eta}")
            stack.append(second)
            stack.append(first)

    nodes = tuple(range(len(keys)))
    labels = {}
    for nid, (old, _) in enumerate(keys):
        labels[nid] = frozenset(l for g in old if (l := _literal(g)) is not None)
    succ: dict[int, list[tuple[Guard, int]]] = {n: [] for n in nodes}
    initial = []
    for target in nodes:
        for src in sorted(incoming[target]):
            if src == _INIT:
                initial.append(target)
            else:
                succ[src].append((labels[target], target))
    member = [merge_key(*keys[n])[2] for n in nodes]
    acceptance = [frozenset(n for n in nodes if member[n][i]) for i in range(len(evs))]
    return GeneralizedBuchiAutomaton(
        nodes=nodes,
        initial=tuple(initial),
        labels=labels,
        transitions={n: tuple(sorted(ts, key=lambda t: t[1])) for n, ts in succ.items()},
        acceptance=tuple(acceptance),
        debug={n: keys[n] for n in nodes},
    )


def degeneralize(g: GeneralizedBuchiAutomaton) -> BuchiAutomaton:
    """Counter construction, keeping only nodes reachable from the initial ones."""
    sets = g.acceptance or (frozenset(g.nodes),)
    k = len(sets)
    ids: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []

    def intern(pair):
        if pair not in ids:
            ids[pair] = len(order)
            order.append(pair)
        return ids[pair]

    initial = tuple(intern((q, 0)) for q in g.initial)
    transitions = {}
    i = 0
    while i < len(order):
        q, c = order[i]
        nc = (c + 1) % k if q in sets[c] else c
        transitions[i] = tuple((guard, intern((t, nc))) for guard, t in g.transitions[q])
        i += 1
    nodes = tuple(range(len(order)))
    return BuchiAutomaton(
        nodes=nodes,
        initial=initial,
        labels={n: g.labels[order[n][0]] for n in nodes},
        transitions=transitions,
        accepting=frozenset(n for n in nodes if order[n][1] == 0 and order[n][0] in sets[0]),
        origin={n: order[n] for n in nodes},
    )


def build_automaton(f: Formula) -> BuchiAutomaton:
    return degeneralize(translate_gba(f))


def accepts_lasso(a: BuchiAutomaton, w: Lasso) -> bool:
    """Whether some run over ``w`` visits an accepting node infinitely often."""
    states = w.states
    start = [(q, 0) for q in a.initial if guard_holds(a.labels[q], states[0])]

    def succ(node):
        q, i = node
        j = w.successor(i)
        return [(t, j) for guard, t in a.transitions[q] if guard_holds(guard, states[j])]

    reach = set(start)
    stack = list(start)
    while stack:
        for m in succ(stack.pop()):
            if m not in reach:
                reach.add(m)
                stack.append(m)

    for node in sorted(reach):
        if node[0] not in a.accepting:
            continue
        seen, stack = set(), succ(node)
        while stack:
            m = stack.pop()
            if m == node:
                return True
            if m not in seen:
                seen.add(m)
                stack.extend(succ(m))
    return False


# ---------------------------------------------------------------------------
# Export


def to_text(a: BuchiAutomaton | GeneralizedBuchiAutomaton) -> str:
    """Plain-text dump: header lines, then ``src -- guard --> dst`` per transition.

    Initial nodes read their first letter through a pseudo-source ``init``.
    """
    lines = ["initial: " + " ".join(map(str, a.initial))]
    if isinstance(a, BuchiAutomaton):
        lines.append("accepting: " + " ".join(map(str, sorted(a.accepting))))
    else:
        for acc in a.acceptance:
            lines.append("accepting: {" + " ".join(map(str, sorted(acc))) + "}")
        if not a.acceptance:
            lines.append("accepting: all")
    for q in a.initial:
        lines.append(f"init -- {format_guard(a.labels[q])} --> {q}")
    for src in a.nodes:
        for guard, dst in a.transitions[src]:
            lines.append(f"{src} -- {format_guard(guard)} --> {dst}")
    return "\n".join(lines) + "\n"


def to_dot(a: BuchiAutomaton, name: str = "automaton") -> str:
    out = [f'digraph "{name}" {{', "  rankdir=LR;", '  init [shape=point];']
    for n in a.nodes:
        shape = "doublecircle" if n in a.accepting else "circle"
        out.append(f"  {n} [shape={shape}];")
    for q in a.initial:
        out.append(f'  init -> {q} [label="{format_guard(a.labels[q])}"];')
    for src in a.nodes:
        for guard, dst in a.transitions[src]:
            out.append(f'  {src} -> {dst} [label="{format_guard(guard)}"];')
    out.append("}")
    return "\n".join(out) + "\n"

