"""Randomised cross-check of the automaton route against direct lasso evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import accepts_lasso, build_automaton
from .gen import case_rng, random_alphabet, random_formula, random_lasso
from .ltl import Formula, Lasso, eval_lasso, pretty, size, subformulas, to_nnf


def disagrees(f: Formula, w: Lasso) -> bool:
    return accepts_lasso(build_automaton(f), w) != eval_lasso(f, w)


def generate_case(seed: int, index: int, depth: int = 4) -> tuple[Formula, Lasso]:
    rng = case_rng(seed, index)
    alphabet = random_alphabet(rng, max_vars=2, max_values=3)
    f = to_nnf(random_formula(rng, alphabet, depth))
    return f, random_lasso(rng, alphabet, max_prefix=3, max_cycle=3)


def shrink(f: Formula, w: Lasso) -> tuple[Formula, Lasso]:
    """Greedily reduce a disagreeing pair to a smaller one that still disagrees."""
    progress = True
    while progress:
        progress = False
        for g in sorted(set(subformulas(f)) - {f}, key=size):
            if disagrees(g, w):
                f, progress = g, True
                break
        states = list(w.prefix), list(w.cycle)
        for part in (0, 1):
            for i in range(len(states[part])):
                cut = [list(states[0]), list(states[1])]
                del cut[part][i]
                if not cut[1]:
                    continue
                v = Lasso(*cut)
                if disagrees(f, v):
                    w, progress = v, True
                    break
            if progress:
                break
    return f, w


@dataclass
class OracleResult:
    cases: int
    seed: int
    failures: list[tuple[int, Formula, Lasso]] = field(default_factory=list)
    minimal: tuple[int, Formula, Lasso] | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        if self.cases == 0:
            return "0 cases run; nothing to compare"
        if self.ok:
            return f"{self.cases} cases (seed {self.seed}): automata agree with lasso evaluation"
        idx, f, w = self.minimal
        lines = [f"{len(self.failures)} of {self.cases} cases disagree (seed {self.seed})",
                 f"replay: --seed {self.seed}, case index {idx}",
                 f"minimal formula: {pretty(f)}",
                 f"minimal lasso: prefix {[s.to_dict() for s in w.prefix]} "
                 f"cycle {[s.to_dict() for s in w.cycle]}"]
        return "\n".join(lines)

    def to_json(self) -> dict:
        out = {"cases": self.cases, "seed": self.seed, "disagreements": len(self.failures),
               "ok": self.ok, "minimal": None}
        if self.minimal:
            idx, f, w = self.minimal
            out["minimal"] = {"index": idx, "formula": pretty(f), "lasso": w.to_json()}
        return out


def run_oracle(cases: int = 1000, seed: int = 0, depth: int = 4) -> OracleResult:
    result = OracleResult(cases, seed)
    for i in range(cases):
        f, w = generate_case(seed, i, depth)
        if disagrees(f, w):
            result.failures.append((i, f, w))
    if result.failures:
        i, f, w = min(result.failures, key=lambda c: (size(c[1]), len(c[2])))
        f, w = shrink(f, w)
        result.minimal = (i, f, w)
    return result
