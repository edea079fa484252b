"""The ClaimChain claims-processing workflow and its five temporal requirements.

A claim is issued, signed by the submitting peer and then either gathers the
endorsements its policy requires or is dropped. Endorsed claims are evaluated
by the fraud model, which decides the claim status, and the evaluated claim
either lands in the world state or is discarded. Terminal stages persist.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .checker import CheckMode, Verdict, check, verify_counterexample
from .errors import SuiteMismatch
from .kripke import Model, parse_model, totalize
from .ltl import Formula, parse_spec_file, pretty

STAGES = (
    "issued",
    "signed",
    "endorsed",
    "evaluated",
    "claim_asset_dropped",
    "claim_updated_discarded",
    "evaluated_world_state_updated",
)
STATUSES = ("initial", "approved", "denied", "flagged")
TERMINAL_STAGES = ("claim_asset_dropped", "claim_updated_discarded", "evaluated_world_state_updated")

MODEL_TEXT = """\
# ClaimChain claim lifecycle, from issuance to the world-state update.

var stage : {issued, signed, endorsed, evaluated,
             claim_asset_dropped, claim_updated_discarded, evaluated_world_state_updated};
var claim_status : {initial, approved, denied, flagged};

init stage = issued & claim_status = initial;

# the submitting peer simulates and signs the issue transaction
trans stage = issued -> next(stage) = signed;

# endorsement policy met, or the claim asset is dropped
trans stage = signed -> next(stage) = endorsed;
trans stage = signed -> next(stage) = claim_asset_dropped;

# ordered, committed and checked by the fraud model, which decides the status
trans stage = endorsed -> next(stage) = evaluated,
                          next(claim_status) in {approved, denied, flagged};

# decision recorded in the world state, or the update is discarded
trans stage = evaluated -> next(stage) = evaluated_world_state_updated;
trans stage = evaluated -> next(stage) = claim_updated_discarded;

# terminal stages persist
trans stage = claim_asset_dropped -> next(stage) = claim_asset_dropped;
trans stage = claim_updated_discarded -> next(stage) = claim_updated_discarded;
trans stage = evaluated_world_state_updated -> next(stage) = evaluated_world_state_updated;
"""

SPEC_TEXT = """\
# ClaimChain requirements, checked at the initial state.

# phi1
stage = endorsed -> F (claim_status = approved) | F (claim_status = denied) | F (claim_status = flagged)
# phi2
stage = issued -> F (stage = claim_asset_dropped) | F (stage = claim_updated_discarded) | F (stage = evaluated_world_state_updated)
# phi3
stage = issued -> F (stage = endorsed)
# phi4
stage = signed & stage != endorsed -> G (stage = claim_asset_dropped)
# phi5
stage = issued -> F (stage = evaluated)
"""

SPEC_IDS = ("phi1", "phi2", "phi3", "phi4", "phi5")
EXPECTED = (True, True, False, True, False)


def builtin_model() -> Model:
    return totalize(parse_model(MODEL_TEXT, name="claimchain"))


def builtin_specs() -> list[Formula]:
    return [e.formula for e in parse_spec_file(SPEC_TEXT)]


def symbol(holds: bool) -> str:
    return "⊤" if holds else "⊥"


@dataclass(frozen=True)
class SuiteEntry:
    id: str
    formula: Formula
    verdict: Verdict
    elapsed: float
    counterexample_valid: bool | None

    def to_json(self) -> dict:
        v = self.verdict
        return {
            "id": self.id,
            "formula": pretty(self.formula),
            "verdict": v.outcome,
            "vacuous": v.vacuous,
            "elapsed_seconds": round(self.elapsed, 3),
            "counterexample": v.counterexample.to_json() if v.counterexample else None,
            "counterexample_valid": self.counterexample_valid,
        }


@dataclass(frozen=True)
class SuiteReport:
    mode: CheckMode
    entries: tuple[SuiteEntry, ...]
    expected: tuple[bool, ...] = field(default=EXPECTED)

    @property
    def observed(self) -> tuple[bool, ...]:
        return tuple(e.verdict.holds for e in self.entries)

    @property
    def passed(self) -> bool:
        return self.observed == self.expected

    def observed_symbols(self) -> str:
        return ",".join(symbol(h) for h in self.observed)

    def expected_symbols(self) -> str:
        return ",".join(symbol(h) for h in self.expected)

    def to_json(self) -> dict:
        return {
            "model": "claimchain",
            "mode": self.mode.value,
            "expected": ["holds" if h else "fails" for h in self.expected],
            "specs": [e.to_json() for e in self.entries],
            "pass": self.passed,
        }

    def render(self) -> str:
        lines = [f"ClaimChain verification suite ({self.mode.value})",
                 "Spec  Verdict  Time (s)  Note"]
        for e, want in zip(self.entries, self.expected):
            notes = []
            if e.verdict.vacuous:
                notes.append("vacuous")
            if e.verdict.holds != want:
                notes.append(f"expected {symbol(want)}")
            lines.append(f"{e.id:<5} {symbol(e.verdict.holds):^7}  {e.elapsed:8.3f}  {', '.join(notes)}")
        for e in self.entries:
            if e.verdict.counterexample is not None:
                lines.append(f"counterexample for {e.id}:")
                lines.extend("  " + line for line in format_lasso(e.verdict.counterexample))
        status = "PASS" if self.passed else "FAIL"
        lines.append(f"{status}: observed {self.observed_symbols()} vs expected {self.expected_symbols()}")
        return "\n".join(lines)


def format_lasso(w) -> list[str]:
    def show(s):
        return " ".join(f"{k}={v}" for k, v in s.items())

    out = [f"-> {show(s)}" for s in w.prefix]
    out.append("-- loop starts here --")
    out.extend(f"-> {show(s)}" for s in w.cycle)
    return out


def run_suite(mode: CheckMode = CheckMode.AS_WRITTEN, *, strict: bool = False) -> SuiteReport:
    """Check the five requirements against the built-in model.

    With ``strict`` a verdict vector other than the expected one raises
    ``SuiteMismatch``; otherwise the mismatch is reported via ``passed``.
    """
    m = builtin_model()
    entries = []
    for sid, f in zip(SPEC_IDS, builtin_specs()):
        start = time.perf_counter()
        v = check(m, f, mode)
        elapsed = time.perf_counter() - start
        valid = None
        if v.counterexample is not None:
            valid = bool(verify_counterexample(m, f, mode, v.counterexample))
        entries.append(SuiteEntry(sid, f, v, elapsed, valid))
    report = SuiteReport(mode, tuple(entries))
    if strict and not report.passed:
        raise SuiteMismatch(report)
    return report
