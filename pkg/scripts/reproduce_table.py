"""Reproduce the ClaimChain verdict table under both check modes.

    python3 scripts/reproduce_table.py --repeats 5 --out results/table.json
"""

import argparse
import json
import statistics
from dataclasses import asdict, dataclass
from pathlib import Path

from ltlcheck.checker import CheckMode
from ltlcheck.claimchain import run_suite


@dataclass
class TableConfig:
    repeats: int = 5
    modes: tuple[str, ...] = ("as-written", "globally-wrapped")
    out: str | None = None


def run(cfg: TableConfig) -> dict:
    results = {}
    for mode in cfg.modes:
        runs = [run_suite(CheckMode(mode)) for _ in range(cfg.repeats)]
        first = runs[0]
        # verdicts must not depend on the repetition
        assert all(r.observed == first.observed for r in runs)
        rows = []
        for i, e in enumerate(first.entries):
            times = [r.entries[i].elapsed for r in runs]
            rows.append({"id": e.id, "verdict": e.verdict.outcome, "vacuous": e.verdict.vacuous,
                         "median_seconds": statistics.median(times), "max_seconds": max(times),
                         "counterexample_valid": e.counterexample_valid})
        results[mode] = {"observed": first.observed_symbols(), "expected": first.expected_symbols(),
                         "matches_expected": first.passed, "rows": rows}
    return {"config": asdict(cfg), "results": results}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=TableConfig.repeats)
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = TableConfig(repeats=args.repeats, out=args.out)
    data = run(cfg)
    for mode, res in data["results"].items():
        print(f"{mode}: {res['observed']} (expected {res['expected']})")
        for row in res["rows"]:
            note = " vacuous" if row["vacuous"] else ""
            print(f"  {row['id']}  {row['verdict']:<5}  median {row['median_seconds']:.4f}s{note}")
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
