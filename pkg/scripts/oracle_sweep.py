"""Sweep the automaton/lasso-evaluation cross-check over seeds and formula depths.

Also records automaton sizes against the 2^|closure| bound.

    python3 scripts/oracle_sweep.py --seeds 0 1 2 --depths 2 3 4 --cases 1000
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ltlcheck.automata import translate_gba
from ltlcheck.ltl import closure
from ltlcheck.oracle import generate_case, run_oracle


@dataclass
class SweepConfig:
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2])
    depths: list[int] = field(default_factory=lambda: [2, 3, 4])
    cases: int = 1000
    out: str | None = None


def automaton_sizes(seed: int, depth: int, cases: int) -> dict:
    ratios, worst = [], 0.0
    for i in range(cases):
        f, _ = generate_case(seed, i, depth)
        n = len(translate_gba(f).nodes)
        r = n / 2 ** len(closure(f))
        ratios.append(r)
        worst = max(worst, r)
    return {"mean_fill": sum(ratios) / len(ratios), "max_fill": worst}


def run(cfg: SweepConfig) -> dict:
    rows = []
    for depth in cfg.depths:
        for seed in cfg.seeds:
            start = time.perf_counter()
            res = run_oracle(cfg.cases, seed, depth)
            rows.append({"seed": seed, "depth": depth, "cases": cfg.cases,
                         "disagreements": len(res.failures), "seconds": time.perf_counter() - start,
                         **automaton_sizes(seed, depth, min(cfg.cases, 200))})
            if not res.ok:
                print(res.render())
    return {"config": asdict(cfg), "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=SweepConfig().seeds)
    ap.add_argument("--depths", type=int, nargs="+", default=SweepConfig().depths)
    ap.add_argument("--cases", type=int, default=SweepConfig.cases)
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = SweepConfig(args.seeds, args.depths, args.cases, args.out)
    data = run(cfg)
    print("depth seed  cases  disagree  secs   fill(max)")
    for r in data["rows"]:
        print(f"{r['depth']:>5} {r['seed']:>4} {r['cases']:>6} {r['disagreements']:>9} "
              f"{r['seconds']:6.2f}  {r['max_fill']:.3f}")
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    raise SystemExit(0 if all(r["disagreements"] == 0 for r in data["rows"]) else 1)


if __name__ == "__main__":
    main()
