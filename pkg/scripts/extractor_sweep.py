"""Greedy extractor distance to uniform over block length and extraction rate."""
from __future__ import annotations

from dataclasses import dataclass

from _common import parse_config, write_rows
from wrl import RandomnessSource, build_extractor


@dataclass(frozen=True)
class Config:
    p0: float = 0.11
    rates: tuple = (0.1, 0.25, 0.4)
    max_n: int = 16


def run(cfg: Config):
    src = RandomnessSource.from_probs([cfg.p0, 1 - cfg.p0])
    rows = []
    for rr in cfg.rates:
        for n in range(1, cfg.max_n + 1):
            ex = build_extractor(src, n, rr)
            # the heaviest block alone forces this much distance on any extractor
            floor = 2 * max(0.0, max(cfg.p0, 1 - cfg.p0) ** n - 1 / ex.num_bins)
            rows.append([rr, n, ex.num_bins, repr(ex.achieved_distance), repr(floor)])
    return rows


if __name__ == "__main__":
    cfg, out = parse_config(Config)
    write_rows(["rr", "n", "K", "distance", "heaviest_block_floor"], run(cfg), out)
