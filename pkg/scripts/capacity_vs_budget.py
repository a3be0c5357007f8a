"""Rate-limited secrecy capacity of a BSC pair as the randomness budget grows."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from _common import parse_config, write_rows
from wrl import bsc_pair, secrecy_capacity


@dataclass(frozen=True)
class Config:
    """Sweep the budget from 0 to max_budget bits per channel use."""

    main_crossover: float = 0.1
    eve_crossover: float = 0.3
    max_budget: float = 0.2
    points: int = 41
    grid: int = 200


def run(cfg: Config):
    ch = bsc_pair(cfg.main_crossover, cfg.eve_crossover)
    rows = []
    for b in np.linspace(0.0, cfg.max_budget, cfg.points):
        res = secrecy_capacity(ch, float(b), cfg.grid)
        rows.append([repr(float(b)), repr(res.rate), repr(res.lam), repr(res.randomness_used),
                     int(res.constraint_active)])
    return rows


if __name__ == "__main__":
    cfg, out = parse_config(Config)
    write_rows(["budget", "rate", "lambda", "randomness_used", "constraint_active"], run(cfg), out)
