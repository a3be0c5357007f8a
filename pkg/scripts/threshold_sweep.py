"""Mean exact variational distance over random codebooks, uniform randomization, n sweep."""
from __future__ import annotations

from dataclasses import dataclass

from _common import parse_config, write_rows
from wrl import DiscreteDistribution, bsc_pair, resolvability_experiment
from wrl.randomness import code_count


@dataclass(frozen=True)
class Config:
    """For each Rr and n, K_r = 2^ceil(n Rr) uniform randomization indices, M = 2 messages."""

    rates: tuple = (0.05, 0.3, 0.5, 0.6)
    lengths: tuple = (4, 6, 8, 10, 12)
    codebooks: int = 100
    seed: int = 7
    threads: int = 4


def run(cfg: Config):
    ch = bsc_pair(0.1, 0.3)
    rows = []
    for rr in cfg.rates:
        for n in cfg.lengths:
            kr = code_count(n, rr)
            res = resolvability_experiment(ch, DiscreteDistribution([1.0]), [[0.5, 0.5]], n,
                                           DiscreteDistribution.uniform(kr), cfg.codebooks, cfg.seed,
                                           threads=cfg.threads)
            rows.append([rr, n, kr, repr(res.mean_vd), repr(res.ci_halfwidth), repr(res.mean_leakage_bits)])
    return rows


if __name__ == "__main__":
    cfg, out = parse_config(Config)
    write_rows(["Rr", "n", "K_r", "mean_vd", "ci_halfwidth", "mean_leakage_bits"], run(cfg), out)
