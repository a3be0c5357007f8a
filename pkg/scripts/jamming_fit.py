"""KS distance of jammed eavesdropper noise to a Gaussian as the jamming codebook rate varies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from _common import parse_config, write_rows
from wrl import max_jamming_power, simulate_jamming
from wrl.jamming import resolvability_rate


@dataclass(frozen=True)
class Config:
    sigma2: float = 1.0
    entropy_bits: float = 1.0
    n: int = 8
    samples: int = 100_000
    seed: int = 1
    rates: tuple = (0.1, 0.25, 0.5, 0.75, 1.0, 1.25)


def run(cfg: Config):
    rho = max_jamming_power(cfg.sigma2, cfg.entropy_bits)
    threshold = resolvability_rate(cfg.sigma2, rho)
    rows = []
    for rate in cfg.rates:
        sim = simulate_jamming(cfg.sigma2, rho, cfg.n, rate, cfg.samples, cfg.seed)
        rows.append([repr(rho), rate, repr(threshold), sim.num_codewords, repr(sim.ks_stat)])
    return rows


if __name__ == "__main__":
    cfg, out = parse_config(Config)
    write_rows(["rho", "code_rate", "resolvability_rate", "codewords", "ks_stat"], run(cfg), out)
