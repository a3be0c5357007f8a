"""Cooperative jamming with a rate-limited randomness source.

A jammer whose codebook rate is capped at H(R) can only make C^n + N^n look
Gaussian up to the power rho at which 1/2 log2(1 + rho / sigma2) = H(R).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import ks_2samp

from .guards import ResourceLimitError, check_enum


def max_jamming_power(sigma2: float, h_r: float) -> float:
    """sigma2 * (2^(2 H_R) - 1): the power whose resolvability rate equals H_R."""
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    if h_r < 0:
        raise ValueError(f"H_R must be nonnegative, got {h_r}")
    return sigma2 * (2.0 ** (2.0 * h_r) - 1.0)


def displayed_bound(sigma2: float, h_r: float) -> float:
    """The alternative closed form sigma2 * 2^(2 H_R - 1), kept for comparison."""
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    return sigma2 * 2.0 ** (2.0 * h_r - 1.0)


def formula_discrepancy(sigma2: float, h_r: float) -> float | None:
    """Relative gap between the two closed forms, or None when below 1%."""
    a = max_jamming_power(sigma2, h_r)
    b = displayed_bound(sigma2, h_r)
    gap = abs(a - b) / max(abs(a), abs(b))
    return gap if gap > 0.01 else None


@dataclass(frozen=True)
class JammingScenario:
    sigma2: float
    h_r: float

    def __post_init__(self):
        max_jamming_power(self.sigma2, self.h_r)  # validates

    @property
    def rho_max(self) -> float:
        return max_jamming_power(self.sigma2, self.h_r)

    def eavesdropper_rate(self, power: float) -> float:
        """1/2 log2(1 + P / (sigma2 + rho_max)) under full-strength jamming."""
        return 0.5 * math.log2(1.0 + power / (self.sigma2 + self.rho_max))


def resolvability_rate(sigma2: float, rho: float) -> float:
    return 0.5 * math.log2(1.0 + rho / sigma2)


@dataclass(frozen=True)
class JammingSimulation:
    ks_stat: float
    pvalue: float
    num_codewords: int
    pooled: int


def simulate_jamming(
    sigma2: float,
    rho: float,
    n: int,
    code_rate: float,
    num_samples: int,
    seed: int,
) -> JammingSimulation:
    """KS distance between pooled coordinates of C^n + N^n and N(0, sigma2 + rho) draws.

    The jamming codebook holds 2^ceil(n * code_rate) i.i.d. N(0, rho)
    words; each sample picks one uniformly and adds N(0, sigma2) noise.
    """
    if not sigma2 > 0 or rho < 0:
        raise ValueError("need sigma2 > 0 and rho >= 0")
    if n < 1 or num_samples < 1:
        raise ValueError("n and num_samples must be positive")
    bits = max(0, math.ceil(n * code_rate - 1e-9))
    if bits > 62:
        raise ResourceLimitError("jamming codebook bits", bits, 62)
    words = 2**bits
    check_enum("jamming codewords", words)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    codebook = rng.normal(0.0, math.sqrt(rho), size=(words, n))
    pick = rng.integers(0, words, size=num_samples)
    observed = codebook[pick] + rng.normal(0.0, math.sqrt(sigma2), size=(num_samples, n))
    reference = rng.normal(0.0, math.sqrt(sigma2 + rho), size=num_samples * n)
    res = ks_2samp(observed.ravel(), reference)
    return JammingSimulation(float(res.statistic), float(res.pvalue), words, num_samples * n)


def ks_critical_value(n1: int, n2: int, alpha: float = 0.05) -> float:
    """Asymptotic two-sample KS acceptance threshold."""
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c * math.sqrt((n1 + n2) / (n1 * n2))
