"""Local randomness sources and uniformization.

The extractor maps length-n source blocks to K bins by greedy balancing:
blocks are taken in order of decreasing probability (ties by lexicographic
order of the block) and each goes to the currently lightest bin (ties by
lowest bin index). The achieved distance to uniform is computed exactly.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .guards import check_enum
from .info import DiscreteDistribution, entropy, renyi2, variational_distance

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def code_count(n: int, rate: float) -> int:
    """2 ** ceil(n * rate), tolerant of float noise in n * rate."""
    if rate < 0:
        raise ValueError(f"rate must be nonnegative, got {rate}")
    return 2 ** max(0, math.ceil(n * rate - 1e-9))


@dataclass(frozen=True)
class RandomnessSource:
    """I.i.d. source with a known per-symbol distribution."""

    p: DiscreteDistribution

    @classmethod
    def from_probs(cls, probs) -> "RandomnessSource":
        return cls(DiscreteDistribution(probs))

    @property
    def alphabet_size(self) -> int:
        return self.p.size

    @property
    def entropy(self) -> float:
        return entropy(self.p)

    @property
    def renyi2(self) -> float:
        return renyi2(self.p)

    def block_probs(self, n: int) -> np.ndarray:
        """Probabilities of all |R|^n blocks, indexed by the base-|R| value of the block.

        Blocks of the same type get bitwise-identical probabilities.
        """
        a = self.alphabet_size
        check_enum("|R|^n source blocks", a**n)
        counts = _symbol_counts(a, n)
        return np.prod(self.p.probs[None, :] ** counts, axis=1)

    def sample(self, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
        return rng.choice(self.alphabet_size, size=(size, n), p=self.p.probs)


def _block_digits(a: int, n: int) -> np.ndarray:
    idx = np.arange(a**n)
    return np.stack([(idx // a ** (n - 1 - t)) % a for t in range(n)], axis=1)


def _symbol_counts(a: int, n: int) -> np.ndarray:
    digits = _block_digits(a, n)
    return np.stack([(digits == s).sum(axis=1) for s in range(a)], axis=1)


def _biased_parts(n: int, alpha: float, rate: float):
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    if n < 1:
        raise ValueError("n must be at least 1")
    bits = max(0, math.ceil(n * rate - 1e-9))
    if bits == 0:
        raise ValueError("n * R must be positive to have more than one symbol")
    p1 = 2.0 ** (-n * alpha * rate)
    return bits, p1


def biased_example_source(n: int, alpha: float, rate: float) -> DiscreteDistribution:
    """Weights with P(first) = 2^(-n alpha R), the rest uniform over 2^ceil(nR) - 1 symbols."""
    bits, p1 = _biased_parts(n, alpha, rate)
    check_enum("2^ceil(nR) biased-source symbols", 2**bits)
    k = 2**bits
    p = np.full(k, (1.0 - p1) / (k - 1))
    p[0] = p1
    return DiscreteDistribution(p)


def biased_example_renyi2(n: int, alpha: float, rate: float) -> float:
    """Closed-form collision entropy of the biased source; no vector is built."""
    bits, p1 = _biased_parts(n, alpha, rate)
    rest = 2.0**bits - 1.0
    return float(-math.log2(p1 * p1 + (1.0 - p1) ** 2 / rest))


def biased_example_entropy(n: int, alpha: float, rate: float) -> float:
    bits, p1 = _biased_parts(n, alpha, rate)
    rest = 2.0**bits - 1.0
    q = (1.0 - p1) / rest
    return float(-p1 * math.log2(p1) - (1.0 - p1) * math.log2(q))


@dataclass(frozen=True)
class Extractor:
    n: int
    alphabet_size: int
    num_bins: int
    assignment: np.ndarray  # bin of each block, indexed by base-|R| block value
    achieved_distance: float

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.shape != (self.alphabet_size**self.n,):
            raise ValueError("assignment must cover every source block")
        if a.size and (a.min() < 0 or a.max() >= self.num_bins):
            raise ValueError("assignment refers to a bin outside 0..K-1")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    def bin_distribution(self, src: RandomnessSource) -> DiscreteDistribution:
        if src.alphabet_size != self.alphabet_size:
            raise ValueError("source alphabet does not match the extractor")
        mass = np.bincount(self.assignment, weights=src.block_probs(self.n), minlength=self.num_bins)
        return DiscreteDistribution(mass)

    def block_index(self, r_seq) -> int:
        seq = list(r_seq)
        if len(seq) != self.n:
            raise ValueError(f"source block has length {len(seq)}, expected {self.n}")
        idx = 0
        for s in seq:
            if not isinstance(s, (int, np.integer)) or not 0 <= s < self.alphabet_size:
                raise ValueError(f"symbol {s!r} outside the source alphabet 0..{self.alphabet_size - 1}")
            idx = idx * self.alphabet_size + int(s)
        return idx


def build_extractor(src: RandomnessSource, n: int, rate: float) -> Extractor:
    """Greedy balancing extractor onto K = 2^ceil(n * rate) bins.

    ``rate`` below H(R) is where the distance shrinks with n; larger rates are
    accepted and simply yield a large distance.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    k = code_count(n, rate)
    return build_extractor_bins(src, n, k)


def build_extractor_bins(src: RandomnessSource, n: int, num_bins: int) -> Extractor:
    a = src.alphabet_size
    check_enum("|R|^n source blocks", a**n)
    if num_bins > a**n:
        raise ValueError(f"K = {num_bins} bins exceed the {a**n} source blocks")
    if num_bins < 1:
        raise ValueError("need at least one bin")
    probs = src.block_probs(n)
    order = np.lexsort((np.arange(probs.size), -probs))
    heap = [(0.0, b) for b in range(num_bins)]
    mass = np.zeros(num_bins)
    assignment = np.empty(probs.size, dtype=np.int64)
    for s in order:
        _, b = heapq.heappop(heap)
        mass[b] += probs[s]
        assignment[s] = b
        heapq.heappush(heap, (mass[b], b))
    dist = variational_distance(
        np.bincount(assignment, weights=probs, minlength=num_bins),
        np.full(num_bins, 1.0 / num_bins),
    )
    return Extractor(n, a, num_bins, assignment, dist)


def extract(ex: Extractor, r_seq) -> int:
    """Bin (0-based) of one source block."""
    return int(ex.assignment[ex.block_index(r_seq)])


def format_extractor(ex: Extractor) -> str:
    if ex.alphabet_size > len(_DIGITS):
        raise ValueError(f"export supports alphabets up to {len(_DIGITS)} symbols")
    lines = [f"n={ex.n} K={ex.num_bins} distance={ex.achieved_distance!r}"]
    digits = _block_digits(ex.alphabet_size, ex.n)
    for row, b in zip(digits, ex.assignment):
        lines.append("".join(_DIGITS[d] for d in row) + f" {b}")
    return "\n".join(lines) + "\n"


def parse_extractor(text: str) -> Extractor:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty extractor file")
    try:
        fields = dict(item.split("=", 1) for item in lines[0].split())
        n, k, dist = int(fields["n"]), int(fields["K"]), float(fields["distance"])
    except (KeyError, ValueError):
        raise ValueError(f"line 1: malformed header {lines[0]!r}") from None
    seqs, bins = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or len(parts[0]) != n:
            raise ValueError(f"line {lineno}: expected '<{n} digits> <bin>', got {line!r}")
        try:
            seqs.append([_DIGITS.index(c) for c in parts[0]])
            bins.append(int(parts[1]))
        except ValueError:
            raise ValueError(f"line {lineno}: bad digit or bin in {line!r}") from None
    if not seqs:
        raise ValueError("extractor file lists no blocks")
    a = max(max(s) for s in seqs) + 1
    if len(seqs) != a**n:
        raise ValueError(f"file lists {len(seqs)} blocks, expected {a}^{n}")
    assignment = np.full(a**n, -1, dtype=np.int64)
    for s, b in zip(seqs, bins):
        idx = 0
        for d in s:
            idx = idx * a + d
        assignment[idx] = b
    if np.any(assignment < 0):
        raise ValueError("some blocks are missing from the file")
    return Extractor(n, a, k, assignment, dist)


def save_extractor(ex: Extractor, path) -> None:
    Path(path).write_text(format_extractor(ex))


def load_extractor(path) -> Extractor:
    return parse_extractor(Path(path).read_text())
