"""Random superposition wiretap codes with explicit stochastic encoding.

A code has ``m0`` cloud centers u(i) drawn i.i.d. from p_U and, for each
cloud, ``m * kr`` satellite codewords x(i, j, k) drawn i.i.d. from
p_{X|U} given u(i). Message (i, j) is sent as x(i, j, k) with the
randomization index k supplied explicitly, sampled from a weight vector, or
extracted from a source block. Indices are 0-based.

Leakage and error probability are computed exactly by enumerating output
sequences whenever the enumeration guard allows, which keeps threshold
experiments free of estimator bias.

RNG contract: every random draw comes from
``SeedSequence(seed, spawn_key=(stream,))`` with ``stream`` one of the
``*_STREAM`` constants below. Experiments give codebook ``c`` the 64-bit
seed ``derive_seed(master, c)``, so serial and threaded runs agree.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .guards import MAX_CODE_SYMBOLS, ResourceLimitError, check_enum
from .info import (
    DiscreteDistribution,
    WiretapChannel,
    binary_entropy,
    entropy,
    mutual_information,
    renyi2,
)
from .randomness import Extractor, code_count, extract

CODEBOOK_STREAM = 0
TRIALS_STREAM = 1
ENCODE_STREAM = 2

_SEED_LIMIT = 2**64


def derived_rng(seed: int, stream: int) -> np.random.Generator:
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def derive_seed(seed: int, index: int) -> int:
    """64-bit child seed number ``index`` of a master seed."""
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    hi, lo = np.random.SeedSequence(seed, spawn_key=(0x5EED, index)).generate_state(2, np.uint32)
    return (int(hi) << 32) | int(lo)


@dataclass(frozen=True)
class CodeParams:
    n: int
    m0: int
    m: int
    kr: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("block length n must be at least 1")
        for name in ("m0", "m", "kr"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if not 0 <= self.seed < _SEED_LIMIT:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_rates(cls, n: int, r0: float, r: float, rr: float, seed: int = 0) -> "CodeParams":
        """Counts 2^ceil(n * rate) for each of the three rates."""
        return cls(n, code_count(n, r0), code_count(n, r), code_count(n, rr), seed)

    @property
    def r0(self) -> float:
        return math.log2(self.m0) / self.n

    @property
    def r(self) -> float:
        return math.log2(self.m) / self.n

    @property
    def rr(self) -> float:
        return math.log2(self.kr) / self.n

    @property
    def num_codewords(self) -> int:
        return self.m0 * self.m * self.kr


@dataclass(frozen=True)
class WiretapCode:
    params: CodeParams
    channel: WiretapChannel
    p_u: DiscreteDistribution
    p_x_given_u: np.ndarray  # |U| x |X|
    u_words: np.ndarray  # m0 x n
    x_words: np.ndarray  # m0 x m x kr x n

    @property
    def n(self) -> int:
        return self.params.n

    def flat_codewords(self) -> np.ndarray:
        """All codewords, shape ``(m0*m*kr) x n`` in (i, j, k) C-order."""
        return self.x_words.reshape(-1, self.n)


def _inverse_cdf(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Symbol index for uniforms ``u`` given rows of cumulative probabilities (last axis)."""
    return np.minimum((u[..., None] >= cdf[..., :-1]).sum(axis=-1), cdf.shape[-1] - 1)


def _cdf(p: np.ndarray) -> np.ndarray:
    c = np.cumsum(p, axis=-1)
    c[..., -1] = 1.0
    return c


def build_random_code(
    ch: WiretapChannel,
    p_u: DiscreteDistribution,
    p_x_given_u,
    params: CodeParams,
) -> WiretapCode:
    """Draw a code from the random ensemble; same inputs and seed give identical tables.

    Uniform draws are consumed for u(i) in (i, position) order, then for
    x(i, j, k) in (i, j, k, position) order.
    """
    pxu = np.array(
        [row.probs if isinstance(row, DiscreteDistribution) else row for row in p_x_given_u],
        dtype=float,
    )
    if pxu.ndim != 2 or pxu.shape != (p_u.size, ch.nx):
        raise ValueError(f"p_x_given_u must be {p_u.size} x {ch.nx}, got {pxu.shape}")
    pxu = np.array([DiscreteDistribution(row).probs for row in pxu])
    n = params.n
    symbols = params.num_codewords * n
    if symbols > MAX_CODE_SYMBOLS:
        raise ResourceLimitError("m0*m*kr*n code symbols", symbols, MAX_CODE_SYMBOLS)

    rng = derived_rng(params.seed, CODEBOOK_STREAM)
    u_draw = rng.random((params.m0, n))
    x_draw = rng.random((params.m0, params.m, params.kr, n))
    u_words = _inverse_cdf(_cdf(p_u.probs), u_draw)
    x_cdf = _cdf(pxu)[u_words][:, None, None, :, :]  # m0 x 1 x 1 x n x |X|
    x_words = _inverse_cdf(x_cdf, x_draw)
    pxu.setflags(write=False)
    u_words.setflags(write=False)
    x_words.setflags(write=False)
    return WiretapCode(params, ch, p_u, pxu, u_words, x_words)


def encode(
    code: WiretapCode,
    i: int,
    j: int,
    k: int | None = None,
    *,
    p_ur: DiscreteDistribution | None = None,
    extractor: Extractor | None = None,
    r_seq=None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Codeword x(i, j, k) with k given, drawn from ``p_ur``, or extracted from ``r_seq``."""
    p = code.params
    if not (0 <= i < p.m0 and 0 <= j < p.m):
        raise ValueError(f"message ({i}, {j}) outside {p.m0} x {p.m}")
    chosen = [k is not None, p_ur is not None, extractor is not None]
    if sum(chosen) != 1:
        raise ValueError("give exactly one of k, p_ur, extractor")
    if p_ur is not None:
        if p_ur.size != p.kr:
            raise ValueError(f"p_ur has {p_ur.size} symbols, code has kr = {p.kr}")
        rng = rng if rng is not None else derived_rng(p.seed, ENCODE_STREAM)
        k = int(rng.choice(p.kr, p=p_ur.probs))
    elif extractor is not None:
        if extractor.num_bins != p.kr:
            raise ValueError(f"extractor has {extractor.num_bins} bins, code has kr = {p.kr}")
        if r_seq is None:
            raise ValueError("extractor-driven encoding needs a source block")
        k = extract(extractor, r_seq)
    if not 0 <= k < p.kr:
        raise ValueError(f"randomization index {k} outside 0..{p.kr - 1}")
    return code.x_words[i, j, k].copy()


# -- likelihood machinery -------------------------------------------------------


def _sequence_digits(base: int, n: int) -> np.ndarray:
    idx = np.arange(base**n)
    return np.stack([(idx // base ** (n - 1 - t)) % base for t in range(n)], axis=1)


def sequence_likelihoods(codewords: np.ndarray, w: np.ndarray) -> np.ndarray:
    """W^n(b^n | x^n) for every codeword row and every output sequence in base-|B| order."""
    codewords = np.atleast_2d(codewords)
    c, n = codewords.shape
    out = np.ones((c, 1))
    for pos in range(n):
        out = (out[:, :, None] * w[codewords[:, pos]][:, None, :]).reshape(c, -1)
    return out


def _pair_counts(left: np.ndarray, left_size: int, right: np.ndarray, right_size: int) -> np.ndarray:
    """Joint type counts N(a, b) between rows of ``left`` and rows of ``right``.

    Returns shape ``left_size x right_size x len(left) x len(right)``.
    """
    lo = np.stack([(left == a) for a in range(left_size)]).astype(np.int32)
    ro = np.stack([(right == b) for b in range(right_size)]).astype(np.int32)
    return np.einsum("alp,brp->ablr", lo, ro)


def _log_likelihoods(codewords: np.ndarray, w: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """log2 W^n(y|x) from joint types.

    Counts are pooled per distinct kernel value before taking logs, so two
    sequences whose likelihoods are the same product of kernel entries get
    bit-identical scores and ties resolve by index.
    """
    nx, ny = w.shape
    counts = _pair_counts(codewords, nx, ys, ny)
    out = np.zeros(counts.shape[2:])
    for v in np.unique(w):
        pooled = counts[w == v].sum(axis=0)
        if v > 0:
            out += pooled * math.log2(v)
        else:
            out = np.where(pooled > 0, -np.inf, out)
    return out


def _ml_decisions(code: WiretapCode, ys: np.ndarray) -> np.ndarray:
    """Flat codeword index chosen by ML for each received row; first maximum wins."""
    return np.argmax(_log_likelihoods(code.flat_codewords(), code.channel.main, ys), axis=0)


def decode_ml(code: WiretapCode, y) -> tuple[int, int, int]:
    """Codeword (i, j, k) maximizing W^n(y | x(i, j, k)); ties go to the smallest index."""
    y = np.asarray(y, dtype=np.int64).reshape(1, -1)
    if y.shape[1] != code.n:
        raise ValueError(f"received sequence has length {y.shape[1]}, expected {code.n}")
    flat = int(_ml_decisions(code, y)[0])
    p = code.params
    return tuple(int(v) for v in np.unravel_index(flat, (p.m0, p.m, p.kr)))


def _typical(counts: np.ndarray, target: np.ndarray, n: int, eps: float) -> np.ndarray:
    """Strong typicality of joint types ``counts`` (letters first) against ``target``."""
    k = target.ndim
    t = target.reshape(target.shape + (1,) * (counts.ndim - k))
    dev = np.abs(counts / n - t) <= eps
    support = (t > 0) | (counts == 0)
    return np.all(dev & support, axis=tuple(range(k)))


def _typicality_decisions(code: WiretapCode, ys: np.ndarray, eps: float) -> np.ndarray:
    """Flat codeword index per received row, or -1 for an erasure."""
    p = code.params
    n = code.n
    nu, nx = code.p_x_given_u.shape
    w = code.channel.main
    ny = w.shape[1]
    p_ux = code.p_u.probs[:, None] * code.p_x_given_u
    p_uxy = p_ux[:, :, None] * w[None, :, :]
    p_uy = p_uxy.sum(axis=1)

    cloud_ok = _typical(_pair_counts(code.u_words, nu, ys, ny), p_uy, n, eps)  # m0 x Y
    n_clouds = cloud_ok.sum(axis=0)
    cloud = np.argmax(cloud_ok, axis=0)

    x = code.x_words.reshape(p.m0, p.m * p.kr, n)
    u_rep = np.broadcast_to(code.u_words[:, None, :], x.shape)
    ux = (u_rep * nx + x).reshape(-1, n)  # joint letter of (u, x) per position
    counts = _pair_counts(ux, nu * nx, ys, ny).reshape(nu, nx, ny, -1, ys.shape[0])
    word_ok = _typical(counts, p_uxy, n, eps).reshape(p.m0, p.m * p.kr, -1)

    rows = np.arange(ys.shape[0])
    ok_in_cloud = word_ok[cloud, :, rows]  # Y x (m*kr)
    n_words = ok_in_cloud.sum(axis=1)
    word = np.argmax(ok_in_cloud, axis=1)
    flat = cloud * (p.m * p.kr) + word
    return np.where((n_clouds == 1) & (n_words == 1), flat, -1)


def decode_typicality(code: WiretapCode, y, epsilon: float) -> tuple[int, int, int] | None:
    """Two-stage unique-typical-index decoder; ``None`` stands for the erasure symbol.

    Stage one finds the unique cloud u(i) jointly typical with y; stage two
    the unique x(i, j, k) with (u(i), x(i, j, k), y) jointly typical. A joint
    type is typical when every letter frequency is within ``epsilon`` of the
    target probability and letters of probability zero do not occur.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    y = np.asarray(y, dtype=np.int64).reshape(1, -1)
    if y.shape[1] != code.n:
        raise ValueError(f"received sequence has length {y.shape[1]}, expected {code.n}")
    flat = int(_typicality_decisions(code, y, epsilon)[0])
    if flat < 0:
        return None
    p = code.params
    return tuple(int(v) for v in np.unravel_index(flat, (p.m0, p.m, p.kr)))


# -- leakage ----------------------------------------------------------------------


@dataclass(frozen=True)
class Leakage:
    """Exact secrecy metrics of a code for a uniform message j.

    ``bits`` and ``vd`` treat the cloud index as part of the channel (i
    uniform, marginalized); the ``*_given_cloud`` pair conditions on it,
    i.e. I(M;Z^n|M0) and V(p_{M M0 Z^n}, p_M p_{M0 Z^n}). They coincide
    when m0 = 1.
    """

    bits: float
    vd: float
    bits_given_cloud: float
    vd_given_cloud: float


def _check_p_ur(code: WiretapCode, p_ur: DiscreteDistribution | None) -> np.ndarray:
    if p_ur is None:
        return np.full(code.params.kr, 1.0 / code.params.kr)
    if p_ur.size != code.params.kr:
        raise ValueError(f"p_ur has {p_ur.size} symbols, code has kr = {code.params.kr}")
    return p_ur.probs


def _message_output_dists(code: WiretapCode, w: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """p(b^n | i, j) = sum_k weights[k] W^n(b^n | x(i, j, k)); shape m0 x m x |B|^n."""
    p = code.params
    out = []
    for i in range(p.m0):
        rows = []
        for j in range(p.m):
            like = sequence_likelihoods(code.x_words[i, j], w)
            rows.append(weights @ like)
        out.append(rows)
    return np.array(out)


def _vd_mz(p_z_given_m: np.ndarray) -> tuple[float, float]:
    m = p_z_given_m.shape[0]
    joint = p_z_given_m / m
    indep = joint.sum(axis=0, keepdims=True) / m
    return mutual_information(joint), float(np.abs(joint - indep).sum())


def exact_leakage(code: WiretapCode, p_ur: DiscreteDistribution | None = None) -> Leakage:
    """I(M;Z^n) and V(p_{MZ^n}, p_M p_{Z^n}) from one enumeration of z^n."""
    w = code.channel.eavesdropper
    check_enum("|Z|^n eavesdropper sequences", w.shape[1] ** code.n)
    weights = _check_p_ur(code, p_ur)
    pz = _message_output_dists(code, w, weights)
    bits, vd = _vd_mz(pz.mean(axis=0))
    per_cloud = [_vd_mz(pz[i]) for i in range(code.params.m0)]
    return Leakage(
        bits,
        vd,
        float(np.mean([c[0] for c in per_cloud])),
        float(np.mean([c[1] for c in per_cloud])),
    )


def leakage_bound_from_vd(vd: float, m: int) -> float:
    """Continuity bound on I(M;Z^n) given V(p_{MZ^n}, p_M p_{Z^n}) = vd and m messages."""
    if not 0.0 <= vd <= 2.0 + 1e-12:
        raise ValueError(f"variational distance must lie in [0, 2], got {vd}")
    if m < 1:
        raise ValueError("need at least one message")
    if vd > 0.5:
        return math.log2(m)
    return vd * math.log2(m) + binary_entropy(vd)


# -- error probability -----------------------------------------------------------


@dataclass(frozen=True)
class ErrorEstimate:
    pe: float
    ci_halfwidth: float
    exact: bool
    trials: int


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("need at least one trial")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _decisions(code: WiretapCode, ys: np.ndarray, decoder: str, epsilon: float) -> np.ndarray:
    if decoder == "ml":
        return _ml_decisions(code, ys)
    if decoder in ("typ", "typicality"):
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        return _typicality_decisions(code, ys, epsilon)
    raise ValueError(f"unknown decoder {decoder!r}; use 'ml' or 'typicality'")


_Y_CHUNK = 2**12


def exact_pe(
    code: WiretapCode,
    p_ur: DiscreteDistribution | None = None,
    decoder: str = "ml",
    epsilon: float = 0.1,
) -> float:
    """Average message error probability, summing over every y^n."""
    w = code.channel.main
    ny = w.shape[1]
    check_enum("|Y|^n received sequences", ny**code.n)
    weights = _check_p_ur(code, p_ur)
    p = code.params
    ys_all = _sequence_digits(ny, code.n)
    flat_words = code.flat_codewords()
    msg_of_word = np.arange(p.num_codewords) // p.kr
    word_weight = np.tile(weights, p.m0 * p.m) / (p.m0 * p.m)
    correct = 0.0
    for start in range(0, ys_all.shape[0], _Y_CHUNK):
        ys = ys_all[start:start + _Y_CHUNK]
        dec = _decisions(code, ys, decoder, epsilon)
        like = np.ones((flat_words.shape[0], ys.shape[0]))
        for pos in range(code.n):
            like *= w[flat_words[:, pos][:, None], ys[:, pos][None, :]]
        dec_msg = np.where(dec >= 0, dec // p.kr, -1)
        hit = msg_of_word[:, None] == dec_msg[None, :]
        correct += float(np.sum(word_weight[:, None] * like * hit))
    return float(min(1.0, max(0.0, 1.0 - correct)))


def monte_carlo_pe(
    code: WiretapCode,
    p_ur: DiscreteDistribution | None = None,
    decoder: str = "ml",
    epsilon: float = 0.1,
    trials: int = 10_000,
    seed: int = 0,
) -> ErrorEstimate:
    """Sample (i, j) uniformly, k from ``p_ur``, and channel noise; Wilson 95% interval."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    weights = _check_p_ur(code, p_ur)
    p = code.params
    w = code.channel.main
    rng = derived_rng(seed, TRIALS_STREAM)
    msg = rng.integers(0, p.m0 * p.m, size=trials)
    ks = rng.choice(p.kr, size=trials, p=weights)
    words = code.flat_codewords()[msg * p.kr + ks]
    ys = _inverse_cdf(_cdf(w)[words], rng.random(words.shape))
    errors = 0
    for start in range(0, trials, _Y_CHUNK):
        dec = _decisions(code, ys[start:start + _Y_CHUNK], decoder, epsilon)
        dec_msg = np.where(dec >= 0, dec // p.kr, -1)
        errors += int(np.sum(dec_msg != msg[start:start + _Y_CHUNK]))
    lo, hi = wilson_interval(errors, trials)
    return ErrorEstimate(errors / trials, (hi - lo) / 2, False, trials)


def estimate_pe(
    code: WiretapCode,
    p_ur: DiscreteDistribution | None = None,
    decoder: str = "ml",
    epsilon: float = 0.1,
    trials: int = 10_000,
    seed: int = 0,
    exact: bool | None = None,
) -> ErrorEstimate:
    """Exact error probability when |Y|^n is enumerable, else Monte Carlo."""
    if exact is None:
        try:
            check_enum("|Y|^n", code.channel.ny**code.n)
            exact = True
        except ResourceLimitError:
            exact = False
    if exact:
        return ErrorEstimate(exact_pe(code, p_ur, decoder, epsilon), 0.0, True, 0)
    return monte_carlo_pe(code, p_ur, decoder, epsilon, trials, seed)


# -- reports and experiments -------------------------------------------------------


@dataclass(frozen=True)
class SimulationReport:
    n: int
    r0: float
    r: float
    rr: float
    seed: int
    pe: float
    pe_ci: float
    leakage_bits: float
    vd: float
    mode: str  # "exact" or "monte_carlo" (for pe; leakage is always exact)
    trials: int


def simulate_code(
    code: WiretapCode,
    p_ur: DiscreteDistribution | None = None,
    decoder: str = "ml",
    epsilon: float = 0.1,
    trials: int = 10_000,
    seed: int = 0,
) -> SimulationReport:
    leak = exact_leakage(code, p_ur)
    err = estimate_pe(code, p_ur, decoder, epsilon, trials, seed)
    p = code.params
    return SimulationReport(
        p.n, p.r0, p.r, p.rr, p.seed, err.pe, err.ci_halfwidth, leak.bits, leak.vd,
        "exact" if err.exact else "monte_carlo", err.trials,
    )


def mean_ci(values) -> tuple[float, float]:
    """Sample mean and normal-approximation 95% half-width."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return float(v.mean()), 0.0
    return float(v.mean()), float(1.959963984540054 * v.std(ddof=1) / math.sqrt(v.size))


@dataclass(frozen=True)
class ResolvabilityResult:
    n: int
    mean_vd: float
    ci_halfwidth: float
    mean_leakage_bits: float
    vds: np.ndarray
    leakages: np.ndarray
    seeds: tuple[int, ...]


def resolvability_experiment(
    ch: WiretapChannel,
    p_u: DiscreteDistribution,
    p_x_given_u,
    n: int,
    p_ur: DiscreteDistribution,
    num_codebooks: int,
    seed: int,
    m: int = 2,
    m0: int = 1,
    threads: int = 1,
) -> ResolvabilityResult:
    """Average exact V(p_{MZ^n}, p_M p_{Z^n}) over independently drawn codebooks."""
    if num_codebooks < 1:
        raise ValueError("need at least one codebook")
    seeds = tuple(derive_seed(seed, c) for c in range(num_codebooks))

    def one(s: int) -> Leakage:
        code = build_random_code(ch, p_u, p_x_given_u, CodeParams(n, m0, m, p_ur.size, s))
        return exact_leakage(code, p_ur)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            leaks = list(pool.map(one, seeds))
    else:
        leaks = [one(s) for s in seeds]
    vds = np.array([lk.vd for lk in leaks])
    bits = np.array([lk.bits for lk in leaks])
    mean, half = mean_ci(vds)
    return ResolvabilityResult(n, mean, half, float(bits.mean()), vds, bits, seeds)


def randomness_rates(p_ur: DiscreteDistribution, n: int) -> tuple[float, float]:
    """(R2(p_ur)/n, H(p_ur)/n)."""
    return renyi2(p_ur) / n, entropy(p_ur) / n
