"""Finite-alphabet probability and information measures.

All logarithms are base 2. Distributions and channels are immutable value
objects wrapping read-only numpy arrays.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.optimize import linprog

NORM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability vector over symbols ``0..K-1``, renormalized on construction."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("distribution needs at least one symbol")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("probabilities must be finite and nonnegative")
        total = p.sum()
        if total <= 0:
            raise ValueError("probabilities sum to zero")
        if abs(total - 1.0) > NORM_TOL:
            p = p / total
        object.__setattr__(self, "probs", _frozen(p))

    @classmethod
    def uniform(cls, k: int) -> "DiscreteDistribution":
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def point_mass(cls, k: int, at: int = 0) -> "DiscreteDistribution":
        p = np.zeros(k)
        p[at] = 1.0
        return cls(p)

    def __len__(self) -> int:
        return self.probs.size

    @property
    def size(self) -> int:
        return self.probs.size

    def entropy(self) -> float:
        return entropy(self)

    def renyi2(self) -> float:
        return renyi2(self)


@dataclass(frozen=True)
class WiretapChannel:
    """Joint kernel W(y, z | x) stored as an ``nx x (ny*nz)`` table.

    Column ``y*nz + z`` of row ``x`` holds W(y, z | x) (y-major, z-minor).
    """

    nx: int
    ny: int
    nz: int
    kernel: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=float)
        if k.shape != (self.nx, self.ny * self.nz):
            raise ValueError(
                f"kernel shape {k.shape} does not match nx={self.nx}, ny*nz={self.ny * self.nz}"
            )
        for x, row in enumerate(k):
            if np.any(row < 0) or not np.all(np.isfinite(row)):
                raise ValueError(f"kernel row {x} has negative or non-finite entries")
            if abs(row.sum() - 1.0) > 1e-9:
                raise ValueError(f"kernel row {x} sums to {row.sum():.12g}, not 1")
        k = k / k.sum(axis=1, keepdims=True)
        object.__setattr__(self, "kernel", _frozen(k))

    @classmethod
    def from_marginals(cls, w_y, w_z, name: str = "") -> "WiretapChannel":
        """Channel whose outputs are conditionally independent given the input."""
        w_y = np.asarray(w_y, dtype=float)
        w_z = np.asarray(w_z, dtype=float)
        if w_y.shape[0] != w_z.shape[0]:
            raise ValueError("marginal kernels disagree on the input alphabet")
        nx, ny = w_y.shape
        nz = w_z.shape[1]
        joint = (w_y[:, :, None] * w_z[:, None, :]).reshape(nx, ny * nz)
        return cls(nx, ny, nz, joint, name=name)

    @property
    def joint(self) -> np.ndarray:
        return self.kernel.reshape(self.nx, self.ny, self.nz)

    @property
    def main(self) -> np.ndarray:
        """W(y|x), shape ``nx x ny``."""
        return self.joint.sum(axis=2)

    @property
    def eavesdropper(self) -> np.ndarray:
        """W(z|x), shape ``nx x nz``."""
        return self.joint.sum(axis=1)


def bsc(p: float) -> np.ndarray:
    return np.array([[1.0 - p, p], [p, 1.0 - p]])


def bsc_pair(p_main: float, p_eve: float) -> WiretapChannel:
    return WiretapChannel.from_marginals(
        bsc(p_main), bsc(p_eve), name=f"BSC({p_main:g})/BSC({p_eve:g})"
    )


@dataclass(frozen=True)
class JointDistribution:
    """Two-axis joint table p(a, b); entries nonnegative, total mass one."""

    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim != 2:
            raise ValueError("joint table must be two-dimensional (A x B)")
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise ValueError("joint entries must be finite and nonnegative")
        total = t.sum()
        if total <= 0:
            raise ValueError("joint table has zero mass")
        if abs(total - 1.0) > NORM_TOL:
            t = t / total
        object.__setattr__(self, "table", _frozen(t))

    @classmethod
    def from_channel(cls, p_x, w) -> "JointDistribution":
        p_x = _probs(p_x)
        return cls(p_x[:, None] * np.asarray(w, dtype=float))

    @property
    def marginal_a(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def marginal_b(self) -> np.ndarray:
        return self.table.sum(axis=0)


def _probs(p) -> np.ndarray:
    if isinstance(p, DiscreteDistribution):
        return p.probs
    return np.asarray(p, dtype=float)


def entropy(p) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    q = _probs(p)
    q = q[q > 0]
    return float(max(0.0, -np.sum(q * np.log2(q))))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def renyi2(p) -> float:
    """Collision entropy -log2 sum p^2 in bits."""
    q = _probs(p)
    return float(max(0.0, -np.log2(np.sum(q * q))))


def mutual_information(j) -> float:
    """I(A;B) of a joint table, evaluated in relative-entropy form.

    The relative-entropy form gives exactly zero for point-mass inputs, which
    the entropy-difference form does not.
    """
    t = j.table if isinstance(j, JointDistribution) else np.asarray(j, dtype=float)
    pa = t.sum(axis=1, keepdims=True)
    pb = t.sum(axis=0, keepdims=True)
    mask = t > 0
    # separate logs: pa * pb can underflow while t > 0
    la = np.log2(np.broadcast_to(pa, t.shape)[mask])
    lb = np.log2(np.broadcast_to(pb, t.shape)[mask])
    val = np.sum(t[mask] * (np.log2(t[mask]) - la - lb))
    return float(max(0.0, val))


def channel_mutual_information(p_x, w) -> float:
    """I(X;B) for input ``p_x`` through row-stochastic ``w``."""
    return mutual_information(JointDistribution.from_channel(p_x, w))


def channel_mutual_information_batch(inputs: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorized I(X;B) for each row of ``inputs`` (shape ``G x nx``)."""
    inputs = np.asarray(inputs, dtype=float)
    w = np.asarray(w, dtype=float)
    out = inputs @ w  # G x nb
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(w[None, :, :] > 0, w[None, :, :] / out[:, None, :], 1.0)
        terms = inputs[:, :, None] * w[None, :, :] * np.log2(ratio)
    terms = np.where((inputs[:, :, None] > 0) & (w[None, :, :] > 0), terms, 0.0)
    return np.maximum(0.0, terms.sum(axis=(1, 2)))


def conditional_mutual_information(p_u, joints) -> float:
    """I(A;B|U) = sum_u p(u) I(A;B|U=u); ``joints`` lists one table per u."""
    pu = _probs(p_u)
    joints = list(joints)
    if len(joints) != pu.size:
        raise ValueError(f"{len(joints)} joint tables given for {pu.size} values of U")
    return float(sum(w * mutual_information(j) for w, j in zip(pu, joints)))


def variational_distance(p, q) -> float:
    """Sum of absolute differences; lies in [0, 2]."""
    a, b = _probs(p), _probs(q)
    if a.shape != b.shape:
        raise ValueError(f"alphabet sizes differ: {a.size} vs {b.size}")
    return float(np.abs(a - b).sum())


def simplex_grid(k: int, resolution: int) -> np.ndarray:
    """All distributions on ``k`` symbols with entries in multiples of 1/resolution.

    Rows follow lexicographic order of the integer compositions, first
    coordinate descending, so that ``(1, 0, ..., 0)`` comes first.
    """
    if resolution < 1:
        raise ValueError("grid resolution must be positive")
    if k == 1:
        return np.ones((1, 1))
    rows = []
    # stars and bars: choose k-1 bar positions among resolution + k - 1 slots
    for bars in itertools.combinations(range(resolution + k - 1), k - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(resolution + k - 2 - prev)
        rows.append(parts)
    grid = np.array(rows[::-1], dtype=float) / resolution
    assert grid.shape[0] == comb(resolution + k - 1, k - 1)
    return grid


@dataclass(frozen=True)
class DegradednessResult:
    degraded: bool
    witness: np.ndarray | None
    residual: float

    def __bool__(self) -> bool:
        return self.degraded


def is_degraded(ch: WiretapChannel, tol: float = 1e-9) -> DegradednessResult:
    """Decide whether W(z|x) = W(y|x) Q for some row-stochastic Q.

    Solves ``min t`` subject to ``|W_Y Q - W_Z| <= t`` entrywise, ``Q >= 0``,
    rows of Q summing to one. Degraded iff the optimal residual is at most ``tol``.
    """
    wy, wz = ch.main, ch.eavesdropper
    nx, ny, nz = ch.nx, ch.ny, ch.nz
    nq = ny * nz
    nv = nq + 1  # Q entries (row-major over y, z) then t
    c = np.zeros(nv)
    c[-1] = 1.0

    a_ub = []
    b_ub = []
    for x in range(nx):
        for z in range(nz):
            row = np.zeros(nv)
            for y in range(ny):
                row[y * nz + z] = wy[x, y]
            up = row.copy()
            up[-1] = -1.0
            a_ub.append(up)
            b_ub.append(wz[x, z])
            down = -row
            down[-1] = -1.0
            a_ub.append(down)
            b_ub.append(-wz[x, z])
    a_eq = np.zeros((ny, nv))
    for y in range(ny):
        a_eq[y, y * nz:(y + 1) * nz] = 1.0
    res = linprog(
        c,
        A_ub=np.array(a_ub),
        b_ub=np.array(b_ub),
        A_eq=a_eq,
        b_eq=np.ones(ny),
        bounds=[(0, None)] * nv,
        method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"degradedness LP failed: {res.message}")
    q = np.clip(res.x[:nq].reshape(ny, nz), 0.0, None)
    q = q / q.sum(axis=1, keepdims=True)
    residual = float(np.abs(wy @ q - wz).max())
    ok = residual <= tol
    return DegradednessResult(ok, q if ok else None, residual)


@dataclass(frozen=True)
class LessCapableVerdict:
    """Grid certificate for I(X;Z) <= I(X;Y); not a proof off the grid."""

    holds_on_grid: bool
    witness: np.ndarray
    max_excess: float
    resolution: int

    def __bool__(self) -> bool:
        return self.holds_on_grid


def is_less_capable(
    ch: WiretapChannel, grid_resolution: int, tol: float = 1e-12
) -> LessCapableVerdict:
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    grid = simplex_grid(ch.nx, grid_resolution)
    excess = channel_mutual_information_batch(grid, ch.eavesdropper) - (
        channel_mutual_information_batch(grid, ch.main)
    )
    i = int(np.argmax(excess))
    worst = float(excess[i])
    return LessCapableVerdict(worst <= tol, _frozen(grid[i]), worst, grid_resolution)
