"""Independent reference computations used only by the tests.

Nothing here calls into the library's computational paths; each oracle
re-derives its quantity from definitions with plain loops or a different
formula.
"""
import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def h2(p):
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def shannon(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


def mi_entropy_form(table):
    """H(A) + H(B) - H(A,B) with explicit loops."""
    table = [list(map(float, row)) for row in table]
    pa = [sum(row) for row in table]
    pb = [sum(col) for col in zip(*table)]
    pab = [v for row in table for v in row]
    return shannon(pa) + shannon(pb) - shannon(pab)


def binary_input_mi(q, w):
    """I(X;B) for P(X=0) = q (vectorized over q) via H(B) - H(B|X)."""
    q = np.asarray(q, dtype=float)
    w = np.asarray(w, dtype=float)
    out = q[..., None] * w[0] + (1 - q[..., None]) * w[1]

    def ent(p):
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        return t.sum(axis=-1)

    return ent(out) - (q * ent(w[0]) + (1 - q) * ent(w[1]))


def brute_force_capacity_binary(w_y, w_z, budget, resolution):
    """max over a (lambda, p0, p1) grid of lam*g0 + (1-lam)*g1 s.t. lam*c0 + (1-lam)*c1 <= budget."""
    q = np.arange(resolution + 1) / resolution
    cost = binary_input_mi(q, w_z)
    gain = binary_input_mi(q, w_y) - cost
    lam = q
    best = -np.inf
    for a in range(q.size):
        c = lam[:, None] * cost[a] + (1 - lam[:, None]) * cost[None, :]
        g = lam[:, None] * gain[a] + (1 - lam[:, None]) * gain[None, :]
        feasible = c <= budget + 1e-15
        if feasible.any():
            best = max(best, float(g[feasible].max()))
    return best


def seq_prob(w, x, b):
    p = 1  # stays exact when w holds Fractions
    for xs, bs in zip(x, b):
        p *= w[xs][bs]
    return p


def brute_force_leakage(x_words_cloud, w_z, p_ur):
    """I(M;Z^n) and V for one cloud by looping over (m, k, z^n) triples."""
    m_count, k_count, n = x_words_cloud.shape
    nz = len(w_z[0])
    zs = list(itertools.product(range(nz), repeat=n))
    joint = [[0.0] * len(zs) for _ in range(m_count)]
    for m in range(m_count):
        for k in range(k_count):
            x = [int(v) for v in x_words_cloud[m][k]]
            for zi, z in enumerate(zs):
                joint[m][zi] += p_ur[k] * seq_prob(w_z, x, z) / m_count
    pz = [sum(joint[m][zi] for m in range(m_count)) for zi in range(len(zs))]
    info = 0.0
    vd = 0.0
    for m in range(m_count):
        for zi in range(len(zs)):
            pj = joint[m][zi]
            prod = pz[zi] / m_count
            vd += abs(pj - prod)
            if pj > 0:
                info += pj * math.log2(pj / prod)
    return info, vd


def brute_force_ml_pe(codewords, w_y, p_ur, m, kr):
    """Exact average message error of codeword-ML decoding, one y^n at a time.

    Likelihoods are compared as exact rationals so ties go to the smallest index.
    """
    n = len(codewords[0])
    ny = len(w_y[0])
    exact_w = [[Fraction(v) for v in row] for row in w_y]
    err = 0.0
    for y in itertools.product(range(ny), repeat=n):
        likes = [seq_prob(w_y, [int(v) for v in cw], y) for cw in codewords]
        exact = [seq_prob(exact_w, [int(v) for v in cw], y) for cw in codewords]
        best = max(range(len(codewords)), key=lambda i: (exact[i], -i))
        for idx, like in enumerate(likes):
            if idx // kr != best // kr:
                err += like * p_ur[idx % kr] / m
    return err


def extractor_bin_masses(p, n, assignment, k):
    """Bin masses by enumerating every block with itertools."""
    masses = [0.0] * k
    for idx, seq in enumerate(itertools.product(range(len(p)), repeat=n)):
        prob = 1.0
        for s in seq:
            prob *= p[s]
        masses[assignment[idx]] += prob
    return masses


def optimal_binary_extractor_distance(p0, n, k):
    """Exact minimum of sum_b |mass_b - 1/K| over all block-to-bin maps (binary source).

    Blocks of equal weight are interchangeable, so the MILP decides how many
    blocks of each Hamming weight go to each bin.
    """
    weights = np.array([p0 ** t * (1 - p0) ** (n - t) for t in range(n + 1)])
    mult = np.array([math.comb(n, t) for t in range(n + 1)], dtype=float)
    types = n + 1
    nv = types * k + k
    c = np.r_[np.zeros(types * k), np.ones(k)]
    rows, lo, hi = [], [], []
    for t in range(types):
        r = np.zeros(nv)
        r[t * k:(t + 1) * k] = 1
        rows.append(r)
        lo.append(mult[t])
        hi.append(mult[t])
    for b in range(k):
        r = np.zeros(nv)
        r[[t * k + b for t in range(types)]] = weights
        r[types * k + b] = -1
        rows.append(r)
        lo.append(-np.inf)
        hi.append(1 / k)
        r = r.copy()
        r[types * k + b] = 1
        rows.append(r)
        lo.append(1 / k)
        hi.append(np.inf)
    res = milp(
        c,
        constraints=LinearConstraint(np.array(rows), lo, hi),
        integrality=np.r_[np.ones(types * k), np.zeros(k)],
        bounds=Bounds(np.zeros(nv), np.r_[np.repeat(mult, k), np.full(k, np.inf)]),
        options={"mip_rel_gap": 0.0},
    )
    assert res.success
    return float(res.fun)
