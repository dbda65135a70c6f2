"""Hot loops, each in a numba and a pure-numpy flavour.

The public names at the bottom are bound to one flavour according to
:mod:`wignerbell._accel`. Both flavours stay importable under their
suffixed names so tests and the benchmark can compare them directly.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

_TWO_PI = 2.0 * math.pi
# values within this distance of the maximum count as ties in the scan
SCAN_TIE_TOL = 1e-12


# ---------------------------------------------------------------------------
# Gaussian-mixture evaluation

def marginal_grid_numpy(weights, mx1, mx2, var1, var2, xs):
    # per-component 1D densities, shape (K, steps)
    g1 = np.exp(-((xs[None, :] - mx1[:, None]) ** 2) / (2.0 * var1[:, None]))
    g1 /= np.sqrt(_TWO_PI * var1)[:, None]
    g2 = np.exp(-((xs[None, :] - mx2[:, None]) ** 2) / (2.0 * var2[:, None]))
    g2 /= np.sqrt(_TWO_PI * var2)[:, None]
    return np.einsum("k,ki,kj->ij", weights, g1, g2)


@njit(cache=True)
def marginal_grid_numba(weights, mx1, mx2, var1, var2, xs):
    n = xs.shape[0]
    out = np.zeros((n, n))
    g1 = np.empty(n)
    g2 = np.empty(n)
    for k in range(weights.shape[0]):
        c1 = 1.0 / math.sqrt(_TWO_PI * var1[k])
        c2 = 1.0 / math.sqrt(_TWO_PI * var2[k])
        for i in range(n):
            d1 = xs[i] - mx1[k]
            d2 = xs[i] - mx2[k]
            g1[i] = c1 * math.exp(-d1 * d1 / (2.0 * var1[k]))
            g2[i] = c2 * math.exp(-d2 * d2 / (2.0 * var2[k]))
        w = weights[k]
        for i in range(n):
            a = w * g1[i]
            for j in range(n):
                out[i, j] += a * g2[j]
    return out


def eval_points_numpy(weights, means, var1, var2, pts):
    """``means`` is (K, 4) as (x1, p1, x2, p2); ``pts`` is (N, 4)."""
    d = pts[None, :, :] - means[:, None, :]
    r1 = d[:, :, 0] ** 2 + d[:, :, 1] ** 2
    r2 = d[:, :, 2] ** 2 + d[:, :, 3] ** 2
    g = np.exp(-r1 / (2.0 * var1[:, None]) - r2 / (2.0 * var2[:, None]))
    g /= (_TWO_PI * var1 * _TWO_PI * var2)[:, None]
    return weights @ g


@njit(cache=True)
def eval_points_numba(weights, means, var1, var2, pts):
    n = pts.shape[0]
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for k in range(weights.shape[0]):
            a = pts[i, 0] - means[k, 0]
            b = pts[i, 1] - means[k, 1]
            c = pts[i, 2] - means[k, 2]
            d = pts[i, 3] - means[k, 3]
            e = -(a * a + b * b) / (2.0 * var1[k]) - (c * c + d * d) / (2.0 * var2[k])
            acc += weights[k] * math.exp(e) / (_TWO_PI * var1[k] * _TWO_PI * var2[k])
        out[i] = acc
    return out


# ---------------------------------------------------------------------------
# Sampling

def assemble_samples_numpy(cumw, means, sds, u, z):
    """Map uniforms ``u`` (N,) and standard normals ``z`` (N, 4) to points.

    ``sds`` is (K, 2): per-component standard deviation of mode 1 and mode 2.
    """
    k = np.minimum(np.searchsorted(cumw, u, side="right"), cumw.shape[0] - 1)
    scale = np.repeat(sds[k], 2, axis=1)
    return means[k] + z * scale


@njit(cache=True)
def assemble_samples_numba(cumw, means, sds, u, z):
    n = u.shape[0]
    last = cumw.shape[0] - 1
    out = np.empty((n, 4))
    for i in range(n):
        k = np.searchsorted(cumw, u[i], side="right")
        if k > last:
            k = last
        s1 = sds[k, 0]
        s2 = sds[k, 1]
        out[i, 0] = means[k, 0] + z[i, 0] * s1
        out[i, 1] = means[k, 1] + z[i, 1] * s1
        out[i, 2] = means[k, 2] + z[i, 2] * s2
        out[i, 3] = means[k, 3] + z[i, 3] * s2
    return out


def sign_product_sum_numpy(pts, ca, sa, cb, sb):
    qa = ca * pts[:, 0] + sa * pts[:, 1]
    qb = cb * pts[:, 2] + sb * pts[:, 3]
    # a rotated coordinate of exactly zero scores +1
    sa_ = np.where(qa >= 0.0, 1.0, -1.0)
    sb_ = np.where(qb >= 0.0, 1.0, -1.0)
    return float(np.dot(sa_, sb_))


@njit(cache=True)
def sign_product_sum_numba(pts, ca, sa, cb, sb):
    total = 0.0
    for i in range(pts.shape[0]):
        qa = ca * pts[i, 0] + sa * pts[i, 1]
        qb = cb * pts[i, 2] + sb * pts[i, 3]
        total += 1.0 if (qa >= 0.0) == (qb >= 0.0) else -1.0
    return total


# ---------------------------------------------------------------------------
# Transformation-setting scan

def chsh_scan_numpy(angles, scale):
    """Grid maximum of the transformed CHSH value over ``angles``**4.

    Returns ``(best, (i1, i2, j1, j2))`` where the index quadruple is the
    lexicographically smallest one within ``SCAN_TIE_TOL`` of the maximum.
    """
    t1 = angles[:, None, None, None]
    t2 = angles[None, :, None, None]
    p1 = angles[None, None, :, None]
    p2 = angles[None, None, None, :]
    c = (np.cos(2.0 * (t1 - p1)) + np.cos(2.0 * (t1 - p2))
         + np.cos(2.0 * (t2 - p1)) - np.cos(2.0 * (t2 - p2))) * scale
    best = c.max()
    flat = int(np.flatnonzero(c >= best - SCAN_TIE_TOL)[0])
    idx = np.unravel_index(flat, c.shape)
    return float(c[idx]), tuple(int(i) for i in idx)


@njit(cache=True)
def _chsh_scan_numba(angles, scale):
    n = angles.shape[0]
    # cos 2(a_i - a_j), shared by all four terms
    cd = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            cd[i, j] = math.cos(2.0 * (angles[i] - angles[j]))
    best = -np.inf
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    v = (cd[a, c] + cd[a, d] + cd[b, c] - cd[b, d]) * scale
                    if v > best:
                        best = v
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    v = (cd[a, c] + cd[a, d] + cd[b, c] - cd[b, d]) * scale
                    if v >= best - SCAN_TIE_TOL:
                        return v, a, b, c, d
    return best, 0, 0, 0, 0


def chsh_scan_numba(angles, scale):
    v, a, b, c, d = _chsh_scan_numba(angles, scale)
    return float(v), (int(a), int(b), int(c), int(d))


if USE_NUMBA:
    marginal_grid = marginal_grid_numba
    eval_points = eval_points_numba
    assemble_samples = assemble_samples_numba
    sign_product_sum = sign_product_sum_numba
    chsh_scan = chsh_scan_numba
else:
    marginal_grid = marginal_grid_numpy
    eval_points = eval_points_numpy
    assemble_samples = assemble_samples_numpy
    sign_product_sum = sign_product_sum_numpy
    chsh_scan = chsh_scan_numpy
