"""Positive two-mode Wigner functions as mixtures of isotropic Gaussians.

Every mode of every component is a circular Gaussian in the (x, p) plane
with the same variance along both quadratures. A coherent state
``|alpha>`` is such a Gaussian centred at ``(Re alpha, Im alpha)``.

Default variance is 1/2, the convention under which the sign-of-position
correlation of a coherent state equals ``erf(Re alpha)``. Pass
``variance=0.25`` for the ``(2/pi) exp(-2|alpha - beta|^2)`` normalisation.
"""
import csv
import io
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import InvalidArgument

DEFAULT_VARIANCE = 0.5
WEIGHT_SUM_TOL = 1e-12
PRUNE_WEIGHT = 1e-15
SAMPLE_CHUNK = 1 << 16
GRID_COLUMNS = ("x1", "x2", "w11", "w12", "w21", "w22")


@dataclass(frozen=True)
class PhasePoint:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise InvalidArgument(f"non-finite phase point ({self.x}, {self.p})")


@dataclass(frozen=True)
class ModeGaussian:
    mean: PhasePoint
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise InvalidArgument(f"variance must be positive, got {self.variance}")


@dataclass(frozen=True)
class TwoModeComponent:
    weight: float
    mode1: ModeGaussian
    mode2: ModeGaussian

    def __post_init__(self):
        if not self.weight >= 0:
            raise InvalidArgument(f"negative component weight {self.weight}")


@dataclass(frozen=True)
class WignerMixture:
    """Normalised, nonnegative mixture of two-mode Gaussian components.

    Use :meth:`build` to prune negligible weights and renormalise; the
    plain constructor only validates.
    """

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InvalidArgument("mixture needs at least one component")
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidArgument(f"weights sum to {total!r}, expected 1")

    @classmethod
    def build(cls, components):
        comps = [c for c in components if c.weight > 0]
        total = math.fsum(c.weight for c in comps)
        if total <= 0:
            raise InvalidArgument("all component weights vanish")
        comps = [TwoModeComponent(c.weight / total, c.mode1, c.mode2) for c in comps]
        comps = [c for c in comps if c.weight >= PRUNE_WEIGHT]
        total = math.fsum(c.weight for c in comps)
        return cls(tuple(TwoModeComponent(c.weight / total, c.mode1, c.mode2) for c in comps))

    def __len__(self):
        return len(self.components)

    # Array views used by the kernels.

    @cached_property
    def weights(self):
        return np.array([c.weight for c in self.components])

    @cached_property
    def means(self):
        """(K, 4) array of component means as (x1, p1, x2, p2)."""
        return np.array([[c.mode1.mean.x, c.mode1.mean.p, c.mode2.mean.x, c.mode2.mean.p]
                         for c in self.components])

    @cached_property
    def variances(self):
        """(K, 2) array of per-mode variances."""
        return np.array([[c.mode1.variance, c.mode2.variance] for c in self.components])


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or not self.min < self.max:
            raise InvalidArgument(f"grid needs min < max, got [{self.min}, {self.max}]")
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidArgument(f"grid needs at least 2 steps, got {self.steps}")

    def points(self):
        return np.linspace(self.min, self.max, int(self.steps))


def coherent_mode(alpha, variance=DEFAULT_VARIANCE):
    if not variance > 0:
        raise InvalidArgument(f"variance must be positive, got {variance}")
    alpha = complex(alpha)
    return ModeGaussian(PhasePoint(alpha.real, alpha.imag), float(variance))


def evaluate(w, z1, z2):
    """Mixture density at the phase-space point pair ``(z1, z2)``.

    `z1` and `z2` may be :class:`PhasePoint` instances or ``(..., 2)``
    arrays of ``(x, p)`` pairs; the result broadcasts accordingly.
    """
    if isinstance(z1, PhasePoint):
        z1 = (z1.x, z1.p)
    if isinstance(z2, PhasePoint):
        z2 = (z2.x, z2.p)
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    z1, z2 = np.broadcast_arrays(z1, z2)
    shape = z1.shape[:-1]
    pts = np.ascontiguousarray(np.concatenate([z1, z2], axis=-1).reshape(-1, 4))
    var = w.variances
    out = _kernels.eval_points(w.weights, w.means, np.ascontiguousarray(var[:, 0]),
                               np.ascontiguousarray(var[:, 1]), pts)
    return float(out[0]) if shape == () else out.reshape(shape)


@dataclass(frozen=True)
class MarginalX:
    """Momentum-integrated mixture: weighted products of 1D normals in (x1, x2)."""

    weights: np.ndarray
    mean_x1: np.ndarray
    mean_x2: np.ndarray
    var1: np.ndarray
    var2: np.ndarray

    def __call__(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)[..., None]
        x2 = np.asarray(x2, dtype=float)[..., None]
        g1 = np.exp(-(x1 - self.mean_x1) ** 2 / (2 * self.var1)) / np.sqrt(2 * np.pi * self.var1)
        g2 = np.exp(-(x2 - self.mean_x2) ** 2 / (2 * self.var2)) / np.sqrt(2 * np.pi * self.var2)
        out = np.sum(self.weights * g1 * g2, axis=-1)
        return float(out) if out.ndim == 0 else out

    def on_grid(self, grid):
        """``(steps, steps)`` array indexed ``[i_x1, i_x2]``."""
        return _kernels.marginal_grid(self.weights, self.mean_x1, self.mean_x2,
                                      self.var1, self.var2, grid.points())


def marginal_x(w):
    m = w.means
    v = w.variances
    return MarginalX(w.weights.copy(), m[:, 0].copy(), m[:, 2].copy(),
                     v[:, 0].copy(), v[:, 1].copy())


def slice_p0(w, grid):
    """Density on the ``p1 = p2 = 0`` slice, indexed ``[i_x1, i_x2]``."""
    xs = grid.points()
    x1, x2 = np.meshgrid(xs, xs, indexing="ij")
    zero = np.zeros_like(x1)
    return evaluate(w, np.stack([x1, zero], -1), np.stack([x2, zero], -1))


def _check_seed(seed):
    if int(seed) != seed or seed < 0:
        raise InvalidArgument(f"seed must be a nonnegative integer, got {seed!r}")
    return int(seed)


def iter_sample_chunks(w, seed, n):
    """Yield ``(m, 4)`` arrays of draws, in fixed-size chunks.

    Chunk ``c`` is drawn from a generator seeded with ``(seed, c)``, so the
    concatenated stream depends only on ``(seed, n)``.
    """
    seed = _check_seed(seed)
    if int(n) != n or n < 0:
        raise InvalidArgument(f"sample count must be a nonnegative integer, got {n!r}")
    cumw = np.cumsum(w.weights)
    means = w.means
    sds = np.sqrt(w.variances)
    done = 0
    chunk = 0
    while done < n:
        m = min(SAMPLE_CHUNK, n - done)
        rng = np.random.default_rng([seed, chunk])
        u = rng.random(m)
        z = rng.standard_normal((m, 4))
        yield _kernels.assemble_samples(cumw, means, sds, u, z)
        done += m
        chunk += 1


def sample(w, seed, n):
    """``n`` i.i.d. draws as an ``(n, 4)`` array of ``(x1, p1, x2, p2)``."""
    chunks = list(iter_sample_chunks(w, seed, n))
    if not chunks:
        return np.empty((0, 4))
    return np.concatenate(chunks)


def sup_distance(a, b, grid, full=False):
    """Max of ``|a - b|`` over the grid.

    By default compares the (x1, x2) marginals. With ``full=True`` the
    grid is applied to all four coordinates and the full densities are
    compared (``steps**4`` evaluations).
    """
    if not full:
        return float(np.max(np.abs(marginal_x(a).on_grid(grid) - marginal_x(b).on_grid(grid))))
    xs = grid.points()
    x2, p2 = np.meshgrid(xs, xs, indexing="ij")
    z2 = np.stack([x2, p2], -1)
    best = 0.0
    for x1 in xs:
        for p1 in xs:
            z1 = np.broadcast_to(np.array([x1, p1]), z2.shape)
            d = np.abs(evaluate(a, z1, z2) - evaluate(b, z1, z2))
            best = max(best, float(d.max()))
    return best


def grid_table(mixtures, grid, p_slice=False):
    """Rows ``(x1, x2, w11, w12, w21, w22)``, row-major over the grid."""
    xs = grid.points()
    x1, x2 = np.meshgrid(xs, xs, indexing="ij")
    cols = [x1.ravel(), x2.ravel()]
    for w in mixtures:
        vals = slice_p0(w, grid) if p_slice else marginal_x(w).on_grid(grid)
        cols.append(vals.ravel())
    return np.column_stack(cols)


def write_grid_csv(fh, table):
    """Write a :func:`grid_table` result with 9 significant digits."""
    fh.write(",".join(GRID_COLUMNS) + "\n")
    for row in table:
        fh.write(",".join(f"{v:.9g}" for v in row) + "\n")


def read_grid_csv(fh):
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    reader = csv.reader(fh)
    header = tuple(next(reader))
    if header != GRID_COLUMNS:
        raise InvalidArgument(f"unexpected grid header {header}")
    return np.array([[float(v) for v in row] for row in reader if row])
