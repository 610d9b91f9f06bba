"""State types and the cyclic difference evolution.

A state is ``n`` labelled points in ``d`` dimensions.  One step replaces
every point by the difference to its successor,
``p_l <- p_{(l+1) mod n} - p_l``, independently on each axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateZero, StepsTooLarge

#: Rescale the iterated state whenever its norm leaves [RESCALE_LO, RESCALE_HI].
RESCALE_LO = 1e-6
RESCALE_HI = 1e6

#: Cap for the binomial route.  Weights are exact in float64 through t = 56
#: and correctly rounded (relative error <= 2**-53) from 57 to 60.
BINOMIAL_MAX_STEPS = 60


@dataclass(frozen=True, eq=False)
class PointCloud:
    """``n`` labelled points in ``d`` dimensions at time step ``t``.

    ``coords[l, a]`` is coordinate ``a`` of point ``l``.  A 1-D input is
    treated as ``d = 1``.  The array is copied and made read-only.
    """

    coords: np.ndarray
    t: int = 0

    def __post_init__(self):
        c = np.array(self.coords, dtype=np.float64, copy=True)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2:
            raise ValueError(f"coords must be (n, d), got shape {c.shape}")
        if c.shape[0] < 2:
            raise ValueError(f"need at least 2 points, got {c.shape[0]}")
        if c.shape[1] < 1:
            raise ValueError("need at least one spatial dimension")
        if not np.all(np.isfinite(c)):
            raise ValueError("coords must be finite")
        if int(self.t) != self.t or self.t < 0:
            raise ValueError(f"t must be a non-negative integer, got {self.t}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "t", int(self.t))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def __repr__(self):
        return f"PointCloud(n={self.n}, d={self.d}, t={self.t})"


@dataclass(frozen=True, eq=False)
class ScaledState:
    """A state stored as unit-norm shape times ``exp(logmag)``.

    ``cloud`` has unit Frobenius norm over all axes jointly.  ``axis_norms``
    holds the norm of each axis column of ``cloud``, so dividing a column by
    its entry gives the per-axis normalization used in scatter plots.  When
    the true state is exactly zero, ``degenerate`` is set, ``cloud`` is all
    zeros and ``logmag`` is ``-inf``.
    """

    cloud: PointCloud
    logmag: float
    axis_norms: np.ndarray
    degenerate: bool = False

    @property
    def t(self) -> int:
        return self.cloud.t

    @property
    def n(self) -> int:
        return self.cloud.n

    @property
    def d(self) -> int:
        return self.cloud.d

    @property
    def coords(self) -> np.ndarray:
        return self.cloud.coords

    def true_coords(self) -> np.ndarray:
        """The unscaled state.  Overflows to inf once ``logmag`` exceeds ~709."""
        if self.degenerate:
            return np.zeros_like(self.cloud.coords)
        return math.exp(self.logmag) * self.cloud.coords

    def per_axis_normalized(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            out = self.cloud.coords / self.axis_norms
        return np.where(np.isfinite(out), out, 0.0)

    def __repr__(self):
        return (f"ScaledState(n={self.n}, d={self.d}, t={self.t}, "
                f"logmag={self.logmag!r}, degenerate={self.degenerate})")


def _scaled(values: np.ndarray, logmag: float, t: int) -> ScaledState:
    norm = float(np.linalg.norm(values))
    if norm == 0.0:
        zeros = np.zeros_like(values)
        return ScaledState(PointCloud(zeros, t), -math.inf,
                           np.zeros(values.shape[1]), degenerate=True)
    unit = values / norm
    return ScaledState(PointCloud(unit, t), logmag + math.log(norm),
                       np.linalg.norm(unit, axis=0))


def normalize(state: PointCloud) -> ScaledState:
    """Divide by the joint Frobenius norm and record its log.

    Raises DegenerateZero for an all-zero state.
    """
    if isinstance(state, ScaledState):
        if state.degenerate:
            raise DegenerateZero("state is identically zero")
        return _scaled(np.asarray(state.coords), state.logmag, state.t)
    if not np.any(state.coords):
        raise DegenerateZero("cannot normalize an all-zero state")
    return _scaled(np.asarray(state.coords), 0.0, state.t)


def as_scaled(state) -> ScaledState:
    """Like normalize, but a zero state becomes a degenerate ScaledState."""
    if isinstance(state, ScaledState):
        return state
    return _scaled(np.asarray(state.coords), 0.0, state.t)


def step(state: PointCloud) -> PointCloud:
    x = state.coords
    return PointCloud(np.roll(x, -1, axis=0) - x, state.t + 1)


def evolve_iterative(state, steps: int) -> ScaledState:
    """Evolve by repeated single steps with overflow-safe rescaling.

    ``state`` may be a PointCloud or a ScaledState (whose magnitude is
    carried along).  If the state hits exactly zero the result is flagged
    ``degenerate`` instead of raising.
    """
    steps = int(steps)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    start = as_scaled(state)
    if start.degenerate:
        return ScaledState(PointCloud(start.coords, start.t + steps),
                           -math.inf, start.axis_norms, degenerate=True)
    values, logscale, _, hit_zero = kernels.iterate(
        start.coords, steps, RESCALE_LO, RESCALE_HI)
    t = start.t + steps
    if hit_zero:
        return ScaledState(PointCloud(np.zeros_like(values), t), -math.inf,
                           np.zeros(start.d), degenerate=True)
    return _scaled(values, start.logmag + logscale, t)


def evolve_binomial(state: PointCloud, steps: int) -> PointCloud:
    """Evaluate ``steps`` steps in one pass with signed binomial weights.

    x_k(t) = (-1)^t sum_i (-1)^i C(t, i) x_{(k+i) mod n}(0).  Limited to
    ``steps <= 60``; this route is a cross-check, not the production path.
    """
    steps = int(steps)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    if steps > BINOMIAL_MAX_STEPS:
        raise StepsTooLarge(
            f"binomial route is capped at {BINOMIAL_MAX_STEPS} steps, "
            f"got {steps}")
    return PointCloud(kernels.binomial(state.coords, steps), state.t + steps)


def center_sum(state: PointCloud) -> np.ndarray:
    return np.sum(state.coords, axis=0)


def difference_matrix(n: int) -> np.ndarray:
    """Dense circulant step matrix, first row (-1, 1, 0, ..., 0).

    Only meant as a small-n oracle for tests.
    """
    m = -np.eye(n)
    m[np.arange(n), (np.arange(n) + 1) % n] += 1.0
    return m


def relative_discrepancy(a, b) -> float:
    """||a - b|| / ||b|| for two states given as PointCloud or ScaledState.

    Works in log space so it stays finite for states whose true values
    overflow.
    """
    a, b = as_scaled(a), as_scaled(b)
    if a.degenerate or b.degenerate:
        return 0.0 if a.degenerate and b.degenerate else math.inf
    ratio = a.logmag - b.logmag
    if ratio > 700:
        return math.inf
    diff = np.exp(ratio) * a.coords - b.coords
    return float(np.linalg.norm(diff))
