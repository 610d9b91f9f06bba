"""Randomized cross-route and invariant checks behind ``cyclicdiff verify``."""

from __future__ import annotations

import math
from typing import Callable, List, NamedTuple

import numpy as np

from . import rng
from .asymptotics import coefficients, predict_odd
from .core import (
    PointCloud,
    center_sum,
    evolve_binomial,
    evolve_iterative,
    relative_discrepancy,
    step,
)
from .spectral import dft, eigen_magnitudes, evolve_closed_form, idft, spectral_step


class Check(NamedTuple):
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


class _Draw:
    """Small helper around SplitMix64 for picking configs."""

    def __init__(self, seed):
        self.gen = rng.SplitMix64(seed)

    def integer(self, lo, hi):
        return lo + self.gen.next_u64() % (hi - lo + 1)

    def cloud(self, n, d):
        return rng.uniform_cloud(n, d, self.gen.next_u64())


def _rel(a, b):
    scale = float(np.linalg.norm(b))
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b))) / (scale if scale else 1.0)


def route_equivalence(draw, trials):
    worst = 0.0
    for _ in range(trials):
        n, d, t = draw.integer(2, 64), draw.integer(1, 3), draw.integer(0, 25)
        x = PointCloud(draw.cloud(n, d))
        it = evolve_iterative(x, t)
        worst = max(worst,
                    relative_discrepancy(evolve_binomial(x, t), it),
                    relative_discrepancy(evolve_closed_form(x, t), it))
    return worst


def sum_zero(draw, trials):
    worst = 0.0
    for _ in range(trials):
        n, d, t = draw.integer(2, 64), draw.integer(1, 3), draw.integer(1, 200)
        s = evolve_iterative(PointCloud(draw.cloud(n, d)), t)
        worst = max(worst, float(np.max(np.abs(center_sum(s.cloud)))))
    return worst


def parseval(draw, trials):
    worst = 0.0
    for _ in range(trials):
        x = draw.cloud(draw.integer(2, 128), 1)[:, 0]
        worst = max(worst, abs(np.sum(np.abs(dft(x)) ** 2) / np.sum(x * x) - 1.0))
    return worst


def round_trip(draw, trials):
    worst = 0.0
    for _ in range(trials):
        x = draw.cloud(draw.integer(2, 128), draw.integer(1, 3))
        worst = max(worst, _rel(idft(dft(x)), x))
    return worst


def shift_equivariance(draw, trials):
    worst = 0.0
    for _ in range(trials):
        x = PointCloud(draw.cloud(draw.integer(2, 64), draw.integer(1, 3)))
        shifted = PointCloud(np.roll(x.coords, -1, axis=0))
        worst = max(worst, _rel(step(shifted).coords, np.roll(step(x).coords, -1, axis=0)))
    return worst


def linearity(draw, trials):
    worst = 0.0
    for _ in range(trials):
        n, d, t = draw.integer(2, 64), draw.integer(1, 3), draw.integer(0, 20)
        x, y = draw.cloud(n, d), draw.cloud(n, d)
        c = 2.0 * rng.SplitMix64(draw.gen.next_u64()).uniform() - 1.0
        lhs = evolve_iterative(PointCloud(c * x + y), t).true_coords()
        rhs = (c * evolve_iterative(PointCloud(x), t).true_coords()
               + evolve_iterative(PointCloud(y), t).true_coords())
        worst = max(worst, _rel(lhs, rhs))
    return worst


def spectral_matches_step(draw, trials):
    worst = 0.0
    for _ in range(trials):
        x = PointCloud(draw.cloud(draw.integer(2, 128), draw.integer(1, 3)))
        worst = max(worst, _rel(spectral_step(x.coords), step(x).coords))
    return worst


def spectral_radius(draw, trials):
    worst = 0.0
    for n in range(2, 201):
        expected = 2.0 if n % 2 == 0 else 2.0 * math.cos(math.pi / (2 * n))
        worst = max(worst, abs(float(np.max(eigen_magnitudes(n))) - expected))
    return worst


def two_step_identity(draw, trials):
    """predict(l, t+2) == -r^2 predict(l+1, t), compared in log-polar form."""
    worst = 0.0
    for _ in range(trials):
        n = 2 * draw.integer(1, 40) + 1
        model = coefficients(PointCloud(draw.cloud(n, draw.integer(1, 3))))
        t = draw.integer(0, 5000)
        l = np.arange(n)
        ahead = predict_odd(model, l, t + 2)
        behind = predict_odd(model, l + 1, t)
        log_err = np.abs(ahead.logmag - (behind.logmag + 2.0 * math.log(model.rate)))
        dir_err = np.abs(ahead.direction + behind.direction)
        worst = max(worst, float(np.max(log_err)), float(np.max(dir_err)))
    return worst


def coefficient_projection(draw, trials):
    worst = 0.0
    for _ in range(trials):
        n, d = draw.integer(3, 64), draw.integer(1, 3)
        x = draw.cloud(n, d)
        model = coefficients(PointCloud(x))
        fhat = np.fft.fft(x, axis=0) / math.sqrt(n)
        if n % 2:
            k = (n + 1) // 2
            proj = np.column_stack([fhat[k].real, -fhat[k].imag]) * (2.0 / math.sqrt(n))
            worst = max(worst, _rel(model.coeff_matrix, proj))
        else:
            proj = fhat[n // 2].real / math.sqrt(n)
            worst = max(worst, _rel(model.coeff_matrix, proj))
    return worst


CHECKS: List[tuple] = [
    ("route equivalence (iterative/binomial/spectral, t<=25)", route_equivalence, 1e-9),
    ("sum-zero after t>=1 (unit-norm state)", sum_zero, 1e-12),
    ("Parseval", parseval, 1e-12),
    ("DFT round trip", round_trip, 1e-12),
    ("shift equivariance", shift_equivariance, 1e-12),
    ("linearity (t<=20)", linearity, 1e-10),
    ("spectral step == direct step", spectral_matches_step, 1e-10),
    ("spectral radius n in [2,200]", spectral_radius, 1e-12),
    ("two-step predictor identity", two_step_identity, 1e-10),
    ("coefficients == dominant DFT projection", coefficient_projection, 1e-10),
]


def run_checks(seed: int = 0, trials: int = 100) -> List[Check]:
    results = []
    for i, (name, fn, tol) in enumerate(CHECKS):
        draw = _Draw(rng.batch_seeds(seed, len(CHECKS))[i])
        results.append(Check(name, float(fn(draw, trials)), tol))
    return results


def format_table(checks: List[Check], out: Callable[[str], None] = print) -> None:
    width = max(len(c.name) for c in checks)
    out(f"{'check'.ljust(width)}  {'max error':>10}  {'tolerance':>9}  result")
    for c in checks:
        out(f"{c.name.ljust(width)}  {c.max_error:10.3e}  {c.tolerance:9.0e}  "
            f"{'PASS' if c.passed else 'FAIL'}")
