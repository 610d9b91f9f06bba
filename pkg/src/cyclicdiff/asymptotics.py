"""Large-t predictions and convergence diagnostics.

For odd n the two modes k = (n +- 1)/2 dominate with rate
r = 2 cos(pi / 2n); point l is then approximately

    (-1)**(l+t) * r**t * M @ (cos phi, sin phi),   phi = pi (l + t/2) / n

where row ``a`` of the d x 2 matrix M holds the cos/sin coefficients of
axis ``a`` (for d = 2, M = [[A, B], [C, D]]).  These points lie on an
ellipse.  For even n the single mode k = n/2 dominates with rate 2 and
the points alternate between +-2**t * a for one vector a; the next shell
k = n/2 +- 1 has rate r1 = 2 cos(pi / n) and contributes a small ellipse
around each of the two limit points.

Predictions are returned as ``(logmag, direction)`` pairs because the true
coordinates overflow float64 for t beyond roughly a thousand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import PointCloud, ScaledState
from .errors import DegenerateEllipse, InsufficientSnapshots, WrongParity

#: Relative threshold below which dominant coefficients count as vanished.
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SecondOrder:
    rate: float
    coeff_matrix: np.ndarray  # (d, 2)


@dataclass(frozen=True, eq=False)
class AsymptoticModel:
    """Parity-dependent dominant-mode description of a trajectory.

    ``coeff_matrix`` is (d, 2) for odd n and a length-d vector for even n.
    ``second_order`` is only filled for even n >= 4.
    """

    n: int
    parity: str
    rate: float
    coeff_matrix: np.ndarray
    second_order: Optional[SecondOrder] = None
    degenerate: bool = False

    @property
    def d(self) -> int:
        return self.coeff_matrix.shape[0]

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "parity": self.parity,
            "rate": float(self.rate),
            "coeff_matrix": np.asarray(self.coeff_matrix, dtype=float).tolist(),
            "degenerate": bool(self.degenerate),
            "second_order": None,
        }
        if self.second_order is not None:
            out["second_order"] = {
                "rate": float(self.second_order.rate),
                "coeff_matrix": self.second_order.coeff_matrix.tolist(),
            }
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "AsymptoticModel":
        so = data.get("second_order")
        second = None
        if so is not None:
            second = SecondOrder(float(so["rate"]),
                                 np.array(so["coeff_matrix"], dtype=float))
        return cls(n=int(data["n"]), parity=data["parity"],
                   rate=float(data["rate"]),
                   coeff_matrix=np.array(data["coeff_matrix"], dtype=float),
                   second_order=second, degenerate=bool(data["degenerate"]))


class EllipseQuadratic(NamedTuple):
    """qxx x^2 + 2 qxy x y + qyy y^2 = exp(rhs_log).

    Note the factor 2 on the cross term: for coefficients A, B, C, D the
    form is (C^2 + D^2) x^2 - 2 (AC + BD) x y + (A^2 + B^2) y^2, so
    ``qxy = -(AC + BD)``.
    """

    qxx: float
    qxy: float
    qyy: float
    rhs_log: float

    def evaluate(self, x, y):
        return self.qxx * x * x + 2.0 * self.qxy * x * y + self.qyy * y * y


class Prediction(NamedTuple):
    """Predicted true coordinates as ``exp(logmag) * direction``.

    ``direction`` rows have unit length (or are zero when the prediction
    vanishes, with ``logmag = -inf``).
    """

    logmag: np.ndarray
    direction: np.ndarray

    def value(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.logmag)[..., None] * self.direction


def _alt_sign(j):
    return 1.0 - 2.0 * (np.asarray(j) % 2)


def _scale_of(coords) -> float:
    return float(np.max(np.abs(coords))) if coords.size else 0.0


def _trig_coefficients(coords, harmonic):
    """(prefactor 2/n) sum_j (-1)^j (cos, sin)(harmonic pi j / n) x_j per axis."""
    n = coords.shape[0]
    j = np.arange(n)
    s = _alt_sign(j)
    ang = harmonic * np.pi * j / n
    cos_part = (2.0 / n) * (s * np.cos(ang)) @ coords
    sin_part = (2.0 / n) * (s * np.sin(ang)) @ coords
    return np.column_stack([cos_part, sin_part])


def _plane_area(m) -> float:
    """|A D - B C| generalized: area spanned by the two columns of m."""
    gram = m.T @ m
    det = gram[0, 0] * gram[1, 1] - gram[0, 1] * gram[1, 0]
    return math.sqrt(max(det, 0.0))


def coefficients_odd(initial: PointCloud) -> AsymptoticModel:
    n = initial.n
    if n % 2 == 0:
        raise WrongParity(f"coefficients_odd needs odd n, got n={n}")
    m = _trig_coefficients(initial.coords, 1)
    biggest = float(np.max(np.abs(m)))
    degenerate = biggest == 0.0 or _plane_area(m) <= DEGENERACY_TOL * biggest ** 2
    return AsymptoticModel(n=n, parity="odd", rate=2.0 * math.cos(math.pi / (2 * n)),
                           coeff_matrix=m, degenerate=degenerate)


def coefficients_even(initial: PointCloud) -> AsymptoticModel:
    n = initial.n
    if n % 2:
        raise WrongParity(f"coefficients_even needs even n, got n={n}")
    a = (_alt_sign(np.arange(n)) @ initial.coords) / n
    scale = _scale_of(initial.coords)
    degenerate = float(np.max(np.abs(a))) <= DEGENERACY_TOL * scale
    second = None
    if n >= 4:
        # for n = 2 the shell k = n/2 +- 1 collapses onto the constant mode
        second = SecondOrder(2.0 * math.cos(math.pi / n),
                             _trig_coefficients(initial.coords, 2))
    return AsymptoticModel(n=n, parity="even", rate=2.0, coeff_matrix=a,
                           second_order=second, degenerate=degenerate)


def coefficients(initial: PointCloud) -> AsymptoticModel:
    if initial.n % 2:
        return coefficients_odd(initial)
    return coefficients_even(initial)


def _as_prediction(vectors, logscale):
    norms = np.linalg.norm(vectors, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        direction = np.where(norms[..., None] > 0, vectors / norms[..., None], 0.0)
        logmag = np.where(norms > 0, logscale + np.log(norms), -np.inf)
    return Prediction(logmag, direction)


def predict_odd(model: AsymptoticModel, l, t: int) -> Prediction:
    """Dominant-mode prediction for label(s) ``l`` at time ``t`` (odd n)."""
    if model.parity != "odd":
        raise WrongParity("predict_odd needs an odd-n model")
    l = np.asarray(l)
    phi = np.pi * (l + t / 2.0) / model.n
    sign = _alt_sign(l + t)
    basis = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    vectors = sign[..., None] * (basis @ model.coeff_matrix.T)
    return _as_prediction(vectors, t * math.log(model.rate))


def predict_even(model: AsymptoticModel, l, t: int,
                 include_second_order: bool = True) -> Prediction:
    """Prediction for label(s) ``l`` at time ``t`` (even n).

    The leading term is (-1)^(l+t) 2^t a.  With ``include_second_order``
    the r1 shell is added as 2^t (r1/2)^t M (cos phi, sin phi),
    phi = 2 pi (l + t/2) / n.  When a vanishes the r1 shell alone is
    returned with its own log-magnitude.
    """
    if model.parity != "even":
        raise WrongParity("predict_even needs an even-n model")
    l = np.asarray(l)
    sign = _alt_sign(l + t)[..., None]
    lead = np.broadcast_to(model.coeff_matrix, l.shape + (model.d,))
    second = model.second_order if include_second_order else None
    if second is None:
        if model.degenerate:
            return _as_prediction(np.zeros(l.shape + (model.d,)), 0.0)
        return _as_prediction(sign * lead, t * math.log(2.0))
    phi = 2.0 * np.pi * (l + t / 2.0) / model.n
    basis = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    ring = basis @ second.coeff_matrix.T
    if second.rate == 0.0:
        ring = ring * (1.0 if t == 0 else 0.0)
        log_r1 = 0.0
    else:
        log_r1 = math.log(second.rate)
    if model.degenerate:
        return _as_prediction(sign * ring, t * log_r1)
    with np.errstate(under="ignore"):
        damp = math.exp(t * (log_r1 - math.log(2.0))) if second.rate else 0.0
    return _as_prediction(sign * (lead + damp * ring), t * math.log(2.0))


def predict(model: AsymptoticModel, l, t: int) -> Prediction:
    if model.parity == "odd":
        return predict_odd(model, l, t)
    return predict_even(model, l, t)


def predicted_state(model: AsymptoticModel, t: int) -> ScaledState:
    """All n predicted points at time t as a normalized ScaledState."""
    pred = predict(model, np.arange(model.n), t)
    finite = np.isfinite(pred.logmag)
    if not np.any(finite):
        zeros = np.zeros((model.n, model.d))
        return ScaledState(PointCloud(zeros, t), -math.inf, np.zeros(model.d), True)
    top = float(np.max(pred.logmag[finite]))
    rel = np.where(finite, np.exp(np.where(finite, pred.logmag - top, 0.0)), 0.0)
    values = rel[:, None] * pred.direction
    norm = float(np.linalg.norm(values))
    unit = values / norm
    return ScaledState(PointCloud(unit, t), top + math.log(norm),
                       np.linalg.norm(unit, axis=0))


def ellipse_of(model: AsymptoticModel, t: int) -> EllipseQuadratic:
    """The ellipse through the dominant-mode points at time t (odd n, d = 2)."""
    if model.parity != "odd":
        raise WrongParity("the limiting ellipse exists only for odd n")
    if model.d != 2:
        raise ValueError(f"ellipse_of needs d = 2, got d = {model.d}")
    (a, b), (c, d) = model.coeff_matrix
    det = a * d - b * c
    biggest = float(np.max(np.abs(model.coeff_matrix)))
    if biggest == 0.0 or abs(det) <= DEGENERACY_TOL * biggest ** 2:
        raise DegenerateEllipse(f"AD - BC = {det:.3e} is zero to working precision")
    return EllipseQuadratic(qxx=c * c + d * d, qxy=-(a * c + b * d),
                            qyy=a * a + b * b,
                            rhs_log=2.0 * math.log(abs(det)) + 2.0 * t * math.log(model.rate))


def ellipse_residual(state: ScaledState, ellipse: EllipseQuadratic) -> float:
    """RMS of Q(p_l) / rhs - 1 over all points, computed scale-free.

    ``state`` must carry its log-magnitude (a ScaledState); a plain
    PointCloud is taken to hold true coordinates.
    """
    if state.d != 2:
        raise ValueError(f"ellipse_residual needs d = 2, got d = {state.d}")
    logmag = state.logmag if isinstance(state, ScaledState) else 0.0
    x, y = state.coords[:, 0], state.coords[:, 1]
    ratio = ellipse.evaluate(x, y) * math.exp(2.0 * logmag - ellipse.rhs_log)
    return float(np.sqrt(np.mean((ratio - 1.0) ** 2)))


def sign_aligned(state, per_label: bool = True) -> np.ndarray:
    """Coordinates multiplied by (-1)^(l+t), or by (-1)^t only.

    Per-label alignment removes the alternating prefactor of the
    predictions so successive snapshots converge.  Global alignment keeps
    the picture of raw coordinates (two antipodal clusters for even n) while
    removing the flip between consecutive steps.
    """
    coords = np.asarray(state.coords)
    n = coords.shape[0]
    sign = _alt_sign(np.arange(n) + state.t) if per_label else np.full(n, _alt_sign(state.t))
    return sign[:, None] * coords


def rms_normalized(state) -> np.ndarray:
    """Coordinates scaled so the mean squared point radius is 1."""
    coords = np.asarray(state.coords)
    norm = float(np.linalg.norm(coords))
    if norm == 0.0:
        return coords.copy()
    return coords * (math.sqrt(coords.shape[0]) / norm)


def _diameter(points) -> float:
    if len(points) < 2:
        return 0.0
    diff = points[:, None, :] - points[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))


class ParitySeparation(NamedTuple):
    even_diameter: float
    odd_diameter: float
    gap: float


def parity_separation(cloud) -> ParitySeparation:
    """Diameters of the even- and odd-label point sets and their centroid gap.

    Measured on the coordinates exactly as given; callers choose the
    normalization (the harness uses ``rms_normalized``, under which two
    antipodal clusters have gap 2).
    """
    coords = np.asarray(cloud.coords if hasattr(cloud, "coords") else cloud)
    n = coords.shape[0]
    if n % 2:
        raise WrongParity(f"parity separation needs even n, got n={n}")
    even, odd = coords[0::2], coords[1::2]
    gap = float(np.linalg.norm(even.mean(axis=0) - odd.mean(axis=0)))
    return ParitySeparation(_diameter(even), _diameter(odd), gap)


def growth_rate(trajectory: Sequence[ScaledState]) -> float:
    """Per-step log growth between the earliest and latest snapshot.

    Subdominant modes bias the estimate by roughly (r2/r)^(2 t1) / (t2 - t1),
    so t1 should sit well past the transient (t1 >= 4n at the very least).
    """
    snaps = sorted((s for s in trajectory if not s.degenerate), key=lambda s: s.t)
    if len(snaps) < 2 or snaps[0].t == snaps[-1].t:
        raise InsufficientSnapshots("growth_rate needs two snapshots at distinct times")
    first, last = snaps[0], snaps[-1]
    return (last.logmag - first.logmag) / (last.t - first.t)


def subdominant_ratio(n: int) -> float:
    """Ratio of the second to the first distinct eigenvalue magnitude."""
    mags = np.unique(np.round(2.0 * np.sin(np.pi * np.arange(n) / n), 14))[::-1]
    return float(mags[1] / mags[0]) if len(mags) > 1 else 0.0
