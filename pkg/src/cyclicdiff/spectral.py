"""Fourier diagonalization of the cyclic difference step.

Conventions: the transform is unitary,
``xhat_k = n**-0.5 * sum_j x_j * omega**(-j*k)`` with ``omega = exp(2*pi*i/n)``,
and one step multiplies mode ``k`` by ``lambda_k = omega**k - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import PointCloud, ScaledState, as_scaled, normalize
from .errors import NotConjugateSymmetric

#: Maximum tolerated imaginary residue in idft, relative to the vector norm.
CONJ_TOL = 1e-9


def _as_columns(values):
    arr = np.asarray(values)
    if arr.ndim == 1:
        return arr[:, None], True
    return arr, False


def dft(values, method: str = "direct") -> np.ndarray:
    """Unitary forward DFT along axis 0 of a length-n vector or (n, d) array.

    ``method="radix2"`` uses the O(n log n) path; it requires a power-of-two
    length.
    """
    x, flat = _as_columns(values)
    if x.shape[0] < 2:
        raise ValueError("dft needs n >= 2")
    if method == "direct":
        out = kernels.dft_direct(x, sign=-1)
    elif method == "radix2":
        out = kernels.fft_radix2(x, sign=-1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out[:, 0] if flat else out


def idft(coeffs, method: str = "direct") -> np.ndarray:
    """Inverse of dft, returning the real vector.

    Raises NotConjugateSymmetric when the coefficients do not describe a
    real vector, i.e. the imaginary part of the reconstruction exceeds
    ``CONJ_TOL`` times its norm.
    """
    c, flat = _as_columns(coeffs)
    if method == "direct":
        out = kernels.dft_direct(c, sign=+1)
    elif method == "radix2":
        out = kernels.fft_radix2(c, sign=+1)
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = float(np.linalg.norm(c))
    residue = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if residue > CONJ_TOL * scale:
        raise NotConjugateSymmetric(
            f"imaginary residue {residue:.3e} exceeds {CONJ_TOL:g} x norm "
            f"{scale:.3e}")
    out = np.ascontiguousarray(out.real)
    return out[:, 0] if flat else out


def eigen_magnitudes(n: int) -> np.ndarray:
    """|lambda_k| = 2 sin(pi k / n)."""
    return 2.0 * kernels.sinpi_frac(np.arange(n), n)


def eigenvalues(n: int) -> np.ndarray:
    """lambda_k = omega**k - 1 for k = 0..n-1.

    Evaluated as 2 sin(pi k/n) * exp(i pi (n + 2k) / (2n)), which gives
    lambda_0 = 0 and lambda_{n/2} = -2 exactly.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    k = np.arange(n)
    mag = eigen_magnitudes(n)
    num = n + 2 * k
    return mag * (kernels.cospi_frac(num, 2 * n) + 1j * kernels.sinpi_frac(num, 2 * n))


def eigen_power_phase(n: int, t: int):
    """cos and sin of t * arg(lambda_k), reduced with integer arithmetic."""
    k = np.arange(n, dtype=np.int64)
    num = ((int(t) % (4 * n)) * (n + 2 * k)) % (4 * n)
    return kernels.cospi_frac(num, 2 * n), kernels.sinpi_frac(num, 2 * n)


@dataclass(frozen=True, eq=False)
class SpectrumView:
    n: int
    omega: complex
    coeffs: np.ndarray  # (n, d) complex, column a holds the DFT of axis a
    eigenvalues: np.ndarray


def spectrum(state: PointCloud) -> SpectrumView:
    n = state.n
    return SpectrumView(n=n, omega=complex(np.exp(2j * np.pi / n)),
                        coeffs=dft(state.coords), eigenvalues=eigenvalues(n))


def evolve_closed_form(state, steps: int) -> ScaledState:
    """Jump ``steps`` steps ahead by scaling each Fourier mode by lambda_k**t.

    Powers are taken in log-polar form and all magnitudes are factored
    against the largest one, so ``steps`` may be arbitrarily large.
    """
    steps = int(steps)
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    start = as_scaled(state)
    t_end = start.t + steps
    if steps == 0 and not start.degenerate:
        return normalize(start)
    if start.degenerate or np.all(start.coords == start.coords[0]):
        # all points equal: the first difference is exactly zero
        return ScaledState(PointCloud(np.zeros_like(start.coords), t_end), -math.inf,
                           np.zeros(start.d), degenerate=True)

    # transform the raw coordinates when we have them: normalizing first
    # would turn an exactly absent mode into rounding noise that then grows
    # at its own rate
    if isinstance(state, ScaledState):
        raw, base = start.coords, start.logmag
    else:
        raw, base = state.coords, 0.0
    n = start.n
    coeffs = dft(raw)
    mag = np.abs(coeffs)
    with np.errstate(divide="ignore"):
        log_lam = np.log(eigen_magnitudes(n))
        log_terms = steps * log_lam[:, None] + np.log(mag)
    live = np.isfinite(log_terms)
    if not np.any(live):
        return ScaledState(PointCloud(np.zeros_like(start.coords), t_end),
                           -math.inf, np.zeros(start.d), degenerate=True)
    top = float(np.max(log_terms[live]))
    cos_t, sin_t = eigen_power_phase(n, steps)
    unit = np.zeros_like(coeffs)
    unit[live] = coeffs[live] / mag[live]
    rotated = unit * (cos_t + 1j * sin_t)[:, None]
    with np.errstate(under="ignore"):
        scaled = np.where(live, np.exp(np.where(live, log_terms - top, 0.0)), 0.0)
    values = idft(rotated * scaled)
    norm = float(np.linalg.norm(values))
    if norm == 0.0:
        return ScaledState(PointCloud(np.zeros_like(values), t_end), -math.inf,
                           np.zeros(start.d), degenerate=True)
    unit_values = values / norm
    return ScaledState(PointCloud(unit_values, t_end),
                       base + top + math.log(norm),
                       np.linalg.norm(unit_values, axis=0))


def spectral_step(values) -> np.ndarray:
    """One step via the transform: idft(lambda * dft(x))."""
    x, flat = _as_columns(np.asarray(values, dtype=np.float64))
    out = idft(eigenvalues(x.shape[0])[:, None] * dft(x))
    return out[:, 0] if flat else out
