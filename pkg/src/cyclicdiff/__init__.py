"""Cyclic vector-difference dynamics on labelled point clouds.

Three evaluation routes (direct iteration, signed binomial sums, Fourier
closed form), parity-dependent asymptotic predictions, and a seeded
experiment harness with CSV/JSON/SVG export.
"""

from .asymptotics import (
    AsymptoticModel,
    EllipseQuadratic,
    coefficients,
    coefficients_even,
    coefficients_odd,
    ellipse_of,
    ellipse_residual,
    growth_rate,
    parity_separation,
    predict,
    predict_even,
    predict_odd,
)
from .core import (
    PointCloud,
    ScaledState,
    center_sum,
    evolve_binomial,
    evolve_iterative,
    normalize,
    step,
)
from .errors import (
    DegenerateEllipse,
    DegenerateZero,
    InsufficientSnapshots,
    NoSuchSnapshot,
    NotConjugateSymmetric,
    RouteMismatch,
    StepsTooLarge,
    WrongParity,
)
from .harness import RunConfig, RunRecord, run
from .kernels import BACKEND
from .spectral import SpectrumView, dft, eigenvalues, evolve_closed_form, idft

__version__ = "0.1.0"
