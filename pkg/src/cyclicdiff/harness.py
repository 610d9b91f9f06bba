"""Seeded experiment runner: random initial clouds, snapshots, diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import rng
from .asymptotics import (
    AsymptoticModel,
    coefficients,
    ellipse_of,
    ellipse_residual,
    parity_separation,
    rms_normalized,
)
from .core import BINOMIAL_MAX_STEPS, PointCloud, ScaledState, as_scaled, \
    evolve_binomial, evolve_iterative, relative_discrepancy
from .errors import NoSuchSnapshot, RouteMismatch
from .spectral import evolve_closed_form

ROUTES = ("spectral", "iterative", "binomial")
ROUTE_TOL = 1e-9
#: Runs up to this many steps cross-check the spectral route against
#: plain iteration unless routes are given explicitly.
ITERATIVE_CHECK_MAX_STEPS = 2000
SCHEMA_VERSION = "1"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    steps: int
    d: int = 2
    snapshot_stride: Optional[int] = None  # None: only t = 0 and t = steps
    seed: int = 0
    distribution: str = "uniform"
    routes: Optional[Tuple[str, ...]] = None  # None: spectral, plus iterative if steps <= 2000
    outputs: Tuple[str, ...] = ()

    def __post_init__(self):
        routes = self.routes
        if routes is None:
            routes = ("spectral", "iterative") \
                if 1 <= self.steps <= ITERATIVE_CHECK_MAX_STEPS else ("spectral",)
        object.__setattr__(self, "routes", tuple(routes))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        if self.d < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.d}")
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")
        if self.snapshot_stride is not None and self.snapshot_stride < 1:
            raise ConfigError(f"snapshot stride must be >= 1, got {self.snapshot_stride}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if self.distribution != "uniform":
            raise ConfigError(f"only the uniform distribution is supported, got {self.distribution!r}")
        if not self.routes:
            raise ConfigError("at least one route is required")
        for r in self.routes:
            if r not in ROUTES:
                raise ConfigError(f"unknown route {r!r}; choose from {', '.join(ROUTES)}")
        if "binomial" in self.routes and self.steps > BINOMIAL_MAX_STEPS:
            raise ConfigError(
                f"binomial route is capped at {BINOMIAL_MAX_STEPS} steps, got {self.steps}")

    @property
    def stride(self) -> int:
        return self.snapshot_stride or self.steps

    def snapshot_times(self) -> List[int]:
        times = set(range(0, self.steps + 1, self.stride))
        times.add(self.steps)
        return sorted(times)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "steps": self.steps,
            "snapshot_stride": self.snapshot_stride,
            "seed": self.seed,
            "distribution": self.distribution,
            "routes": list(self.routes),
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(n=data["n"], d=data["d"], steps=data["steps"],
                   snapshot_stride=data["snapshot_stride"], seed=data["seed"],
                   distribution=data["distribution"], routes=tuple(data["routes"]),
                   outputs=tuple(data["outputs"]))


@dataclass(frozen=True, eq=False)
class Snapshot:
    t: int
    coords: np.ndarray  # unit Frobenius norm
    logmag: float

    def state(self) -> ScaledState:
        degenerate = not math.isfinite(self.logmag)
        return ScaledState(PointCloud(self.coords, self.t), self.logmag,
                           np.linalg.norm(self.coords, axis=0), degenerate)


def empty_diagnostics() -> Dict[str, list]:
    return {"ellipse_residual": [], "parity_separation": [], "growth_rate": []}


@dataclass(eq=False)
class RunRecord:
    config: RunConfig
    snapshots: List[Snapshot]
    model: AsymptoticModel
    diagnostics: Dict[str, list] = field(default_factory=empty_diagnostics)
    route_discrepancy: List[dict] = field(default_factory=list)

    def snapshot(self, t: int) -> Snapshot:
        for s in self.snapshots:
            if s.t == t:
                return s
        raise NoSuchSnapshot(f"no snapshot at t={t}; have {[s.t for s in self.snapshots]}")

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "model": self.model.to_dict(),
            "snapshots": [
                {"t": s.t,
                 "logmag": s.logmag if math.isfinite(s.logmag) else None,
                 "coords": np.asarray(s.coords, dtype=float).tolist()}
                for s in self.snapshots
            ],
            "diagnostics": {k: list(v) for k, v in self.diagnostics.items()},
            "route_discrepancy": list(self.route_discrepancy),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        if str(data.get("schema_version")) != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
        snaps = [Snapshot(int(s["t"]), np.array(s["coords"], dtype=float),
                          -math.inf if s["logmag"] is None else float(s["logmag"]))
                 for s in data["snapshots"]]
        return cls(config=RunConfig.from_dict(data["config"]), snapshots=snaps,
                   model=AsymptoticModel.from_dict(data["model"]),
                   diagnostics={k: list(v) for k, v in data["diagnostics"].items()},
                   route_discrepancy=list(data["route_discrepancy"]))

    def __eq__(self, other):
        if not isinstance(other, RunRecord):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def initial_cloud(config: RunConfig) -> PointCloud:
    return PointCloud(rng.uniform_cloud(config.n, config.d, config.seed))


def _diagnose(record: RunRecord, states: List[ScaledState]) -> None:
    """Fill parity-appropriate diagnostics for snapshots past t >= n.

    Growth rates are taken between consecutive snapshots with t1 >= 4n.
    """
    n, d = record.config.n, record.config.d
    model = record.model
    diag = record.diagnostics
    ellipse_ok = model.parity == "odd" and d == 2 and not model.degenerate
    for s in states:
        if s.t < n or s.degenerate:
            continue
        if model.parity == "even":
            sep = parity_separation(rms_normalized(s))
            diag["parity_separation"].append(
                {"t": s.t, "even_diameter": sep.even_diameter,
                 "odd_diameter": sep.odd_diameter, "gap": sep.gap})
        elif ellipse_ok:
            diag["ellipse_residual"].append(
                {"t": s.t, "value": ellipse_residual(s, ellipse_of(model, s.t))})
    late = [s for s in states if s.t >= 4 * n and not s.degenerate]
    for a, b in zip(late, late[1:]):
        diag["growth_rate"].append(
            {"t_start": a.t, "t_end": b.t,
             "value": (b.logmag - a.logmag) / (b.t - a.t)})


def run(config: RunConfig) -> RunRecord:
    """Evolve one seeded random cloud and record snapshots and diagnostics.

    The first enabled route in (spectral, iterative, binomial) order
    produces the stored snapshots; every other enabled route is compared
    against it at each snapshot and a RouteMismatch is raised when the
    relative discrepancy exceeds 1e-9.
    """
    init = initial_cloud(config)
    model = coefficients(init)
    routes = [r for r in ROUTES if r in config.routes]
    states: List[ScaledState] = []
    discrepancies = []
    iterated = as_scaled(init)
    for t in config.snapshot_times():
        results = {}
        if "spectral" in routes:
            results["spectral"] = evolve_closed_form(init, t)
        if "iterative" in routes:
            iterated = evolve_iterative(iterated, t - iterated.t)
            results["iterative"] = iterated
        if "binomial" in routes:
            results["binomial"] = as_scaled(evolve_binomial(init, t))
        primary = results[routes[0]]
        worst = 0.0
        for name in routes[1:]:
            err = relative_discrepancy(results[name], primary)
            if not err <= ROUTE_TOL:
                raise RouteMismatch(
                    f"route {name} disagrees with {routes[0]} at t={t}: "
                    f"relative discrepancy {err:.3e} > {ROUTE_TOL:g}")
            worst = max(worst, err)
        if len(routes) > 1:
            discrepancies.append({"t": t, "value": worst})
        states.append(primary)

    snapshots = [Snapshot(s.t, np.array(s.coords), s.logmag) for s in states]
    record = RunRecord(config=config, snapshots=snapshots, model=model,
                       route_discrepancy=discrepancies)
    _diagnose(record, states)
    return record


def run_batch(config: RunConfig, count: int) -> List[RunRecord]:
    """``count`` independent runs whose seeds derive from ``config.seed``."""
    return [run(replace(config, seed=s)) for s in rng.batch_seeds(config.seed, count)]
