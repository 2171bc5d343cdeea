"""Search runs, scaling sweeps, angle scans and eigenphase trends."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from .asymptotics import NoRootError, lambda_general, lambda_root
from .lattice import LatticeSpec, vertex_index
from .records import Record
from .spectral import phi_min
from .walk import DEFAULT_ORDERING, Walk, WalkConfig, initial_state

log = logging.getLogger(__name__)

MODES = ("search", "scaling", "theta-scan", "eigen-trend", "spectrum", "appendix")
# Away from pi/4 a one-step transient lifts p(1) to 2-3 p(0) and nothing
# follows, so a run only counts as amplified once it clears this multiple.
MIN_GAIN = 10.0
CHUNK_STEPS = 256
NORM_TOL = 1e-10


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    n_values: tuple[int, ...]
    theta: float = math.pi / 4
    ordering: tuple[str, ...] = DEFAULT_ORDERING
    max_steps: int | None = None
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.n_values:
            raise ValueError("at least one n is required")
        if any(n <= 1 for n in self.n_values):
            raise ValueError(f"every n must be > 1, got {list(self.n_values)}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        WalkConfig(self.theta, self.ordering)


@dataclass(frozen=True)
class RunRecord(Record):
    n: int
    N: int
    t_opt: int | None  # None: no amplified maximum before max_steps
    p_max: float
    lam: float
    phi_min: float
    wall_time_seconds: float | None = None

    COLUMNS = ("n", "N", "t_opt", "p_max", "lambda", "phi_min", "wall_time_s")

    @property
    def amplified(self) -> bool:
        return self.t_opt is not None


@dataclass(frozen=True)
class ThetaRunRecord(Record):
    theta: float
    n: int
    N: int
    t_opt: int | None
    p_max: float
    lam: float
    phi_min: float
    wall_time_seconds: float | None = None

    COLUMNS = ("theta",) + RunRecord.COLUMNS

    @classmethod
    def wrap(cls, theta: float, rec: RunRecord) -> ThetaRunRecord:
        return cls(theta, *rec.values())

    def run(self) -> RunRecord:
        return RunRecord(*self.values()[1:])


@dataclass(frozen=True)
class TrendRecord(Record):
    n: int
    N: int
    theta: float
    lam: float
    phi_min: float

    COLUMNS = ("n", "N", "theta", "lambda", "phi_min")


@dataclass(frozen=True)
class TraceRow(Record):
    t: int
    p: float

    COLUMNS = ("t", "p")


@dataclass(frozen=True)
class FitResult(Record):
    quantity: str
    exponent: float
    coefficient: float
    r_squared: float

    COLUMNS = ("quantity", "exponent", "coefficient", "r_squared")

    def __call__(self, N):
        return self.coefficient * np.asarray(N, dtype=float) ** self.exponent


def fit_power_law(N, y, quantity: str = "") -> FitResult:
    """Least-squares line through ``(log N, log y)``: ``y ~ coefficient * N**exponent``."""
    N = np.asarray(N, dtype=float)
    y = np.asarray(y, dtype=float)
    if N.shape != y.shape:
        raise ValueError("N and y must have the same length")
    if len(np.unique(N)) < 2:
        raise ValueError("a power-law fit needs at least 2 distinct N values")
    if np.any(N <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs positive data")
    x, z = np.log(N), np.log(y)
    slope, intercept = np.polyfit(x, z, 1)
    resid = z - (slope * x + intercept)
    ss_tot = float(((z - z.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(quantity, float(slope), float(math.exp(intercept)), min(1.0, max(0.0, r2)))


def first_maximum(probs, rise_factor: float = 2.0) -> int | None:
    """First local maximum once ``p`` has exceeded ``rise_factor * p[0]``.

    Returns the first ``t`` with ``p[t+1] < p[t]`` at or after the first
    step where the threshold is crossed, or None if there is none.
    """
    p = np.asarray(probs, dtype=float)
    above = np.nonzero(p > rise_factor * p[0])[0]
    if len(above) == 0:
        return None
    start = above[0]
    drops = np.nonzero(p[start + 1 :] < p[start:-1])[0]
    return int(start + drops[0]) if len(drops) else None


def default_max_steps(n: int) -> int:
    N = 4 * n * n
    return int(math.ceil(10.0 * math.sqrt(N * math.log(N))))


def eigenphases(n: int, theta: float = math.pi / 4, ordering=DEFAULT_ORDERING) -> tuple[float, float]:
    """``(lambda, phi_min)``: closed form at the analysed operator, projection otherwise."""
    if math.isclose(theta, math.pi / 4, rel_tol=0, abs_tol=1e-15) and tuple(ordering) == DEFAULT_ORDERING:
        return lambda_root(n), phi_min(n)
    try:
        lam = lambda_general(n, theta, ordering)
    except NoRootError:
        lam = math.nan
    return lam, phi_min(n, theta, ordering)


def search_trace(n: int, theta: float = math.pi / 4, ordering=DEFAULT_ORDERING, steps: int = 0) -> np.ndarray:
    """Marked-vertex probability for t = 0..steps."""
    lattice = LatticeSpec(n)
    walk = Walk(lattice, WalkConfig(theta, ordering))
    return walk.evolve(initial_state(lattice), steps).probabilities


def run_search(
    n: int,
    theta: float = math.pi / 4,
    ordering=DEFAULT_ORDERING,
    max_steps: int | None = None,
    rise_factor: float = MIN_GAIN,
    timed: bool = False,
    spectral: bool = True,
) -> RunRecord:
    """Evolve from the initial state until the first amplified maximum.

    A run that never clears ``rise_factor * p(0)`` before ``max_steps`` is
    a failure to amplify: ``t_opt`` is None and ``p_max`` is the largest
    probability seen.
    """
    lattice = LatticeSpec(n)
    if max_steps is None:
        max_steps = default_max_steps(n)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    config = WalkConfig(theta, ordering)
    start = time.perf_counter()
    walk = Walk(lattice, config)
    psi = initial_state(lattice).amplitudes.copy()
    watch = vertex_index(config.marked, lattice)
    probs = np.empty(max_steps + 1)
    probs[0] = abs(psi[watch]) ** 2
    done = 0
    t_opt = None
    while done < max_steps:
        m = min(CHUNK_STEPS, max_steps - done)
        probs[done + 1 : done + 1 + m] = walk.run(psi, m, watch)
        done += m
        t_opt = first_maximum(probs[: done + 1], rise_factor)
        if t_opt is not None:
            break
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > NORM_TOL:
        log.warning("norm drift %.3g after %d steps (n=%d)", drift, done, n)
    if t_opt is None:
        log.info("no amplified maximum within %d steps (n=%d, theta=%.6g)", max_steps, n, theta)
    p_max = float(probs[t_opt]) if t_opt is not None else float(probs[: done + 1].max())
    lam, pmin = eigenphases(n, theta, ordering) if spectral else (math.nan, math.nan)
    wall = time.perf_counter() - start if timed else None
    return RunRecord(n, lattice.num_vertices, t_opt, p_max, lam, pmin, wall)


def scaling_sweep(
    n_values,
    theta: float = math.pi / 4,
    ordering=DEFAULT_ORDERING,
    max_steps: int | None = None,
    timed: bool = False,
) -> tuple[list[RunRecord], list[FitResult]]:
    """Runs over ``n_values`` plus log-log fits of ``t_opt`` and ``1/p_max`` against N."""
    n_values = list(n_values)
    if len(set(n_values)) < 4:
        raise ValueError("a scaling sweep needs at least 4 distinct n values")
    records = [run_search(n, theta, ordering, max_steps, timed=timed) for n in n_values]
    ok = [r for r in records if r.amplified]
    if len({r.N for r in ok}) < 2:
        raise ValueError("fewer than 2 amplified runs; nothing to fit")
    N = [r.N for r in ok]
    fits = [
        fit_power_law(N, [r.t_opt for r in ok], "t_opt"),
        fit_power_law(N, [1.0 / r.p_max for r in ok], "inv_p_max"),
    ]
    return records, fits


def eigen_trend(theta: float, n_values, ordering=DEFAULT_ORDERING) -> list[TrendRecord]:
    if not 0 < theta <= math.pi / 2:
        raise ValueError("theta must lie in (0, pi/2]")
    out = []
    for n in n_values:
        lam, pmin = eigenphases(n, theta, ordering)
        out.append(TrendRecord(n, 4 * n * n, theta, lam, pmin))
    return out


def theta_scan(
    n: int, theta_values, ordering=DEFAULT_ORDERING, max_steps: int | None = None, timed: bool = False
) -> list[ThetaRunRecord]:
    return [
        ThetaRunRecord.wrap(th, run_search(n, th, ordering, max_steps, timed=timed)) for th in theta_values
    ]
