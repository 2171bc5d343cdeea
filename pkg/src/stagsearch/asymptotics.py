"""Search eigenphase, the constant C^2, and the success-probability model.

The marked operator ``U0 = U R0`` is a rank-one perturbation of ``U``. Its
eigenphases ``lam`` not shared with ``U`` are the roots of the secular
function

    G(lam) = sum_j w_j cot((lam - phi_j) / 2),    w_j = |<0|v_j>|^2,

taken over an eigenbasis of ``U``. ``G`` decreases strictly between
consecutive poles, so each gap between poles holds exactly one root.

Quantities labelled ``model`` are leading-order asymptotic formulas; finite-n
values (``lambda_root``, ``C2_direct``...) are exact sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .lattice import LatticeSpec
from .records import Record
from .spectral import POSITIVE_TOL, SpectrumGrid, phi_min, plane_spectrum, spectrum_grid
from .walk import DEFAULT_ORDERING

GRID_POINTS = 256
CLUSTER_TOL = 1e-9
WEIGHT_TOL = 1e-14


class NoRootError(RuntimeError):
    """No sign change of the secular function was found in the bracket."""


def _cot_half(x):
    return 1.0 / np.tan(0.5 * x)


@dataclass(frozen=True)
class SecularTable:
    """Summand data of the secular equation at theta = pi/4.

    ``k, l, weight, phase`` cover the generic momentum pairs only; the
    excluded pairs (``k +- l = n mod 2n`` and ``k = l``) are accounted for by
    the closed-form ``tan`` and diagonal terms.
    """

    n: int
    k: np.ndarray
    l: np.ndarray
    weight: np.ndarray
    phase: np.ndarray
    diagonal_phase: np.ndarray  # -2*pi*k/n for 0 <= k < n, 2k != n

    @classmethod
    def build(cls, n: int, grid: SpectrumGrid | None = None) -> SecularTable:
        g = grid if grid is not None else spectrum_grid(n)
        gen = g.generic
        kd = np.array([k for k in range(n) if 2 * k != n])
        return cls(n, g.k[gen], g.l[gen], g.weight[gen], g.phase[gen], -2.0 * np.pi * kd / n)

    def trivial_term(self, lam):
        return (1 - 2 * self.n) * np.tan(0.5 * lam)

    def diagonal_term(self, lam):
        return _cot_half(np.add.outer(lam, -self.diagonal_phase)).sum(axis=-1)

    def generic_term(self, lam):
        return (self.weight * _cot_half(np.subtract.outer(lam, self.phase))).sum(axis=-1)

    def __call__(self, lam):
        """Left-hand side of the three-term secular equation."""
        lam = np.asarray(lam, dtype=float)
        return self.trivial_term(lam) + self.diagonal_term(lam) + self.generic_term(lam)


def secular_unsplit(n: int, lam: float) -> float:
    """The secular sum over every momentum pair, without the three-way split."""
    g = spectrum_grid(n)
    live = g.weight > 0
    return float((g.weight[live] * _cot_half(lam - g.phase[live])).sum())


def _solve_in(func, lo: float, hi: float) -> float:
    return brentq(func, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def _bracket_and_solve(func, lo: float, hi: float, points: int = GRID_POINTS) -> float:
    """Scan ``points`` interior grid points for a sign change, then refine."""
    grid = lo + (hi - lo) * np.arange(1, points + 1) / (points + 1)
    vals = np.array([func(x) for x in grid])
    zero = np.nonzero(vals == 0.0)[0]
    if len(zero):
        return float(grid[zero[0]])
    change = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if len(change):
        i = change[0]
        return _solve_in(func, grid[i], grid[i + 1])
    # root hides in an end cell next to a pole: shrink toward the pole
    outer, inner = (lo, grid[0]) if vals[0] < 0 else (hi, grid[-1])
    inner_sign = np.sign(func(inner))
    for j in range(1, 60):
        probe = inner + (outer - inner) * (1.0 - 2.0**-j)
        if np.sign(func(probe)) != inner_sign:
            return _solve_in(func, *sorted((probe, inner)))
    raise NoRootError(f"secular function has no sign change on ({lo:.6g}, {hi:.6g})")


def lambda_root(n: int) -> float:
    """Smallest positive eigenphase of the marked operator at theta = pi/4."""
    table = SecularTable.build(n)
    upper = phi_min(n)
    return _bracket_and_solve(lambda x: float(table(x)), 0.0, upper)


def _clusters(phases: np.ndarray, weights: np.ndarray, tol: float = CLUSTER_TOL):
    """Group eigenphases equal within ``tol`` on the circle -> (phase, weight, count)."""
    order = np.argsort(phases)
    ph, w = phases[order], weights[order]
    groups: list[list[int]] = [[0]]
    for i in range(1, len(ph)):
        if ph[i] - ph[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    if len(groups) > 1 and ph[0] + 2 * np.pi - ph[-1] <= tol:
        groups[0] = groups.pop() + groups[0]
    out = []
    for g in groups:
        out.append((float(ph[g[0]]), float(w[g].sum()), len(g)))
    return out


def smallest_marked_phase(phases: np.ndarray, weights: np.ndarray) -> float:
    """Smallest positive eigenphase of ``U R0`` given any eigenbasis of ``U``.

    Eigenphases of ``U`` survive in ``U0`` when their eigenspace has a
    direction orthogonal to the marked vertex; every other eigenphase of
    ``U0`` is a root of the secular function, one per gap between poles.
    """
    groups = _clusters(np.asarray(phases, float), np.asarray(weights, float))
    candidates = []
    poles = []
    for ph, w, count in groups:
        weighted = w > WEIGHT_TOL
        if count - int(weighted) > 0 and ph > POSITIVE_TOL:
            candidates.append(ph)
        if weighted:
            poles.append((ph, w))
    if poles:
        pole_ph = np.array([p for p, _ in poles])
        pole_w = np.array([w for _, w in poles])

        def G(x):
            return float((pole_w * _cot_half(x - pole_ph)).sum())

        ring = np.sort(np.concatenate([pole_ph - 2 * np.pi, pole_ph, pole_ph + 2 * np.pi]))
        i = np.nonzero(ring <= POSITIVE_TOL)[0][-1]
        # the gap straddling 0 may hold a negative root; then the next gap holds the answer
        for lo, hi in ((ring[i], ring[i + 1]), (ring[i + 1], ring[i + 2])):
            root = _bracket_and_solve(G, lo, hi)
            if root > POSITIVE_TOL:
                candidates.append(root)
                break
    if not candidates:
        raise NoRootError("no positive eigenphase found")
    return float(min(candidates))


def lambda_general(
    n: int, theta: float, ordering=DEFAULT_ORDERING, method: str = "translation"
) -> float:
    """Smallest positive eigenphase of ``U R0`` for any angle, from projected blocks."""
    LatticeSpec(n)
    phases, weights = plane_spectrum(n, theta, ordering, method)
    return smallest_marked_phase(phases, weights)


def C2_direct(n: int) -> float:
    """``(1/2n^2) sum_generic w / (1 - cos phi)``."""
    g = spectrum_grid(n)
    gen = g.generic
    return float((g.weight[gen] / (1.0 - np.cos(g.phase[gen]))).sum() / (2.0 * n * n))


def lambda_approx(n: int) -> float:
    """Leading-order model eigenphase ``1/(n C)``, positive root."""
    return 1.0 / (n * math.sqrt(C2_direct(n)))


def symmetry_summand(n: int) -> np.ndarray:
    """``b / (sin phi (1 - cos phi))`` on the momentum grid, zero off the generic set."""
    g = spectrum_grid(n)
    gen = g.generic
    ph = np.where(gen, g.phase, 1.0)
    return np.where(gen, g.b / (np.sin(ph) * (1.0 - np.cos(ph))), 0.0)


def symmetry_sum(n: int) -> float:
    return float(symmetry_summand(n).sum())


def f_kl(k, l, n: int):
    return np.cos(np.pi * np.asarray(k) / n) + np.cos(np.pi * np.asarray(l) / n)


def C2_reduced(n: int) -> float:
    """``(1/n^2) sum 1/(2 - f_kl)`` over ``0 <= k, l < n`` minus the origin."""
    LatticeSpec(n)
    k, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    f = f_kl(k, l, n)
    keep = (k + l) > 0
    return float((1.0 / (2.0 - f[keep])).sum() / (n * n))


def I_n(n: int) -> float:
    """Lattice sum of ``1/(k^2 + l^2)`` over ``0 <= k, l < n`` minus the origin."""
    if n < 2:
        raise ValueError("n must be >= 2")
    k, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    r2 = (k * k + l * l)[(k + l) > 0]
    return float((1.0 / r2).sum())


def success_model(n: int, lam: float, t):
    """Model success probability ``(n^2 lam^2 / 2) sin^2(lam (t + 1/2))``."""
    t = np.asarray(t, dtype=float)
    return 0.5 * n * n * lam * lam * np.sin(lam * (t + 0.5)) ** 2


def optimal_time(lam: float) -> int:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return int(round(math.pi / (2.0 * lam)))


def overlaps(n: int, lam: float) -> tuple[float, complex]:
    """Model overlaps ``(|<0,0|lam>|, <lam|psi0>)`` to leading order."""
    return 0.5 * n * lam, -1j * complex(math.cos(lam / 2), math.sin(lam / 2)) / math.sqrt(2.0)


def marked_overlap(n: int, lam: float) -> float:
    """Exact ``|<0,0|lam>|`` from the normalisation sum over the spectrum of U."""
    g = spectrum_grid(n)
    live = g.weight > 0
    total = (g.weight[live] / (1.0 - np.cos(lam - g.phase[live]))).sum() / (n * n)
    return float(1.0 / math.sqrt(total))


@dataclass(frozen=True)
class AsymptoticsRecord(Record):
    n: int
    lambda_exact: float
    lambda_approx: float
    C2_direct: float
    C2_reduced: float
    I_n: float
    phi_min: float
    overlap_marked: float
    t_opt: float
    P_model: float

    COLUMNS = (
        "n",
        "lambda_exact",
        "lambda_approx",
        "C2_direct",
        "C2_reduced",
        "I_n",
        "phi_min",
        "overlap_marked",
        "t_opt",
        "P_model",
    )

    @classmethod
    def compute(cls, n: int) -> AsymptoticsRecord:
        lam = lambda_root(n)
        c2 = C2_direct(n)
        return cls(
            n=n,
            lambda_exact=lam,
            lambda_approx=1.0 / (n * math.sqrt(c2)),
            C2_direct=c2,
            C2_reduced=C2_reduced(n),
            I_n=I_n(n),
            phi_min=phi_min(n),
            overlap_marked=overlaps(n, lam)[0],
            t_opt=math.pi / (2.0 * lam),
            P_model=0.5 * n * n * lam * lam,
        )
