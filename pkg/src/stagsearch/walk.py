"""Matrix-free staggered walk with Hamiltonians and the search oracle.

One step applies the oracle (if a vertex is marked), then each tessellation
unitary ``exp(i*theta*H)`` in ``config.ordering`` (first listed acts first),
then the global sign. With the defaults this is ``-U11 U10 U01 U00 R0``.

On a polygon, ``H`` is the 2x2 swap and ``H^2 = I``, so the block
``exp(i*theta*H) = cos(theta) I + i sin(theta) H`` is exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .lattice import LABELS, LatticeSpec, Tessellation, Vertex, pair_indices, parity_mask, vertex_index

DEFAULT_ORDERING = ("00", "01", "10", "11")
ALT_ORDERING = ("00", "10", "01", "11")
DENSE_CAP = 4096


@dataclass(frozen=True)
class WalkConfig:
    theta: float = math.pi / 4
    ordering: tuple[str, ...] = DEFAULT_ORDERING
    global_sign: int = -1
    marked: Vertex | None = Vertex(0, 0)

    def __post_init__(self):
        ordering = tuple(self.ordering)
        if sorted(ordering) != sorted(LABELS):
            raise ValueError(f"ordering must be a permutation of {LABELS}, got {ordering}")
        if self.global_sign not in (1, -1):
            raise ValueError(f"global_sign must be +1 or -1, got {self.global_sign}")
        object.__setattr__(self, "ordering", ordering)
        object.__setattr__(self, "theta", float(self.theta))
        if self.marked is not None:
            object.__setattr__(self, "marked", Vertex(*self.marked))

    def unmarked(self) -> WalkConfig:
        return WalkConfig(self.theta, self.ordering, self.global_sign, None)


@dataclass
class StateVector:
    amplitudes: np.ndarray
    lattice: LatticeSpec = field(repr=False)

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.lattice.num_vertices,):
            raise ValueError(
                f"expected {self.lattice.num_vertices} amplitudes, got shape {amps.shape}"
            )
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return self.amplitudes.real**2 + self.amplitudes.imag**2

    def amplitude(self, v: Vertex | tuple[int, int]) -> complex:
        return complex(self.amplitudes[vertex_index(v, self.lattice)])

    def probability(self, v: Vertex | tuple[int, int]) -> float:
        return abs(self.amplitude(v)) ** 2

    def copy(self) -> StateVector:
        return StateVector(self.amplitudes.copy(), self.lattice)

    def inner(self, other: StateVector) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


class Evolution(NamedTuple):
    probabilities: np.ndarray  # p(t) for t = 0..steps
    state: StateVector


def initial_state(lattice: LatticeSpec) -> StateVector:
    """Uniform superposition over the even-parity vertices."""
    amps = np.zeros(lattice.num_vertices, dtype=np.complex128)
    amps[parity_mask(lattice)] = 1.0 / (math.sqrt(2.0) * lattice.n)
    return StateVector(amps, lattice)


def basis_vector(lattice: LatticeSpec, v: Vertex | tuple[int, int]) -> StateVector:
    amps = np.zeros(lattice.num_vertices, dtype=np.complex128)
    amps[vertex_index(v, lattice)] = 1.0
    return StateVector(amps, lattice)


def _tessellation_arrays(tess: Tessellation, lattice: LatticeSpec):
    if len(tess.polygons) != lattice.num_vertices // 2:
        raise ValueError(
            f"tessellation has {len(tess.polygons)} polygons, lattice needs {lattice.num_vertices // 2}"
        )
    anchors = np.fromiter((vertex_index(p.anchor, lattice) for p in tess.polygons), np.intp)
    partners = np.fromiter((vertex_index(p.partner, lattice) for p in tess.polygons), np.intp)
    return anchors, partners


def apply_tessellation_unitary(state: StateVector, tess: Tessellation, theta: float) -> StateVector:
    anchors, partners = _tessellation_arrays(tess, state.lattice)
    out = state.copy()
    kernels.backend.apply_pairs(out.amplitudes, anchors, partners, math.cos(theta), math.sin(theta))
    return out


def apply_oracle(state: StateVector, marked: Vertex | tuple[int, int]) -> StateVector:
    out = state.copy()
    out.amplitudes[vertex_index(marked, state.lattice)] *= -1
    return out


class Walk:
    """Precomputed index tables for repeated application of one step."""

    def __init__(self, lattice: LatticeSpec, config: WalkConfig = WalkConfig(), backend=None):
        self.lattice = lattice
        self.config = config
        self.kernels = backend if backend is not None else kernels.backend
        tables = [pair_indices(lattice, label) for label in config.ordering]
        self.anchors = np.ascontiguousarray(np.stack([t[0] for t in tables]))
        self.partners = np.ascontiguousarray(np.stack([t[1] for t in tables]))
        self.cos = math.cos(config.theta)
        self.sin = math.sin(config.theta)
        self.marked = -1 if config.marked is None else vertex_index(config.marked, lattice)

    def apply_inplace(self, psi: np.ndarray, oracle: bool = True) -> None:
        """Apply one step to a raw ``(N,)`` or ``(N, m)`` complex128 C-contiguous array."""
        marked = self.marked if oracle else -1
        self.kernels.walk_step(
            psi, self.anchors, self.partners, self.cos, self.sin, float(self.config.global_sign), marked
        )

    def apply(self, psi: np.ndarray, oracle: bool = True) -> np.ndarray:
        out = np.array(psi, dtype=np.complex128, order="C", copy=True)
        self.apply_inplace(out, oracle)
        return out

    def step(self, state: StateVector) -> StateVector:
        return StateVector(self.apply(state.amplitudes), self.lattice)

    def run(self, psi: np.ndarray, steps: int, watch: int) -> np.ndarray:
        """Advance ``psi`` in place by ``steps``; return ``|psi[watch]|^2`` after each step."""
        return self.kernels.evolve_marked(
            psi,
            self.anchors,
            self.partners,
            self.cos,
            self.sin,
            float(self.config.global_sign),
            self.marked,
            watch,
            steps,
        )

    def evolve(self, state: StateVector, steps: int, watch: Vertex | None = None) -> Evolution:
        if steps < 0:
            raise ValueError("steps must be >= 0")
        if watch is None:
            watch = self.config.marked if self.config.marked is not None else Vertex(0, 0)
        w = vertex_index(watch, self.lattice)
        psi = state.amplitudes.copy()
        probs = np.empty(steps + 1)
        probs[0] = abs(psi[w]) ** 2
        if steps:
            probs[1:] = self.run(psi, steps, w)
        return Evolution(probs, StateVector(psi, self.lattice))


def step(state: StateVector, config: WalkConfig = WalkConfig()) -> StateVector:
    return Walk(state.lattice, config).step(state)


def evolve(state: StateVector, config: WalkConfig, steps: int) -> Evolution:
    """Probability at the marked vertex for t = 0..steps, and the final state."""
    return Walk(state.lattice, config).evolve(state, steps)


def dense_operator(config: WalkConfig, lattice: LatticeSpec, cap: int = DENSE_CAP) -> np.ndarray:
    """Explicit N x N matrix of one step; column j is the step applied to basis state j."""
    N = lattice.num_vertices
    if N > cap:
        raise ValueError(f"N={N} exceeds the dense-operator cap {cap}")
    mat = np.eye(N, dtype=np.complex128)
    Walk(lattice, config).apply_inplace(mat)
    return mat


def write_state_csv(state: StateVector, path) -> None:
    """Write one row per vertex with columns x, y, re, im, prob."""
    s = state.lattice.side
    probs = state.probabilities()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "re", "im", "prob"])
        for idx, amp in enumerate(state.amplitudes):
            y, x = divmod(idx, s)
            writer.writerow([x, y, f"{amp.real:.17g}", f"{amp.imag:.17g}", f"{probs[idx]:.17g}"])
