"""Momentum-space spectrum of the unmarked evolution operator.

For each momentum pair ``(k, l)`` with ``0 <= k, l < 2n`` the plane spanned by
two plane waves, one on each parity class, is invariant under U. At
``theta = pi/4`` the 2x2 block on that plane is known in closed form; for any
other angle it is obtained by projecting the matrix-free operator onto the
plane. Planes ``(k, l)`` and ``(k+n, l+n)`` coincide, so the closed-form
eigenbasis keeps one eigenvector per pair (Table-style assignment:
``+phi`` for ``k < n``, ``-phi`` for ``k >= n``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpec
from .records import Record, emit
from .walk import DEFAULT_ORDERING, StateVector, Walk, WalkConfig

DEGENERATE_TOL = 1e-12
POSITIVE_TOL = 1e-9


class PhaseClass(str, enum.Enum):
    TRIVIAL_PI = "TrivialPi"
    DIAGONAL = "Diagonal"
    GENERIC = "Generic"


@dataclass(frozen=True)
class ReducedBlock:
    a: float
    b: float
    c: float
    d: float

    @property
    def A(self) -> complex:
        return complex(self.a, self.b)

    @property
    def B(self) -> complex:
        return complex(self.c, self.d)

    def matrix(self) -> np.ndarray:
        A, B = self.A, self.B
        return np.array([[A, B], [-B.conjugate(), A.conjugate()]])


@dataclass(frozen=True)
class SpectralEntry:
    k: int
    l: int
    cls: PhaseClass
    phi: float  # eigenvalue of U is exp(i*phi)
    v: np.ndarray  # coefficients on (psi0_kl, psi1_kl)

    @property
    def eigenvalue(self) -> complex:
        return complex(math.cos(self.phi), math.sin(self.phi))


def wrap_phase(x: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    y = math.remainder(x, 2.0 * math.pi)
    return math.pi if y <= -math.pi else y


def _check_kl(k: int, l: int, n: int) -> None:
    if n <= 1:
        raise ValueError(f"n must be > 1, got {n}")
    if not (0 <= k < 2 * n and 0 <= l < 2 * n):
        raise ValueError(f"momentum ({k}, {l}) outside [0, {2 * n})")


def coefficients(k: int, l: int, n: int) -> ReducedBlock:
    _check_kl(k, l, n)
    tk, tl = math.pi * k / n, math.pi * l / n
    f = math.cos(tk) + math.cos(tl)
    return ReducedBlock(
        a=0.5 * f * f - 1.0,
        b=-0.5 * (math.sin(tk) + math.sin(tl)) * f,
        c=0.5 * math.sin(tl - tk) * f,
        d=0.5 * (math.cos(tk - tl) - 1.0) * f,
    )


def reduced_operator(k: int, l: int, n: int) -> np.ndarray:
    return coefficients(k, l, n).matrix()


def classify(k: int, l: int, n: int) -> PhaseClass:
    m = 2 * n
    if (k + l) % m == n or (k - l) % m == n:
        return PhaseClass.TRIVIAL_PI
    if k == l:
        return PhaseClass.DIAGONAL
    return PhaseClass.GENERIC


def phi(k: int, l: int, n: int) -> tuple[PhaseClass, float]:
    """Class and unsigned eigenphase of the ``(k, l)`` block, in (-pi, pi].

    The eigenphase actually carried by the ``(k, l)`` eigenvector has the
    opposite sign when ``k >= n``; see :func:`eigenphase`.
    """
    _check_kl(k, l, n)
    cls = classify(k, l, n)
    if cls is PhaseClass.TRIVIAL_PI:
        return cls, math.pi
    if cls is PhaseClass.DIAGONAL:
        return cls, wrap_phase(-2.0 * math.pi * k / n)
    a = coefficients(k, l, n).a
    return cls, math.acos(min(1.0, max(-1.0, a)))


def eigenphase(k: int, l: int, n: int) -> float:
    _, p = phi(k, l, n)
    return p if k < n else wrap_phase(-p)


def _fallback_eigvec(block: ReducedBlock, phase: float) -> np.ndarray:
    # any unit eigenvector of the block works; take the better-conditioned row relation
    A, B = block.A, block.B
    e = complex(math.cos(phase), math.sin(phase))
    u1 = np.array([B, e - A])
    u2 = np.array([e - A.conjugate(), -B.conjugate()])
    u = u1 if np.linalg.norm(u1) >= np.linalg.norm(u2) else u2
    u = u / np.linalg.norm(u)
    if abs(u[0]) > 0:
        u = u * (abs(u[0]) / u[0])
    return u


def eigvec(k: int, l: int, n: int) -> np.ndarray:
    """Unit eigenvector of the reduced block for the eigenphase :func:`eigenphase`."""
    cls = classify(k, l, n)
    _check_kl(k, l, n)
    if cls is not PhaseClass.GENERIC:
        return np.array([1.0, 0.0], dtype=complex) if k < n else np.array([0.0, 1.0], dtype=complex)
    blk = coefficients(k, l, n)
    ph = eigenphase(k, l, n)
    s = math.sin(ph)
    den = blk.b + s
    if abs(den) <= DEGENERATE_TOL:
        return _fallback_eigvec(blk, ph)
    # r = (b + sin)/(2 sin) is positive on both sign branches
    r = den / (2.0 * s)
    root = math.sqrt(r)
    return np.array([root, complex(blk.d, blk.c) / (2.0 * s * root)])


def _plane_wave(n: int, k: int, l: int, which: int) -> np.ndarray:
    s = 2 * n
    ys, xs = np.divmod(np.arange(s * s), s)
    amps = np.exp(1j * np.pi * ((xs * k + ys * l) % s) / n) / (math.sqrt(2.0) * n)
    amps[(xs + ys) % 2 != which] = 0.0
    return amps


def basis_state(k: int, l: int, n: int, which: int) -> StateVector:
    """Plane wave of momentum (k, l) on the even (which=0) or odd (which=1) class."""
    _check_kl(k, l, n)
    if which not in (0, 1):
        raise ValueError("which must be 0 or 1")
    return StateVector(_plane_wave(n, k, l, which), LatticeSpec(n))


def verify_invariant_plane(k: int, l: int, n: int, walk: Walk | None = None) -> float:
    """Residual of the closed-form action of U on the (k, l) plane."""
    lattice = LatticeSpec(n)
    if walk is None:
        walk = Walk(lattice, WalkConfig(marked=None))
    blk = coefficients(k, l, n)
    A, B = blk.A, blk.B
    p0 = _plane_wave(n, k, l, 0)
    p1 = _plane_wave(n, k, l, 1)
    r0 = walk.apply(p0, oracle=False) - (A * p0 - B.conjugate() * p1)
    r1 = walk.apply(p1, oracle=False) - (B * p0 + A.conjugate() * p1)
    return float(max(np.linalg.norm(r0), np.linalg.norm(r1)))


def lift_eigenvector(k: int, l: int, n: int, v: np.ndarray) -> StateVector:
    amps = v[0] * _plane_wave(n, k, l, 0) + v[1] * _plane_wave(n, k, l, 1)
    return StateVector(amps, LatticeSpec(n))


def enumerate_spectrum(n: int) -> list[SpectralEntry]:
    """One eigenpair of U per momentum pair: an orthonormal eigenbasis of N vectors."""
    LatticeSpec(n)
    entries = []
    for k in range(2 * n):
        for l in range(2 * n):
            cls = classify(k, l, n)
            entries.append(SpectralEntry(k, l, cls, eigenphase(k, l, n), eigvec(k, l, n)))
    return entries


@dataclass(frozen=True)
class SpectrumGrid:
    """Closed-form spectrum data on the full ``2n x 2n`` momentum grid.

    ``weight`` is ``|<0|v>|^2``, the squared first coefficient of the chosen
    eigenvector; it equals ``2 n^2 |<0,0|psi_kl>|^2``.
    """

    n: int
    k: np.ndarray
    l: np.ndarray
    a: np.ndarray
    b: np.ndarray
    f: np.ndarray
    cls: np.ndarray  # 0 TrivialPi, 1 Diagonal, 2 Generic
    phase: np.ndarray
    weight: np.ndarray

    @property
    def generic(self) -> np.ndarray:
        return self.cls == 2


def spectrum_grid(n: int) -> SpectrumGrid:
    LatticeSpec(n)
    m = 2 * n
    k, l = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    tk, tl = np.pi * k / n, np.pi * l / n
    f = np.cos(tk) + np.cos(tl)
    a = 0.5 * f * f - 1.0
    b = -0.5 * (np.sin(tk) + np.sin(tl)) * f
    trivial = ((k + l) % m == n) | ((k - l) % m == n)
    diag = (k == l) & ~trivial
    cls = np.full(k.shape, 2)
    cls[trivial] = 0
    cls[diag] = 1
    low = k < n

    raw = np.arccos(np.clip(a, -1.0, 1.0))
    raw = np.where(trivial, np.pi, raw)
    raw = np.where(diag, -2.0 * np.pi * k / n, raw)
    phase = np.where(low, raw, -raw)
    phase = np.remainder(phase + np.pi, 2.0 * np.pi) - np.pi
    phase = np.where(phase <= -np.pi, np.pi, phase)

    gen = cls == 2
    s = np.sin(np.where(gen, phase, 1.0))
    weight = np.where(gen, (b + s) / (2.0 * s), np.where(low, 1.0, 0.0))
    return SpectrumGrid(n, k, l, a, b, f, cls, phase, weight)


# ---------------------------------------------------------------------------
# general theta: blocks by projection of the matrix-free operator

def _plane_list(n: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(n) for l in range(2 * n)]


def _blocks_direct(walk: Walk, n: int, ks, ls, chunk_bytes: int = 1 << 26) -> np.ndarray:
    N = 4 * n * n
    s = 2 * n
    ys, xs = np.divmod(np.arange(N), s)
    even = ((xs + ys) % 2 == 0)[:, None]
    phase_x = np.exp(1j * np.pi * np.outer(np.arange(s), np.arange(s)) / n)
    norm = 1.0 / (math.sqrt(2.0) * n)
    width = max(1, chunk_bytes // (16 * N * 4))
    out = np.empty((len(ks), 2, 2), dtype=np.complex128)
    for start in range(0, len(ks), width):
        sl = slice(start, start + width)
        wave = phase_x[xs][:, ks[sl]] * phase_x[ys][:, ls[sl]] * norm
        p0 = np.where(even, wave, 0.0)
        p1 = np.where(even, 0.0, wave)
        u0 = walk.apply(p0, oracle=False)
        u1 = walk.apply(p1, oracle=False)
        c0, c1 = p0.conj(), p1.conj()
        out[sl, 0, 0] = np.einsum("ij,ij->j", c0, u0)
        out[sl, 0, 1] = np.einsum("ij,ij->j", c0, u1)
        out[sl, 1, 0] = np.einsum("ij,ij->j", c1, u0)
        out[sl, 1, 1] = np.einsum("ij,ij->j", c1, u1)
    return out


def _blocks_translation(walk: Walk, n: int, ks, ls) -> np.ndarray:
    # U commutes with even-sum translations, so <psi_i|U|psi_j> reduces to a
    # Fourier sum of U applied to one site of class j: sites (0,0) and (1,0).
    s = 2 * n
    out = np.empty((len(ks), 2, 2), dtype=np.complex128)
    for j, (ox, oy) in enumerate(((0, 0), (1, 0))):
        col = np.zeros(4 * n * n, dtype=np.complex128)
        col[ox + s * oy] = 1.0
        col = walk.apply(col, oracle=False)
        support = np.nonzero(col)[0]
        zy, zx = np.divmod(support, s)
        for i in (0, 1):
            on = (zx + zy) % 2 == i
            dx, dy, amp = zx[on] - ox, zy[on] - oy, col[support[on]]
            ph = np.exp(-1j * np.pi * (np.outer(ks, dx) + np.outer(ls, dy)) / n)
            out[:, i, j] = ph @ amp
    return out


def projected_blocks(
    n: int,
    theta: float,
    ordering=DEFAULT_ORDERING,
    planes: list[tuple[int, int]] | None = None,
    method: str = "translation",
) -> tuple[list[tuple[int, int]], np.ndarray]:
    """2x2 blocks ``M[i, j] = <psi_i|U|psi_j>`` for each listed momentum plane.

    ``method="direct"`` applies U to both plane waves of every plane;
    ``method="translation"`` uses translation invariance and two applications
    in total. Defaults to the ``2 n^2`` distinct planes ``0 <= k < n``.
    Returns the plane list and an array of shape ``(len(planes), 2, 2)``.
    """
    lattice = LatticeSpec(n)
    if planes is None:
        planes = _plane_list(n)
    walk = Walk(lattice, WalkConfig(theta=theta, ordering=ordering, marked=None))
    ks = np.array([p[0] for p in planes], dtype=np.int64)
    ls = np.array([p[1] for p in planes], dtype=np.int64)
    if method == "direct":
        return planes, _blocks_direct(walk, n, ks, ls)
    if method == "translation":
        return planes, _blocks_translation(walk, n, ks, ls)
    raise ValueError(f"unknown projection method {method!r}")


def projected_block(
    k: int, l: int, n: int, theta: float, ordering=DEFAULT_ORDERING, method: str = "direct"
) -> np.ndarray:
    _check_kl(k, l, n)
    return projected_blocks(n, theta, ordering, planes=[(k, l)], method=method)[1][0]


def plane_spectrum(
    n: int, theta: float, ordering=DEFAULT_ORDERING, method: str = "translation"
) -> tuple[np.ndarray, np.ndarray]:
    """All N eigenphases of U with weights ``|<0|v>|^2`` from projected blocks."""
    _, blocks = projected_blocks(n, theta, ordering, method=method)
    evals, vecs = np.linalg.eig(blocks)
    vecs = vecs / np.linalg.norm(vecs, axis=1, keepdims=True)
    weight = np.abs(vecs[:, 0, :]) ** 2
    degenerate = np.abs(evals[:, 0] - evals[:, 1]) < 1e-9
    # blocks proportional to I: any basis, keep the plane-wave one
    weight[degenerate] = [1.0, 0.0]
    return np.angle(evals).ravel(), weight.ravel()


def phi_min(
    n: int, theta: float = math.pi / 4, ordering=DEFAULT_ORDERING, method: str = "translation"
) -> float:
    """Smallest positive eigenphase of the unmarked operator."""
    LatticeSpec(n)
    if math.isclose(theta, math.pi / 4, rel_tol=0, abs_tol=1e-15) and tuple(ordering) == DEFAULT_ORDERING:
        return math.acos(coefficients(1, 0, n).a)
    phases, _ = plane_spectrum(n, theta, ordering, method)
    return float(phases[phases > POSITIVE_TOL].min())


@dataclass(frozen=True)
class SpectrumRow(Record):
    k: int
    l: int
    cls: str
    phi: float
    re_v0: float
    im_v0: float
    re_v1: float
    im_v1: float

    COLUMNS = ("k", "l", "class", "phi", "re_v0", "im_v0", "re_v1", "im_v1")

    @classmethod
    def from_entry(cls, e: SpectralEntry) -> SpectrumRow:
        v0, v1 = complex(e.v[0]), complex(e.v[1])
        return cls(e.k, e.l, e.cls.value, float(e.phi) + 0.0, v0.real, v0.imag, v1.real, v1.imag)


def write_spectrum_csv(entries: list[SpectralEntry], path) -> None:
    emit([SpectrumRow.from_entry(e) for e in entries], "csv", path, SpectrumRow.COLUMNS)
