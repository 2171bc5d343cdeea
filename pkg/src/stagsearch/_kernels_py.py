"""Pure numpy kernels; used when the compiled extension is unavailable.

All routines mutate ``psi`` in place. ``psi`` is complex128, either a single
state of shape ``(N,)`` or a batch of states stored as columns ``(N, m)``.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def apply_pairs(psi, anchors, partners, c, s):
    a = psi[anchors]
    b = psi[partners]
    is_ = 1j * s
    psi[anchors] = c * a + is_ * b
    psi[partners] = is_ * a + c * b


def walk_step(psi, anchors, partners, c, s, sign, marked):
    if marked >= 0:
        psi[marked] *= -1
    for t in range(anchors.shape[0]):
        apply_pairs(psi, anchors[t], partners[t], c, s)
    if sign != 1:
        psi *= sign


def evolve_marked(psi, anchors, partners, c, s, sign, marked, watch, steps):
    probs = np.empty(steps, dtype=np.float64)
    for t in range(steps):
        walk_step(psi, anchors, partners, c, s, sign, marked)
        amp = psi[watch]
        probs[t] = amp.real * amp.real + amp.imag * amp.imag
    return probs
