from __future__ import annotations

import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_state
from stagsearch.lattice import LABELS, LatticeSpec, build_tessellation
from stagsearch.walk import (
    ALT_ORDERING,
    StateVector,
    Walk,
    WalkConfig,
    apply_oracle,
    apply_tessellation_unitary,
    basis_vector,
    dense_operator,
    evolve,
    initial_state,
    step,
    write_state_csv,
)

THETAS = [0.0, math.pi / 8, math.pi / 4, math.pi / 3, math.pi / 2]


def test_config_defaults():
    cfg = WalkConfig()
    assert cfg.theta == math.pi / 4
    assert cfg.ordering == ("00", "01", "10", "11")
    assert cfg.global_sign == -1
    assert cfg.marked == (0, 0)


@pytest.mark.parametrize(
    "kwargs", [{"ordering": ("00", "00", "10", "11")}, {"ordering": ("00", "01")}, {"global_sign": 2}]
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        WalkConfig(**kwargs)


def test_initial_state_n2():
    psi = initial_state(LatticeSpec(2))
    amps = psi.amplitudes.reshape(4, 4)
    for y in range(4):
        for x in range(4):
            want = 1 / (2 * math.sqrt(2)) if (x + y) % 2 == 0 else 0.0
            assert amps[y, x] == pytest.approx(want, abs=1e-15)


@given(st.integers(2, 20))
def test_initial_state_normalised(n):
    assert initial_state(LatticeSpec(n)).norm() == pytest.approx(1.0, abs=1e-14)


def test_state_vector_shape_checked():
    with pytest.raises(ValueError):
        StateVector(np.zeros(5), LatticeSpec(2))


def test_zero_angle_is_identity(rng):
    lat = LatticeSpec(3)
    psi = StateVector(random_state(rng, lat.num_vertices), lat)
    for lb in LABELS:
        out = apply_tessellation_unitary(psi, build_tessellation(lat, lb), 0.0)
        np.testing.assert_array_equal(out.amplitudes, psi.amplitudes)


def test_right_angle_is_i_times_swap(rng):
    lat = LatticeSpec(3)
    psi = StateVector(random_state(rng, lat.num_vertices), lat)
    tess = build_tessellation(lat, "01")
    out = apply_tessellation_unitary(psi, tess, math.pi / 2)
    for anchor, partner in tess.polygons:
        assert out.amplitude(anchor) == pytest.approx(1j * psi.amplitude(partner), abs=1e-15)
        assert out.amplitude(partner) == pytest.approx(1j * psi.amplitude(anchor), abs=1e-15)


def test_quarter_angle_on_origin():
    lat = LatticeSpec(2)
    out = apply_tessellation_unitary(basis_vector(lat, (0, 0)), build_tessellation(lat, "00"), math.pi / 4)
    want = np.zeros(16, complex)
    want[0] = 1 / math.sqrt(2)
    want[1] = 1j / math.sqrt(2)
    np.testing.assert_allclose(out.amplitudes, want, atol=1e-15)


@given(st.sampled_from(LABELS), st.floats(-3.0, 3.0), st.integers(0, 2**32 - 1))
def test_inverse_angle_undoes_block(label, theta, seed):
    lat = LatticeSpec(3)
    psi = StateVector(random_state(np.random.default_rng(seed), lat.num_vertices), lat)
    tess = build_tessellation(lat, label)
    back = apply_tessellation_unitary(apply_tessellation_unitary(psi, tess, theta), tess, -theta)
    np.testing.assert_allclose(back.amplitudes, psi.amplitudes, atol=1e-12)


def test_block_locality():
    # one polygon's amplitudes never leak outside the polygon
    lat = LatticeSpec(3)
    tess = build_tessellation(lat, "11")
    anchor, partner = tess.polygons[4]
    psi = basis_vector(lat, anchor)
    out = apply_tessellation_unitary(psi, tess, 0.7)
    support = set(np.nonzero(out.amplitudes)[0].tolist())
    assert support == {anchor.x + 6 * anchor.y, partner.x + 6 * partner.y}


def test_tessellation_lattice_mismatch():
    with pytest.raises(ValueError):
        apply_tessellation_unitary(initial_state(LatticeSpec(3)), build_tessellation(LatticeSpec(2), "00"), 0.3)


def test_oracle_examples():
    lat = LatticeSpec(2)
    psi = initial_state(lat)
    out = apply_oracle(psi, (0, 0))
    assert out.amplitude((0, 0)) == pytest.approx(-1 / (2 * math.sqrt(2)))
    np.testing.assert_array_equal(out.amplitudes[1:], psi.amplitudes[1:])
    np.testing.assert_array_equal(apply_oracle(out, (0, 0)).amplitudes, psi.amplitudes)
    e = basis_vector(lat, (1, 0))
    np.testing.assert_array_equal(apply_oracle(e, (0, 0)).amplitudes, e.amplitudes)


@pytest.mark.parametrize("n", [2, 3, 7])
def test_unmarked_walk_fixes_initial_state(n):
    psi = initial_state(LatticeSpec(n))
    out = step(psi, WalkConfig(marked=None))
    np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-10)


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("ordering", [("00", "01", "10", "11"), ALT_ORDERING])
def test_step_preserves_norm(theta, ordering, rng):
    lat = LatticeSpec(4)
    psi = StateVector(random_state(rng, lat.num_vertices), lat)
    out = step(psi, WalkConfig(theta, ordering))
    assert out.norm() == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_matrix_free_matches_dense(n, rng):
    lat = LatticeSpec(n)
    cfg = WalkConfig()
    U = dense_operator(cfg, lat)
    for _ in range(20):
        psi = random_state(rng, lat.num_vertices)
        got = step(StateVector(psi, lat), cfg).amplitudes
        np.testing.assert_allclose(got, U @ psi, rtol=0, atol=1e-12)


def _explicit_product(cfg, lat):
    """Build the step from explicit 2x2 blocks; an oracle independent of the kernels."""
    N = lat.num_vertices
    M = np.eye(N, dtype=complex)
    if cfg.marked is not None:
        M[:, :] = 0
        M += np.eye(N)
        idx = cfg.marked.x + lat.side * cfg.marked.y
        M[idx, idx] = -1
    c, s = math.cos(cfg.theta), math.sin(cfg.theta)
    for lb in cfg.ordering:
        T = np.zeros((N, N), complex)
        for anchor, partner in build_tessellation(lat, lb).polygons:
            a = anchor.x + lat.side * anchor.y
            b = partner.x + lat.side * partner.y
            T[a, a] = T[b, b] = c
            T[a, b] = T[b, a] = 1j * s
        M = T @ M
    return cfg.global_sign * M


@pytest.mark.parametrize("theta", [0.3, math.pi / 4])
@pytest.mark.parametrize("ordering", [("00", "01", "10", "11"), ALT_ORDERING])
def test_dense_operator_matches_block_product(theta, ordering):
    lat = LatticeSpec(3)
    cfg = WalkConfig(theta, ordering)
    np.testing.assert_allclose(dense_operator(cfg, lat), _explicit_product(cfg, lat), atol=1e-14)


@pytest.mark.parametrize("theta", THETAS)
def test_dense_operator_unitary(theta):
    U = dense_operator(WalkConfig(theta), LatticeSpec(3))
    np.testing.assert_allclose(U.conj().T @ U, np.eye(36), atol=1e-10)


def test_dense_right_angle_is_signed_reflection_product():
    lat = LatticeSpec(2)
    U = dense_operator(WalkConfig(math.pi / 2, marked=None), lat)
    N = lat.num_vertices
    prod = np.eye(N)
    for lb in ("00", "01", "10", "11"):
        H = np.zeros((N, N))
        for anchor, partner in build_tessellation(lat, lb).polygons:
            a, b = anchor.x + 4 * anchor.y, partner.x + 4 * partner.y
            H[a, b] = H[b, a] = 1
        prod = H @ prod
    np.testing.assert_allclose(U, -prod, atol=1e-15)


def test_dense_cap():
    with pytest.raises(ValueError):
        dense_operator(WalkConfig(), LatticeSpec(33))


def test_evolve_zero_steps():
    lat = LatticeSpec(4)
    ev = evolve(initial_state(lat), WalkConfig(), 0)
    assert len(ev.probabilities) == 1
    assert ev.probabilities[0] == pytest.approx(1 / 32, rel=1e-14)


def test_evolve_negative_steps():
    with pytest.raises(ValueError):
        evolve(initial_state(LatticeSpec(2)), WalkConfig(), -1)


def test_total_probability_conserved():
    lat = LatticeSpec(8)
    walk = Walk(lat)
    psi = initial_state(lat)
    for _ in range(40):
        psi = walk.step(psi)
        assert psi.probabilities().sum() == pytest.approx(1.0, abs=1e-10)


def test_evolve_probability_series_matches_stepping():
    lat = LatticeSpec(5)
    cfg = WalkConfig()
    ev = evolve(initial_state(lat), cfg, 12)
    psi = initial_state(lat)
    for t in range(13):
        assert ev.probabilities[t] == pytest.approx(psi.probability((0, 0)), abs=1e-15)
        psi = step(psi, cfg)


def test_evolve_rises_to_peak_at_n16():
    from stagsearch.asymptotics import lambda_root

    lam = lambda_root(16)
    t_star = math.pi / (2 * lam)
    ev = evolve(initial_state(LatticeSpec(16)), WalkConfig(), int(2 * t_star))
    p = ev.probabilities
    assert p[0] == pytest.approx(1 / (2 * 16**2))
    assert abs(int(np.argmax(p)) - t_star) < 0.1 * t_star


def test_state_csv(tmp_path):
    lat = LatticeSpec(2)
    path = tmp_path / "state.csv"
    write_state_csv(initial_state(lat), path)
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["x", "y", "re", "im", "prob"]
    assert len(rows) == 16
    assert float(rows[0]["re"]) == 1 / (2 * math.sqrt(2))
    assert (rows[1]["x"], rows[1]["y"], float(rows[1]["prob"])) == ("1", "0", 0.0)
