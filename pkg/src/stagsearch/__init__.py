"""Staggered quantum-walk search on the two-dimensional torus."""

from .asymptotics import AsymptoticsRecord, lambda_general, lambda_root
from .experiments import RunRecord, run_search, scaling_sweep
from .kernels import BACKEND
from .lattice import LatticeSpec, Vertex, build_tessellation
from .spectral import enumerate_spectrum, phi_min
from .walk import Walk, WalkConfig, dense_operator, initial_state

__all__ = [
    "AsymptoticsRecord",
    "BACKEND",
    "LatticeSpec",
    "RunRecord",
    "Vertex",
    "Walk",
    "WalkConfig",
    "build_tessellation",
    "dense_operator",
    "enumerate_spectrum",
    "initial_state",
    "lambda_general",
    "lambda_root",
    "phi_min",
    "run_search",
    "scaling_sweep",
]
