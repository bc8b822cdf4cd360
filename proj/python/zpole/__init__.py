"""Zero-pole interpolation on genus 0 and genus 1 surfaces."""

import json

from ._zpole import (
    RationalMatrixFunction,
    Torus,
    fay_residual,
    scalar_line_map,
    solve_genus0,
    sylvester_coefficients,
    theta,
    theta_char,
    theta_gradient,
)
from ._zpole import _run_criterion


def run_criterion(criterion, seed=7, samples=0, tol_scale=1.0):
    """Run one acceptance criterion (1-9) and return its report as a dict."""
    return json.loads(_run_criterion(criterion, seed, samples, tol_scale))


def verify_all(seed=7, samples=0, tol_scale=1.0):
    return [run_criterion(k, seed, samples, tol_scale) for k in range(1, 10)]


__all__ = [
    "RationalMatrixFunction",
    "Torus",
    "fay_residual",
    "run_criterion",
    "scalar_line_map",
    "solve_genus0",
    "sylvester_coefficients",
    "theta",
    "theta_char",
    "theta_gradient",
    "verify_all",
]
