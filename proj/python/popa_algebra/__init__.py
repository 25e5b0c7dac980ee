"""Goldie-Sekhar solutions on commutative Banach algebras."""

import json

from . import _core
from ._core import PopaError, Solution, invert_tilt, kernel_basis, lambda_scale, tilt, xi

__all__ = [
    "PopaError",
    "Solution",
    "solution",
    "verify",
    "tilt",
    "invert_tilt",
    "lambda_scale",
    "solve_tilt",
    "factorize",
    "kernel_basis",
    "st_roots",
    "xi",
    "run_cli",
]


def solution(spec):
    """Build a Solution from a dict in the CLI's JSON form."""
    return Solution.from_json(json.dumps(spec))


def verify(sol, n_samples=10000, seed=0, box_radius=0.4, threads=0):
    return json.loads(_core.verify(sol, n_samples, seed, box_radius, threads))


def solve_tilt(sol, v, max_iter=200):
    return json.loads(_core.solve_tilt(sol, list(v), max_iter))


def factorize(sigma):
    return json.loads(_core.factorize(json.dumps([list(map(float, row)) for row in sigma])))


def st_roots(n=10):
    return json.loads(_core.st_roots(n))


def run_cli(*args):
    """Run a CLI verb in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli(list(args))
