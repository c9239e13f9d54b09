"""Partition and mesh generators shared by the command line and the tests."""

from __future__ import annotations

import numpy as np

from .bivariate import TensorMesh
from .quasiinterp import partition_condition_violations
from .splinecore import KnotSequence

__all__ = [
    "uniform_breakpoints",
    "geometric_breakpoints",
    "random_breakpoints",
    "random_clamped",
    "random_admissible_clamped",
    "random_mesh",
    "parse_knot_spec",
]


def uniform_breakpoints(n: int, a: float = 0.0, b: float = 1.0) -> np.ndarray:
    return np.linspace(a, b, n + 1)


def geometric_breakpoints(n: int, ratio: float, a: float = 0.0, b: float = 1.0) -> np.ndarray:
    """Spans in geometric progression; ratio is last span over first span."""
    if n < 1 or ratio <= 0:
        raise ValueError("need n >= 1 and ratio > 0")
    q = ratio ** (1.0 / max(n - 1, 1))
    spans = q ** np.arange(n)
    cuts = np.concatenate([[0.0], np.cumsum(spans)])
    return a + (b - a) * cuts / cuts[-1]


def random_breakpoints(
    n: int, rng: np.random.Generator, ratio: float = 1e3, a: float = 0.0, b: float = 1.0
) -> np.ndarray:
    """Spans log-uniform in [1, ratio], rescaled to [a, b]."""
    spans = np.exp(rng.uniform(0.0, np.log(ratio), n))
    cuts = np.concatenate([[0.0], np.cumsum(spans)])
    return a + (b - a) * cuts / cuts[-1]


def random_clamped(
    degree: int,
    n: int,
    rng: np.random.Generator,
    ratio: float = 1e3,
    a: float = 0.0,
    b: float = 1.0,
) -> KnotSequence:
    return KnotSequence.clamped(degree, random_breakpoints(n, rng, ratio, a, b))


def random_admissible_clamped(
    n: int,
    rng: np.random.Generator,
    p: int,
    jitter: float = 0.4,
    max_tries: int = 200,
) -> KnotSequence:
    """Random quadratic-spline partition satisfying the stencil balance
    condition for offset p (mildly perturbed uniform spans; rejection)."""
    for _ in range(max_tries):
        spans = 1.0 + jitter * rng.random(n)
        cuts = np.concatenate([[0.0], np.cumsum(spans)])
        ks = KnotSequence.clamped(2, cuts / cuts[-1])
        if not partition_condition_violations(ks, p):
            return ks
    raise RuntimeError("failed to draw an admissible partition; lower the jitter")


def random_mesh(
    nx: int, ny: int, rng: np.random.Generator, ratio: float = 1e3
) -> TensorMesh:
    return TensorMesh(random_breakpoints(nx, rng, ratio), random_breakpoints(ny, rng, ratio))


def parse_knot_spec(spec: str, degree: int, seed: int | None = None) -> KnotSequence:
    """Build a knot sequence from a compact description.

    ``uniform:N`` clamped uniform on [0, 1]; ``geometric:N:ratio`` clamped
    geometric spans; ``random:N:seed`` clamped with log-uniform span ratios
    up to 1e3; ``cardinal:N`` plain uniform with unit spacing (the
    bi-infinite emulation).  A spec containing whitespace is read as inline
    knot values.
    """
    spec = spec.strip()
    if any(ch.isspace() for ch in spec):
        vals = [float(v) for v in spec.split()]
        return KnotSequence(degree, vals)
    parts = spec.split(":")
    kind = parts[0]
    if kind == "uniform":
        return KnotSequence.clamped(degree, uniform_breakpoints(int(parts[1])))
    if kind == "geometric":
        return KnotSequence.clamped(degree, geometric_breakpoints(int(parts[1]), float(parts[2])))
    if kind == "random":
        used_seed = int(parts[2]) if len(parts) > 2 else seed
        if used_seed is None:
            raise ValueError("random knot spec needs a seed (random:N:seed or --seed)")
        rng = np.random.default_rng(used_seed)
        return random_clamped(degree, int(parts[1]), rng)
    if kind == "cardinal":
        pad = int(parts[2]) if len(parts) > 2 else 6
        return KnotSequence.cardinal_uniform(degree, int(parts[1]), pad=pad)
    raise ValueError(f"unknown knot spec {spec!r}")
