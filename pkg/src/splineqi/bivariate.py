"""Bivariate coefficient machinery on criss-cross triangulations.

A tensor mesh with both diagonals drawn in every rectangle supports C^1
quadratic splines; the operators here are handled entirely at the
coefficient level.  The monomial targets come from the known expansions of
the quadratics in that basis: the coefficient of e_rs for r, s <= 1 is the
cell-centre monomial value, and the second-degree targets pick up the
-h^2/4 (resp. -k^2/4) correction.  Pointwise evaluation is provided only
for the uniform four-direction quadratic box spline, whose value is
computed exactly as a square/diamond convolution overlap area.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TensorMesh",
    "BivariateFunctionalFamily",
    "nb_box_coeffs",
    "crisscross_t2",
    "crisscross_g2",
    "monomial_residuals",
    "bcoef_monomial",
    "family_moment",
    "eval_zp_box",
    "zp_dqi_empirical_norm",
]

_MONOMIALS = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2))


@dataclass(frozen=True)
class TensorMesh:
    """Strictly increasing grid lines; cell i spans [x_i, x_{i+1}] (0-based)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if len(x) < 2 or len(y) < 2:
            raise ValueError("need at least one cell per direction")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
            raise ValueError("grid lines must be strictly increasing")

    @classmethod
    def uniform(cls, nx: int, ny: int, width: float = 1.0) -> "TensorMesh":
        return cls(np.arange(nx + 1) * width, np.arange(ny + 1) * width)

    @classmethod
    def from_text(cls, text: str) -> "TensorMesh":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) < 2:
            raise ValueError("expected one line of x knots and one of y knots")
        return cls(
            np.array([float(v) for v in lines[0].split()]),
            np.array([float(v) for v in lines[1].split()]),
        )

    @property
    def hx(self) -> np.ndarray:
        return np.diff(self.x)

    @property
    def hy(self) -> np.ndarray:
        return np.diff(self.y)

    @property
    def sx(self) -> np.ndarray:
        """Cell midpoints in x."""
        return 0.5 * (self.x[:-1] + self.x[1:])

    @property
    def sy(self) -> np.ndarray:
        return 0.5 * (self.y[:-1] + self.y[1:])

    @property
    def ncx(self) -> int:
        return len(self.x) - 1

    @property
    def ncy(self) -> int:
        return len(self.y) - 1

    def interior_cells(self):
        for i in range(1, self.ncx - 1):
            for j in range(1, self.ncy - 1):
                yield i, j


def _axis_moment(kind: str, mid: float, span: float, r: int) -> float:
    """r-th raw moment (r <= 2) of the 1-D marginal of a cell functional."""
    if r == 0:
        return 1.0
    if r == 1:
        return mid
    if r == 2:
        if kind == "point":
            return mid * mid
        if kind == "pyramid":
            return mid * mid + span * span / 20.0
        if kind == "cell":
            return mid * mid + span * span / 12.0
    raise ValueError(f"unsupported moment order {r} for kind {kind}")


def family_moment(kind: str, mesh: TensorMesh, i: int, j: int, r: int, s: int) -> float:
    """Moment of e_rs against the cell functional of the given kind on cell (i, j).

    Valid for r + s <= 2, where the pyramid and cell-average moments
    factorize across the axes.
    """
    if r + s > 2:
        raise ValueError("moments available for total degree <= 2 only")
    return _axis_moment(kind, mesh.sx[i], mesh.hx[i], r) * _axis_moment(
        kind, mesh.sy[j], mesh.hy[j], s
    )


def bcoef_monomial(mesh: TensorMesh, i: int, j: int, r: int, s: int) -> float:
    """Coefficient of e_rs in the criss-cross quadratic basis at cell (i, j)."""
    if (r, s) not in _MONOMIALS:
        raise ValueError("targets available for total degree <= 2 only")
    cx = mesh.sx[i] ** r if r < 2 else mesh.sx[i] ** 2 - mesh.hx[i] ** 2 / 4.0
    cy = mesh.sy[j] ** s if s < 2 else mesh.sy[j] ** 2 - mesh.hy[j] ** 2 / 4.0
    return cx * cy


def nb_box_coeffs(mesh_type: str, s: int) -> tuple[float, float, float]:
    """Near-best stencil weights on the uniform three/four direction meshes.

    Returns (centre weight, vertex weight, nu_star).  Three-direction
    stencils put the vertex weight at the six hexagon vertices of scale s,
    four-direction at the four lozenge vertices; both have the same l1 bound
    1 + 1/s^2.
    """
    if s < 1:
        raise ValueError("scale s must be >= 1")
    center = 1.0 + 1.0 / (2.0 * s * s)
    if mesh_type == "three-direction":
        vertex = -1.0 / (12.0 * s * s)
    elif mesh_type == "four-direction":
        vertex = -1.0 / (8.0 * s * s)
    else:
        raise ValueError("mesh_type must be 'three-direction' or 'four-direction'")
    return center, vertex, 1.0 + 1.0 / (s * s)


@dataclass(frozen=True)
class BivariateFunctionalFamily:
    """Directional weights of a degree-2-reproducing cell-moment operator.

    ``a``/``abar`` act on the x-neighbour cells, ``c``/``cbar`` on the
    y-neighbours; the centre weight closes the partition of unity.  Arrays
    are indexed by cell and hold NaN where a neighbour is missing.
    """

    tag: str
    mesh: TensorMesh
    moment_kind: str
    a: np.ndarray
    abar: np.ndarray
    c: np.ndarray
    cbar: np.ndarray

    def center(self, i: int, j: int) -> float:
        return 1.0 - (self.a[i] + self.abar[i] + self.c[j] + self.cbar[j])

    def weights(self, i: int, j: int) -> dict:
        """Stencil weights keyed by the neighbour cell."""
        return {
            (i - 1, j): self.a[i],
            (i + 1, j): self.abar[i],
            (i, j): self.center(i, j),
            (i, j - 1): self.c[j],
            (i, j + 1): self.cbar[j],
        }

    def nu(self, i: int, j: int) -> float:
        return float(sum(abs(w) for w in self.weights(i, j).values()))

    def nu_bound(self) -> float:
        return max(self.nu(i, j) for i, j in self.mesh.interior_cells())

    def max_directional_weight(self) -> float:
        vals = [self.a, self.abar, self.c, self.cbar]
        return float(max(np.nanmax(np.abs(v)) for v in vals))

    def apply_monomial(self, i: int, j: int, r: int, s: int) -> float:
        total = 0.0
        for (ci, cj), w in self.weights(i, j).items():
            total += w * family_moment(self.moment_kind, self.mesh, ci, cj, r, s)
        return total

    def is_exact_pi2(self, rtol: float = 1e-10) -> tuple[bool, float]:
        """Coefficient-level reproduction of all monomials of total degree <= 2."""
        ok = True
        worst = 0.0
        mesh = self.mesh
        for i, j in mesh.interior_cells():
            scale = max(
                1.0,
                abs(mesh.sx[i]) + mesh.hx[max(i - 1, 0) : i + 2].max(),
                abs(mesh.sy[j]) + mesh.hy[max(j - 1, 0) : j + 2].max(),
            )
            for r, s in _MONOMIALS:
                res = abs(self.apply_monomial(i, j, r, s) - bcoef_monomial(mesh, i, j, r, s))
                worst = max(worst, res)
                if res > rtol * scale ** (r + s):
                    ok = False
        return ok, worst


def _directional_weights(h: np.ndarray, three: float, four: float) -> tuple[np.ndarray, np.ndarray]:
    """Left/right neighbour weights -c*h_i^2 / ((h_{i-1}+h_i)(a*h_{i-1}+b*h_i+a*h_{i+1}))
    style ratios shared by the two operators; NaN at boundary cells."""
    n = len(h)
    left = np.full(n, np.nan)
    right = np.full(n, np.nan)
    for i in range(1, n - 1):
        mid = three * h[i - 1] + four * h[i] + three * h[i + 1]
        left[i] = -three * h[i] ** 2 / ((h[i - 1] + h[i]) * mid)
        right[i] = -three * h[i] ** 2 / (mid * (h[i] + h[i + 1]))
    return left, right


def crisscross_t2(mesh: TensorMesh) -> BivariateFunctionalFamily:
    """Degree-2-reproducing operator with normalized pyramid moments.

    Directional weights a_i = -3 h_i^2 / ((h_{i-1}+h_i)(3h_{i-1}+4h_i+3h_{i+1}))
    and mirrored; all four stay within [-3/4, 0] on every mesh.
    """
    a, abar = _directional_weights(mesh.hx, 3.0, 4.0)
    c, cbar = _directional_weights(mesh.hy, 3.0, 4.0)
    fam = BivariateFunctionalFamily("T2", mesh, "pyramid", a, abar, c, cbar)
    ok, worst = fam.is_exact_pi2()
    if not ok:
        raise RuntimeError(f"T2 reproduction check failed (worst residual {worst:.3e})")
    return fam


def crisscross_g2(mesh: TensorMesh) -> BivariateFunctionalFamily:
    """Degree-2-reproducing operator with cell-average moments.

    Directional weights alpha_i = -h_i^2 / ((h_{i-1}+h_i)(h_{i-1}+h_i+h_{i+1}))
    and mirrored; all four stay within [-1, 0] on every mesh.
    """
    a, abar = _directional_weights(mesh.hx, 1.0, 1.0)
    c, cbar = _directional_weights(mesh.hy, 1.0, 1.0)
    fam = BivariateFunctionalFamily("G2", mesh, "cell", a, abar, c, cbar)
    ok, worst = fam.is_exact_pi2()
    if not ok:
        raise RuntimeError(f"G2 reproduction check failed (worst residual {worst:.3e})")
    return fam


def monomial_residuals(tag: str, mesh: TensorMesh) -> dict:
    """Per-cell residual coefficients of the simple families on e_20 and e_02.

    For the Greville-sampling (S1), pyramid-moment (T1) and cell-average
    (G1) operators the residual against the degree-2 target is h_i^2 times
    1/4, 3/10 and 1/3 respectively, and the same in k_j^2 for e_02.
    """
    kinds = {"S1": "point", "T1": "pyramid", "G1": "cell"}
    if tag not in kinds:
        raise ValueError("tag must be one of S1, T1, G1")
    kind = kinds[tag]
    ncx, ncy = mesh.ncx, mesh.ncy
    res20 = np.empty((ncx, ncy))
    res02 = np.empty((ncx, ncy))
    for i in range(ncx):
        for j in range(ncy):
            res20[i, j] = family_moment(kind, mesh, i, j, 2, 0) - bcoef_monomial(mesh, i, j, 2, 0)
            res02[i, j] = family_moment(kind, mesh, i, j, 0, 2) - bcoef_monomial(mesh, i, j, 0, 2)
    return {"e20": res20, "e02": res02}


def eval_zp_box(x, y):
    """Centred C^1 quadratic box spline on the uniform four-direction mesh.

    The value equals half the overlap area of the unit square centred at
    (x, y) with the unit diamond |u| + |v| <= 1, evaluated exactly in the
    rotated frame as a piecewise-linear 1-D integral.  Supported on the
    octagon with vertices (+-3/2, +-1/2), (+-1/2, +-3/2); integer translates
    form a partition of unity.  Accepts scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    p0 = np.abs(x + y)
    q0 = np.abs(x - y)
    hi = np.maximum(p0, q0)
    lo = np.minimum(p0, q0)
    # kink offset of the section length: the branch switch at lo while the
    # diamond still reaches the square, the clipped-support edge 2 - lo beyond
    d2 = np.clip(np.minimum(lo, 2.0 - lo), 0.0, 1.0)
    bps = np.stack([hi - 1.0, hi - d2, hi, hi + d2, hi + 1.0])
    area = np.zeros(np.broadcast(x, y).shape)
    for seg in range(4):
        a = np.clip(bps[seg], -1.0, 1.0)
        b = np.clip(bps[seg + 1], -1.0, 1.0)
        width = b - a
        mid = 0.5 * (a + b)
        w = 1.0 - np.abs(mid - hi)
        length = np.maximum(0.0, np.minimum(2.0 * w, 1.0 - lo + w))
        area += np.maximum(width, 0.0) * length
    result = area / 4.0
    return float(result) if result.ndim == 0 else result


def zp_dqi_empirical_norm(s: int, grid: int = 400) -> float:
    """Empirical sup norm of the four-direction near-best operator at scale s.

    Samples the bivariate absolute-weight sum on a grid over one period
    [0, 1)^2 of the integer lattice; a lower estimate of the true norm.
    """
    center, vertex, _ = nb_box_coeffs("four-direction", s)
    stencil = [((0, 0), center)] + [
        ((ds, 0), vertex) for ds in (-s, s)
    ] + [((0, ds), vertex) for ds in (-s, s)]
    offs = (np.arange(grid) + 0.5) / grid
    best = 0.0
    ky_range = range(-2, 3)
    kx_range = range(-2, 3)
    for gy in offs:
        # accumulate per-node weight rows over the x line y = gy
        coef: dict[tuple[int, int], np.ndarray] = {}
        for kx in kx_range:
            for ky in ky_range:
                vals = eval_zp_box(offs - kx, gy - ky)
                if not np.any(vals):
                    continue
                for (ox, oy), w in stencil:
                    node = (kx + ox, ky + oy)
                    acc = coef.get(node)
                    if acc is None:
                        coef[node] = w * vals
                    else:
                        coef[node] = acc + w * vals
        leb = np.zeros(grid)
        for arr in coef.values():
            leb += np.abs(arr)
        best = max(best, float(leb.max()))
    return best
