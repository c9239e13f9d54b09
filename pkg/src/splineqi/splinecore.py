"""Univariate B-spline infrastructure: knot sequences, Greville-type symmetric
functions, evaluation, derivatives, moments and integrals.

Index conventions
-----------------
A sequence of degree ``m`` over ``[a, b]`` with ``n`` spans carries knots
``t_k`` for a contiguous integer range that always includes ``[-m, n+m]``.
The basis spline ``B_j`` of degree ``m`` has support ``[t_{j-m}, t_{j+1}]``,
so the basis over the domain is ``B_0, ..., B_{n+m-1}``.

Two layouts are supported:

* clamped: ``t_{-m} = ... = t_0 = a`` and ``b = t_n = ... = t_{n+m}`` with
  strictly increasing interior knots;
* cardinal: plain uniform knots with ``pad`` extra knots on both sides.  It
  stands in for the bi-infinite uniform setting; Greville points and moment
  kernels remain available slightly outside the basis index range so that
  operator stencils keep their interior shape near the domain ends, and norm
  sampling is restricted to the central half of the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["KnotSequence", "GrevilleData"]


class _BasisView:
    """Cox-de Boor evaluation of one polynomial degree over a shared knot array.

    ``row_at(x, k)`` returns the values of the ``deg+1`` splines that are
    nonzero on the span ``[t_k, t_{k+1})``, namely ``B_k, ..., B_{k+deg}`` in
    the support convention above.
    """

    __slots__ = ("t", "k0", "deg")

    def __init__(self, t: np.ndarray, k0: int, deg: int):
        self.t = t
        self.k0 = k0
        self.deg = deg

    def knot(self, k: int) -> float:
        pos = k - self.k0
        if pos < 0 or pos >= len(self.t):
            raise IndexError(f"knot index {k} outside stored range")
        return float(self.t[pos])

    @property
    def kmin(self) -> int:
        return self.k0

    @property
    def kmax(self) -> int:
        return self.k0 + len(self.t) - 1

    def jrange(self) -> tuple[int, int]:
        """Basis indices whose full knot window is stored."""
        return self.kmin + self.deg, self.kmax - 1

    def find_span(self, x: float, klo: int, khi: int) -> int:
        """Span index k in [klo, khi] with t_k <= x < t_{k+1} (last span at x = t_{khi+1})."""
        pos = int(np.searchsorted(self.t, x, side="right")) - 1
        k = pos + self.k0
        k = min(max(k, klo), khi)
        # skip zero-width spans (multiple knots)
        while k < khi and self.knot(k + 1) <= self.knot(k):
            k += 1
        while k > klo and self.knot(k + 1) <= self.knot(k):
            k -= 1
        return k

    def row_at(self, x: float, k: int) -> np.ndarray:
        """Values of B_k, ..., B_{k+deg} at x, for x in the span [t_k, t_{k+1}]."""
        p = self.deg
        t = self.t
        i = k - self.k0
        N = [0.0] * (p + 1)
        left = [0.0] * (p + 1)
        right = [0.0] * (p + 1)
        N[0] = 1.0
        for j in range(1, p + 1):
            left[j] = x - t[i + 1 - j]
            right[j] = t[i + j] - x
            saved = 0.0
            for r in range(j):
                temp = N[r] / (right[r + 1] + left[j - r])
                N[r] = saved + right[r + 1] * temp
                saved = left[j - r] * temp
            N[j] = saved
        return np.asarray(N)

    def single_value(self, j: int, x: float) -> float:
        """Value of the single spline B_j at x by recursion on its own knot
        window t_{j-deg}, ..., t_{j+1} (no neighbouring knots needed).  Uses
        the half-open span convention, so x at the right support end gives 0.
        """
        p = self.deg
        base = j - p - self.k0
        if base < 0 or base + p + 1 >= len(self.t):
            raise IndexError(f"knot window for spline {j} not stored")
        w = self.t[base : base + p + 2]
        if not (w[0] <= x < w[-1]):
            return 0.0
        N = [1.0 if (w[r] <= x < w[r + 1]) else 0.0 for r in range(p + 1)]
        for d in range(1, p + 1):
            for r in range(p + 1 - d):
                acc = 0.0
                den = w[r + d] - w[r]
                if den > 0.0:
                    acc += (x - w[r]) / den * N[r]
                den = w[r + d + 1] - w[r + 1]
                if den > 0.0:
                    acc += (w[r + d + 1] - x) / den * N[r + 1]
                N[r] = acc
        return N[0]

    def deriv_row_at(self, x: float, k: int) -> np.ndarray:
        """First-derivative values of B_k, ..., B_{k+deg} at x in span k."""
        p = self.deg
        out = np.zeros(p + 1)
        if p == 0:
            return out
        lower = _BasisView(self.t, self.k0, p - 1)
        nd = lower.row_at(x, k)  # degree p-1 splines D_k, ..., D_{k+p-1}
        for r in range(p + 1):
            j = k + r
            term = 0.0
            d1 = self.knot(j) - self.knot(j - p)
            if d1 > 0.0 and 0 <= j - 1 - k <= p - 1:
                term += nd[j - 1 - k] / d1
            d2 = self.knot(j + 1) - self.knot(j - p + 1)
            if d2 > 0.0 and 0 <= j - k <= p - 1:
                term -= nd[j - k] / d2
            out[r] = p * term
        return out

    def integral(self, j: int) -> float:
        """Integral of B_j over its full support, (t_{j+1} - t_{j-deg})/(deg+1)."""
        return (self.knot(j + 1) - self.knot(j - self.deg)) / (self.deg + 1)


_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    rule = _GAUSS_CACHE.get(n)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(n)
        rule = (x, w)
        _GAUSS_CACHE[n] = rule
    return rule


@dataclass(frozen=True)
class GrevilleData:
    """Greville points and derived quantities over the basis index range.

    ``lam[j] = theta[j]**2 - theta2[j]`` is the nonnegative local-spread gap
    that governs the second-order corrections of the three-term operators;
    it vanishes exactly when the ``m`` window knots coincide.
    """

    theta: np.ndarray
    theta2: np.ndarray
    lam: np.ndarray
    dtheta: np.ndarray


class KnotSequence:
    """A knot sequence of one degree, with cached Greville and moment data.

    Immutable after construction; all caches are internal and append-only,
    so instances are safe for concurrent read access.
    """

    def __init__(self, degree: int, knots, *, cardinal: bool = False, pad: int = 0):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        if pad < 0:
            raise ValueError("pad must be >= 0")
        t = np.asarray(knots, dtype=float)
        if t.ndim != 1:
            raise ValueError("knots must be a flat sequence")
        if np.any(np.diff(t) < 0):
            raise ValueError("knots must be non-decreasing")
        n = len(t) - 2 * degree - 2 * pad - 1
        if n < 1:
            raise ValueError("too few knots for this degree")
        self.m = degree
        self.pad = pad
        self.cardinal = cardinal
        self.n = n
        self._view = _BasisView(t, -(degree + pad), degree)
        if self.b <= self.a:
            raise ValueError("empty domain")
        self._theta: dict[int, float] = {}
        self._dual_mom: dict[tuple[int, int], float] = {}
        self._basis_mom: dict[tuple[int, int], float] = {}
        self._dual_rules: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
        self._basis_rules: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    # ------------------------------------------------------------------ setup

    @classmethod
    def clamped(cls, degree: int, breakpoints) -> "KnotSequence":
        """Clamped sequence from breakpoints a = x_0 < x_1 < ... < x_n = b."""
        bp = np.asarray(breakpoints, dtype=float)
        if len(bp) < 2:
            raise ValueError("need at least two breakpoints")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        t = np.concatenate([np.repeat(bp[0], degree), bp, np.repeat(bp[-1], degree)])
        return cls(degree, t)

    @classmethod
    def cardinal_uniform(
        cls,
        degree: int,
        nspans: int,
        *,
        pad: int = 4,
        start: float = 0.0,
        spacing: float = 1.0,
    ) -> "KnotSequence":
        """Plain uniform sequence emulating the bi-infinite cardinal setting."""
        if nspans < 1:
            raise ValueError("nspans must be >= 1")
        if spacing <= 0:
            raise ValueError("spacing must be positive")
        k = np.arange(-(degree + pad), nspans + degree + pad + 1)
        return cls(degree, start + spacing * k, cardinal=True, pad=pad)

    @classmethod
    def from_text(cls, text: str) -> "KnotSequence":
        """Parse the plain text format: line 1 degree, line 2 the knots."""
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if len(lines) < 2:
            raise ValueError("expected a degree line and a knot line")
        degree = int(lines[0].split()[0])
        knots = [float(v) for v in lines[1].split()]
        return cls(degree, knots)

    def to_text(self) -> str:
        vals = " ".join(f"{v:.17g}" for v in self._view.t)
        return f"{self.m}\n{vals}\n"

    # ------------------------------------------------------------- properties

    @property
    def a(self) -> float:
        return self._view.knot(0)

    @property
    def b(self) -> float:
        return self._view.knot(self.n)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def nbasis(self) -> int:
        return self.n + self.m

    @property
    def basis_indices(self) -> range:
        return range(self.nbasis)

    def knot(self, k: int) -> float:
        return self._view.knot(k)

    @property
    def knots(self) -> np.ndarray:
        return self._view.t.copy()

    @property
    def interior_strictly_increasing(self) -> bool:
        t = self._view.t
        o = -self._view.k0
        interior = t[o : o + self.n + 1]
        return bool(np.all(np.diff(interior) > 0))

    def span_ratio(self) -> float:
        """Ratio of the largest to the smallest domain span."""
        t = self._view.t
        o = -self._view.k0
        h = np.diff(t[o : o + self.n + 1])
        return float(h.max() / h.min())

    # --------------------------------------------------------------- greville

    def greville_range(self) -> tuple[int, int]:
        """Indices j for which the Greville window t_{j-m+1..j} is stored."""
        return self._view.kmin + self.m - 1, self._view.kmax

    def _window(self, j: int) -> np.ndarray:
        lo, hi = self.greville_range()
        if j < lo or j > hi:
            raise IndexError(f"Greville index {j} outside stored range [{lo}, {hi}]")
        pos = j - self._view.k0
        return self._view.t[pos - self.m + 1 : pos + 1]

    def greville(self, j: int) -> float:
        """Greville point: mean of the m knots t_{j-m+1}, ..., t_j."""
        th = self._theta.get(j)
        if th is None:
            th = float(self._window(j).mean())
            self._theta[j] = th
        return th

    def symmetric_coeff(self, j: int, r: int, *, center: float = 0.0, scale: float = 1.0) -> float:
        """Normalized elementary symmetric function of the Greville window.

        Returns the r-th elementary symmetric function of the (optionally
        shifted and scaled) window knots divided by binomial(m, r), so that
        ``e_r = sum_j coeff(j, r) B_j`` expands the monomial of degree r in
        the basis.  ``center``/``scale`` move the expansion to the monomials
        ``((x - center)/scale)**r`` without loss of accuracy.
        """
        if r < 0 or r > self.m:
            raise ValueError(f"order r={r} must satisfy 0 <= r <= degree={self.m}")
        if r == 0:
            return 1.0
        w = (self._window(j) - center) / scale
        if r == 1:
            return float(w.mean())
        if r == 2:
            s1 = float(w.sum())
            return (s1 * s1 - float(w @ w)) / (self.m * (self.m - 1))
        coeffs = np.poly(w)  # coeffs[k] = (-1)^k * sigma_k
        sigma_r = float(coeffs[r]) * (-1.0) ** r
        return sigma_r / math.comb(self.m, r)

    def lam(self, j: int) -> float:
        """Local spread gap theta_j^2 - theta_j^(2); zero only for coincident
        windows.  Evaluated on the window shifted to its own Greville point,
        which is the same quantity without the catastrophic cancellation of
        the raw difference."""
        if self.m < 2:
            raise ValueError("lam is undefined for degree 1")
        return -self.symmetric_coeff(j, 2, center=self.greville(j))

    def greville_data(self) -> GrevilleData:
        js = np.arange(self.nbasis)
        theta = np.array([self.greville(j) for j in js])
        theta2 = np.array([self.symmetric_coeff(j, 2) for j in js]) if self.m >= 2 else theta * theta
        lam = theta * theta - theta2
        return GrevilleData(theta=theta, theta2=theta2, lam=lam, dtheta=np.diff(theta))

    # ------------------------------------------------------------- evaluation

    def _domain_span(self, x: float) -> int:
        a, b = self.domain
        if x < a or x > b:
            raise ValueError(f"x={x} outside domain [{a}, {b}]")
        return self._view.find_span(x, 0, self.n - 1)

    def basis_row(self, x: float) -> tuple[int, np.ndarray]:
        """All basis values at x: returns (start, values of B_start..B_{start+m})."""
        k = self._domain_span(x)
        return k, self._view.row_at(x, k)

    def basis_deriv_row(self, x: float) -> tuple[int, np.ndarray]:
        k = self._domain_span(x)
        return k, self._view.deriv_row_at(x, k)

    def basis_value(self, i: int, x: float) -> float:
        if i < 0 or i >= self.nbasis:
            raise IndexError(f"basis index {i} outside [0, {self.nbasis - 1}]")
        k, row = self.basis_row(x)
        off = i - k
        return float(row[off]) if 0 <= off <= self.m else 0.0

    def basis_deriv(self, i: int, x: float) -> float:
        if i < 0 or i >= self.nbasis:
            raise IndexError(f"basis index {i} outside [0, {self.nbasis - 1}]")
        k, row = self.basis_deriv_row(x)
        off = i - k
        return float(row[off]) if 0 <= off <= self.m else 0.0

    def basis_integral(self, i: int) -> float:
        """Integral of B_i over its full support, (t_{i+1} - t_{i-m})/(m+1)."""
        if i < 0 or i >= self.nbasis:
            raise IndexError(f"basis index {i} outside [0, {self.nbasis - 1}]")
        return self._view.integral(i)

    def basis_integral_domain(self, i: int) -> float:
        """Integral of B_i over [a, b] (differs from basis_integral only for
        cardinal boundary splines whose support leaves the domain)."""
        full = self._view.integral(i)
        if not self.cardinal:
            return full
        if self.knot(i - self.m) >= self.a and self.knot(i + 1) <= self.b:
            return full
        gx, gw = _gauss_rule(self.m // 2 + 1)
        total = 0.0
        for k in range(max(i - self.m, 0), min(i + 1, self.n)):
            u0, u1 = self.knot(k), self.knot(k + 1)
            if u1 <= u0:
                continue
            mid, half = 0.5 * (u0 + u1), 0.5 * (u1 - u0)
            for xg, wg in zip(mid + half * gx, half * gw):
                total += wg * self._view.single_value(i, xg)
        return total

    # ---------------------------------------------------------------- kernels

    def dual_view(self) -> _BasisView:
        """Degree-(m-2) view on the same knots (the moment-kernel space)."""
        if self.m < 2:
            raise ValueError("dual kernels need degree >= 2")
        return _BasisView(self._view.t, self._view.k0, self.m - 2)

    def _dual_window_ok(self, i: int) -> bool:
        lo = self._view.kmin + self.m - 1
        return lo <= i <= self._view.kmax

    def _check_dual_index(self, i: int):
        if self.m < 2:
            raise ValueError("dual kernels need degree >= 2")
        if not self.cardinal and not (1 <= i <= self.nbasis - 2):
            raise ValueError(f"dual kernel index {i} outside interior range [1, {self.nbasis - 2}]")
        if not self._dual_window_ok(i):
            raise IndexError(f"dual kernel window for index {i} not stored")
        w = self._window(i)
        if w[-1] <= w[0]:
            raise ValueError(f"degenerate dual kernel window at index {i}")

    def dual_rule(self, i: int, npts: int) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature nodes and weights for integrating f against the
        unit-integral degree-(m-2) kernel on [t_{i-m+1}, t_i]."""
        self._check_dual_index(i)
        key = (i, npts)
        cached = self._dual_rules.get(key)
        if cached is not None:
            return cached
        view = self.dual_view()
        jk = i - 1  # kernel = degree-(m-2) spline with support [t_{i-m+1}, t_i]
        norm = view.integral(jk)
        gx, gw = _gauss_rule(npts)
        nodes, wts = [], []
        for k in range(i - self.m + 1, i):
            u0, u1 = self.knot(k), self.knot(k + 1)
            if u1 <= u0:
                continue
            mid, half = 0.5 * (u0 + u1), 0.5 * (u1 - u0)
            for xg, wg in zip(mid + half * gx, half * gw):
                nodes.append(xg)
                wts.append(wg * view.single_value(jk, xg) / norm)
        rule = (np.asarray(nodes), np.asarray(wts))
        self._dual_rules[key] = rule
        return rule

    def dual_moment(self, i: int, r: int) -> float:
        """r-th raw moment of the unit-integral degree-(m-2) kernel at index i."""
        if r < 0:
            raise ValueError("moment order must be >= 0")
        key = (i, r)
        val = self._dual_mom.get(key)
        if val is None:
            if r == 0:
                self._check_dual_index(i)
                val = 1.0
            else:
                npts = (self.m - 2 + r) // 2 + 1
                nodes, wts = self.dual_rule(i, npts)
                val = float(np.dot(wts, nodes**r))
            self._dual_mom[key] = val
        return val

    def dual_apply(self, i: int, f, npts: int = 8) -> float:
        """Integral of f against the unit-integral dual kernel at index i."""
        nodes, wts = self.dual_rule(i, npts)
        return float(np.dot(wts, np.asarray(f(nodes), dtype=float)))

    def basis_rule(self, i: int, npts: int) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature nodes and weights against the unit-integral basis kernel B_i."""
        lo_ok = self._view.kmin <= i - self.m
        hi_ok = i + 1 <= self._view.kmax
        if not (lo_ok and hi_ok):
            raise IndexError(f"basis kernel window for index {i} not stored")
        key = (i, npts)
        cached = self._basis_rules.get(key)
        if cached is not None:
            return cached
        norm = self._view.integral(i)
        gx, gw = _gauss_rule(npts)
        nodes, wts = [], []
        for k in range(i - self.m, i + 1):
            u0, u1 = self.knot(k), self.knot(k + 1)
            if u1 <= u0:
                continue
            mid, half = 0.5 * (u0 + u1), 0.5 * (u1 - u0)
            for xg, wg in zip(mid + half * gx, half * gw):
                nodes.append(xg)
                wts.append(wg * self._view.single_value(i, xg) / norm)
        rule = (np.asarray(nodes), np.asarray(wts))
        self._basis_rules[key] = rule
        return rule

    def basis_moment(self, i: int, r: int) -> float:
        """r-th raw moment of the unit-integral basis kernel B_i."""
        if r < 0:
            raise ValueError("moment order must be >= 0")
        key = (i, r)
        val = self._basis_mom.get(key)
        if val is None:
            if r == 0:
                val = 1.0
                self.basis_rule(i, 1)  # index validation
            else:
                npts = (self.m + r) // 2 + 1
                nodes, wts = self.basis_rule(i, npts)
                val = float(np.dot(wts, nodes**r))
            self._basis_mom[key] = val
        return val

    def basis_apply(self, i: int, f, npts: int = 8) -> float:
        nodes, wts = self.basis_rule(i, npts)
        return float(np.dot(wts, np.asarray(f(nodes), dtype=float)))

    def __repr__(self) -> str:
        kind = "cardinal" if self.cardinal else "clamped"
        return f"KnotSequence(degree={self.m}, spans={self.n}, {kind}, domain=[{self.a:g}, {self.b:g}])"
