"""Finite signed Radon measures nu = h*m and their Fourier transforms.

Convention (fixed package-wide): nuhat(p) = (1/2pi) * integral of
exp(-i<p,x>) nu(dx), so that the total mass equals 2*pi*nuhat(0).
Oscillatory integrals use composite Gauss-Legendre with the panel count
scaled to the number of phase oscillations across the support.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (DegenerateInputError, NumericalInputError,
                     QuadratureFailureError, ResolutionError)
from .quadrature import panel_rule, uniform_rule

TWO_PI = 2.0 * np.pi
NODE_CAP = 2_000_000


# ---------------------------------------------------------------------------
# curves


class Curve:
    """Regular parametrization gamma: [0,1] -> R^2 with two derivatives."""

    def point(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def second_derivative(self, t):
        raise NotImplementedError

    def length(self):
        t, w = uniform_rule(0.0, 1.0, 64, 8)
        dx, dy = self.derivative(t)
        return float(np.sum(w * np.hypot(dx, dy)))


@dataclass
class ClosedFormCircle(Curve):
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0

    def point(self, t):
        ang = TWO_PI * np.asarray(t, dtype=float)
        return (self.center[0] + self.radius * np.cos(ang),
                self.center[1] + self.radius * np.sin(ang))

    def derivative(self, t):
        ang = TWO_PI * np.asarray(t, dtype=float)
        k = TWO_PI * self.radius
        return (-k * np.sin(ang), k * np.cos(ang))

    def second_derivative(self, t):
        ang = TWO_PI * np.asarray(t, dtype=float)
        k = TWO_PI * TWO_PI * self.radius
        return (-k * np.cos(ang), -k * np.sin(ang))

    def length(self):
        return TWO_PI * self.radius


@dataclass
class Segment(Curve):
    start: tuple[float, float]
    end: tuple[float, float]

    def __post_init__(self):
        if np.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1]) == 0.0:
            raise DegenerateInputError("zero-length segment")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return (self.start[0] + t * (self.end[0] - self.start[0]),
                self.start[1] + t * (self.end[1] - self.start[1]))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        one = np.ones_like(t)
        return ((self.end[0] - self.start[0]) * one,
                (self.end[1] - self.start[1]) * one)

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        return (z, z.copy())

    def length(self):
        return float(np.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1]))


class SampledCurve(Curve):
    """Twice-differentiable cubic interpolation through node points."""

    def __init__(self, nodes, closed=False):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2 or len(nodes) < 4:
            raise DegenerateInputError("sampled curve needs at least 4 (x, y) nodes")
        self.nodes = nodes
        self.closed = bool(closed)
        if closed and not np.allclose(nodes[0], nodes[-1]):
            nodes = np.vstack([nodes, nodes[0]])
        t = np.linspace(0.0, 1.0, len(nodes))
        bc = "periodic" if closed else "natural"
        self._sx = CubicSpline(t, nodes[:, 0], bc_type=bc)
        self._sy = CubicSpline(t, nodes[:, 1], bc_type=bc)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return (self._sx(t), self._sy(t))

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return (self._sx(t, 1), self._sy(t, 1))

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return (self._sx(t, 2), self._sy(t, 2))


def curvature_min(curve: Curve, samples=2048):
    """min over samples of |x'y'' - x''y'| / |gamma'|^3."""
    t = np.linspace(0.0, 1.0, samples, endpoint=isinstance(curve, Segment))
    dx, dy = curve.derivative(t)
    ddx, ddy = curve.second_derivative(t)
    speed = np.hypot(dx, dy)
    if not np.all(np.isfinite([dx, dy, ddx, ddy])):
        raise NumericalInputError("non-finite curve derivatives")
    if np.any(speed <= 0.0):
        raise NumericalInputError("curve parametrization is not regular")
    return float(np.min(np.abs(dx * ddy - ddx * dy) / speed**3))


def segment_nondecay_direction(segment: Curve):
    """The ray angle in [0, pi) along which a segment's transform stays flat."""
    if not isinstance(segment, Segment):
        raise DegenerateInputError("non-decay direction is defined for segments only")
    a = segment.end[0] - segment.start[0]
    b = segment.end[1] - segment.start[1]
    # a cos(alpha) + b sin(alpha) = 0
    alpha = np.arctan2(-a, b)
    if alpha < 0.0:
        alpha += np.pi
    return float(alpha % np.pi)


# ---------------------------------------------------------------------------
# measures


def _as_weight(weight):
    if callable(weight):
        return weight
    const = float(weight)
    return lambda x, y: np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, const)


@dataclass
class CurveDelta:
    """Weighted arclength measure h * delta_Gamma."""

    curve: Curve
    weight: Callable | float = 1.0
    nonpositive: bool = field(init=False, default=False)

    def __post_init__(self):
        self._h = _as_weight(self.weight)
        x, y = self.curve.point(np.linspace(0.0, 1.0, 512))
        self.nonpositive = bool(np.max(self._h(x, y)) <= 0.0)

    def _nodes(self, max_abs_p):
        panels = 4 * max(1, int(np.ceil(max_abs_p * self.curve.length() / TWO_PI)))
        if panels * 8 > NODE_CAP:
            raise ResolutionError("curve quadrature exceeds node cap",
                                  attempted_nodes=panels * 8)
        t, w = uniform_rule(0.0, 1.0, panels, 8)
        x, y = self.curve.point(t)
        dx, dy = self.curve.derivative(t)
        return x, y, w * np.hypot(dx, dy) * self._h(x, y)

    def quad_nodes(self, max_abs_p):
        """(x, y, weights) with weights carrying h and the arclength element."""
        return self._nodes(max_abs_p)


@dataclass
class Density:
    """Absolutely continuous part nu(dx) = V(x) dx on an axis-aligned box."""

    V: Callable
    support_box: tuple[float, float, float, float]  # (xmin, xmax, ymin, ymax)
    nonpositive: bool = field(init=False, default=False)

    def __post_init__(self):
        x0, x1, y0, y1 = self.support_box
        if not (x1 > x0 and y1 > y0):
            raise DegenerateInputError("support box must have positive area")
        gx = np.linspace(x0, x1, 64)
        gy = np.linspace(y0, y1, 64)
        vals = np.asarray(self.V(gx[:, None], gy[None, :]), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise QuadratureFailureError("density is non-finite on its support box")
        self.nonpositive = bool(np.max(vals) <= 0.0)

    def _axis_rules(self, max_abs_p):
        # two GL8 panels per oscillation wavelength along each axis
        x0, x1, y0, y1 = self.support_box
        px = 2 * max(8, int(np.ceil(max_abs_p * (x1 - x0) / TWO_PI)))
        py = 2 * max(8, int(np.ceil(max_abs_p * (y1 - y0) / TWO_PI)))
        if (px * 8) * (py * 8) > NODE_CAP:
            raise ResolutionError("density quadrature exceeds node cap",
                                  attempted_nodes=px * py * 64)
        xs, wx = uniform_rule(x0, x1, px, 8)
        ys, wy = uniform_rule(y0, y1, py, 8)
        return xs, wx, ys, wy

    def quad_nodes(self, max_abs_p):
        xs, wx, ys, wy = self._axis_rules(max_abs_p)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        W = np.outer(wx, wy) * np.asarray(self.V(X, Y), dtype=float)
        return X.ravel(), Y.ravel(), W.ravel()


@dataclass
class Sum:
    parts: list

    @property
    def nonpositive(self):
        return all(p.nonpositive for p in self.parts)


RadonMeasureSpec = CurveDelta | Density | Sum


# ---------------------------------------------------------------------------
# transforms


def total_mass(nu: RadonMeasureSpec):
    """integral of nu(dx); equals 2*pi*fourier(nu, 0)."""
    if isinstance(nu, Sum):
        return sum(total_mass(p) for p in nu.parts)
    x, y, w = nu.quad_nodes(0.0)
    return float(np.sum(w))


def fourier(nu: RadonMeasureSpec, p):
    """nuhat(p) = (1/2pi) * integral exp(-i<p,x>) nu(dx)."""
    return complex(fourier_batch(nu, np.asarray(p, dtype=float).reshape(1, 2))[0])


def fourier_batch(nu: RadonMeasureSpec, points):
    """nuhat at an (n, 2) array of momenta, sharing one node set per measure."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if isinstance(nu, Sum):
        out = np.zeros(len(points), dtype=complex)
        for part in nu.parts:
            out += fourier_batch(part, points)
        return out
    max_abs_p = float(np.max(np.hypot(points[:, 0], points[:, 1]))) if len(points) else 0.0
    if isinstance(nu, Density):
        return _density_batch(nu, points, max_abs_p)
    x, y, w = nu.quad_nodes(max_abs_p)
    phase = np.exp(-1j * (points[:, 0:1] * x[None, :] + points[:, 1:2] * y[None, :]))
    return (phase @ w) / TWO_PI


def _density_batch(nu: Density, points, max_abs_p):
    xs, wx, ys, wy = nu._axis_rules(max_abs_p)
    vw = np.asarray(nu.V(xs[:, None], ys[None, :]), dtype=float) * np.outer(wx, wy)
    ex = np.exp(-1j * np.outer(points[:, 0], xs))       # (n, nx)
    ey = np.exp(-1j * np.outer(points[:, 1], ys))       # (n, ny)
    return np.einsum("nx,xy,ny->n", ex, vw, ey, optimize=True) / TWO_PI


def fourier_grid(nu: RadonMeasureSpec, px_values, py_values):
    """nuhat on the tensor grid px x py, returned shape (len(px), len(py)).

    Used by the plane-wave oracle, where the momenta of interest form a
    lattice of mode differences and the tensor structure makes the density
    transform two matrix products instead of a per-point sum.
    """
    px_values = np.asarray(px_values, dtype=float)
    py_values = np.asarray(py_values, dtype=float)
    if isinstance(nu, Sum):
        out = np.zeros((len(px_values), len(py_values)), dtype=complex)
        for part in nu.parts:
            out += fourier_grid(part, px_values, py_values)
        return out
    max_abs_p = float(np.hypot(np.max(np.abs(px_values), initial=0.0),
                               np.max(np.abs(py_values), initial=0.0)))
    if isinstance(nu, Density):
        xs, wx, ys, wy = nu._axis_rules(max_abs_p)
        vw = np.asarray(nu.V(xs[:, None], ys[None, :]), dtype=float) * np.outer(wx, wy)
        ex = np.exp(-1j * np.outer(px_values, xs))
        ey = np.exp(-1j * np.outer(py_values, ys))
        return (ex @ vw @ ey.T) / TWO_PI
    x, y, w = nu.quad_nodes(max_abs_p)
    ex = np.exp(-1j * np.outer(px_values, x))           # (npx, nt)
    ey = np.exp(-1j * np.outer(py_values, y))           # (npy, nt)
    return np.einsum("it,jt,t->ij", ex, ey, w, optimize=True) / TWO_PI


def fourier_matrix(nu: RadonMeasureSpec, points):
    """Hermitian matrix nuhat(p_j - p_k) over pairwise distinct points."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    diffs = pts[:, None, :] - pts[None, :, :]
    vals = fourier_batch(nu, diffs.reshape(-1, 2)).reshape(n, n)
    asym = np.max(np.abs(vals - vals.conj().T))
    scale = max(1.0, float(np.max(np.abs(vals))))
    if asym > 1e-10 * scale:
        raise NumericalInputError(
            "fourier matrix asymmetry %.3e exceeds tolerance (complex measure?)" % asym)
    return 0.5 * (vals + vals.conj().T)


# ---------------------------------------------------------------------------
# decay scans


@dataclass(frozen=True)
class DecayProfile:
    direction_angle: float
    radii: np.ndarray
    magnitudes: np.ndarray
    fitted_slope: float
    classification: str  # "decaying" | "non_decaying" | "inconclusive"


def decay_scan(nu: RadonMeasureSpec, alpha, r_max, samples=64):
    """|nuhat| along the ray of angle alpha, with a log-log tail slope fit."""
    if samples < 32:
        raise ValueError("need at least 32 samples (16 in the tail)")
    radii = np.linspace(r_max / samples, r_max, samples)
    pts = np.column_stack([radii * np.cos(alpha), radii * np.sin(alpha)])
    mags = np.abs(fourier_batch(nu, pts))

    tail = slice(samples // 2, None)
    tail_mags = mags[tail]
    # |nuhat| may oscillate through zeros along the ray; fit the slope on the
    # tail's upper envelope (max per log-spaced radius bin) so the dips do
    # not swamp the regression
    tail_r = radii[tail]
    edges = np.geomspace(tail_r[0] * (1 - 1e-12), tail_r[-1] * (1 + 1e-12), 9)
    idx = np.clip(np.searchsorted(edges, tail_r, side="right") - 1, 0, 7)
    env_r, env_m = [], []
    for b in range(8):
        sel = idx == b
        if np.any(sel):
            j = np.argmax(tail_mags[sel])
            env_r.append(tail_r[sel][j])
            env_m.append(tail_mags[sel][j])
    floor = 1e-16 * max(np.max(mags), 1e-300)
    slope = np.polyfit(np.log(env_r), np.log(np.maximum(env_m, floor)), 1)[0]

    level = float(np.mean(tail_mags))
    classification = "inconclusive"
    if slope <= -0.2 and mags[-1] < 0.5 * mags[0]:
        classification = "decaying"
    elif level > 1e-12 and np.max(np.abs(tail_mags - level)) < 0.1 * level:
        classification = "non_decaying"
    return DecayProfile(direction_angle=float(alpha), radii=radii, magnitudes=mags,
                        fitted_slope=float(slope), classification=classification)


# ---------------------------------------------------------------------------
# form-bound falsification


@dataclass(frozen=True)
class FormBoundReport:
    a_form: float
    b_form: float
    worst_ratio: float
    violated: bool


def _base_measure_nodes(nu: RadonMeasureSpec):
    """Nodes (x, y, m-weights, h-values) for the decomposition nu = h*m."""
    if isinstance(nu, Sum):
        xs, ys, ws, hs = [], [], [], []
        for part in nu.parts:
            x, y, w, h = _base_measure_nodes(part)
            xs.append(x); ys.append(y); ws.append(w); hs.append(h)
        return (np.concatenate(xs), np.concatenate(ys),
                np.concatenate(ws), np.concatenate(hs))
    x, y, w = nu.quad_nodes(8.0)
    if isinstance(nu, CurveDelta):
        hx = np.asarray(nu._h(x, y), dtype=float)
        base_w = np.where(hx != 0.0, w / np.where(hx != 0.0, hx, 1.0), 0.0)
        return x, y, base_w, hx
    # density nu = V dx: take m = |V| dx, h = sign(V)
    sign = np.sign(w)
    return x, y, np.abs(w), sign


def default_test_family(nu: RadonMeasureSpec):
    """Gaussian wave packets over a grid of centers, widths and wavevectors."""
    x, y, w, _ = _base_measure_nodes(nu)
    if len(x) == 0:
        centers = [(0.0, 0.0)]
    else:
        idx = np.linspace(0, len(x) - 1, 5).round().astype(int)
        centers = [(float(x[i]), float(y[i])) for i in idx] + [(0.0, 0.0)]
    sigmas = (0.05, 0.1, 0.2, 0.5, 1.0)
    ks = ((0.0, 0.0), (1.0, 0.0), (0.0, 3.0))
    return [(c, s, k) for c in centers for s in sigmas for k in ks]


def form_bound_check(nu: RadonMeasureSpec, a_form, b_form, family=None):
    """Falsification probe of the relative form bound with constants (a, b).

    Each test packet f = exp(i<k,x>) exp(-|x-x0|^2/(2 sigma^2)) has closed-form
    gradient and L2 norms; the measure side is evaluated by quadrature.  A
    worst ratio above 1 disproves the candidate constants; below 1 proves
    nothing (the family is finite).
    """
    if not (0.0 < a_form < 1.0):
        raise ValueError("a_form must lie in (0, 1)")
    if b_form <= 0.0:
        raise ValueError("b_form must be positive")
    if family is None:
        family = default_test_family(nu)
    x, y, mw, h = _base_measure_nodes(nu)
    worst = 0.0
    for (cx, cy), sigma, (kx, ky) in family:
        g2 = np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (sigma * sigma))
        lhs = float(np.sum((1.0 + h * h) * g2 * mw))
        k2 = kx * kx + ky * ky
        rhs = (a_form * (k2 * np.pi * sigma * sigma + np.pi)
               + b_form * np.pi * sigma * sigma)
        if rhs > 0.0:
            worst = max(worst, lhs / rhs)
    return FormBoundReport(a_form=a_form, b_form=b_form,
                           worst_ratio=worst, violated=worst > 1.0)
