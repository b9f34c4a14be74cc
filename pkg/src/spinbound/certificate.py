"""Variational certificates for eigenvalues below the band threshold.

Trial spinors are momentum-space bumps f_a concentrated at points of the
minimum set, paired with the lower-band eigenvector.  The certificate is the
negative definiteness of the Rayleigh matrix Q = T + W built from them: each
certified point contributes one eigenvalue below the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import jv

from .errors import (CapacityError, ConfigError, NumericalInputError,
                     ResolutionError)
from .hankel import FhatProfile, fhat_profile
from .measure import Sum, fourier_matrix
from .model import (Circle, CouplingSpec, PointCloud, ThresholdData,
                    lower_band, lower_band_vectors)
from .quadrature import log_rule, merge_edges, panel_rule, uniform_rule

TOL_DEF = 1e-8
MIN_POINT_SEP = 1e-6

_SQRT2 = np.sqrt(2.0)


# ---------------------------------------------------------------------------
# trial basis


@dataclass(frozen=True)
class TrialBasis:
    points: np.ndarray          # (N, 2) momenta on the minimum set
    a: float                    # bump exponent in (0, 2]
    profile: FhatProfile        # radial transform of exp(-|x|^a/2)


def trial_basis(model: CouplingSpec, thr: ThresholdData, points, a) -> TrialBasis:
    """Validated TrialBasis; points must sit on the minimum set of the band."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 1:
        raise ConfigError("trial points must form an (N, 2) array, N >= 1")
    a = float(a)
    if not (0.0 < a <= 2.0):
        raise ConfigError("bump exponent a must lie in (0, 2]")
    for j in range(len(pts)):
        for k in range(j + 1, len(pts)):
            if np.hypot(*(pts[j] - pts[k])) <= MIN_POINT_SEP:
                raise ConfigError(
                    "trial points %d and %d closer than %g" % (j, k, MIN_POINT_SEP))
    gap = lower_band(model, pts[:, 0], pts[:, 1]) - thr.kappa
    worst = float(np.max(gap))
    if worst > thr.minset_tolerance:
        raise ConfigError(
            "trial point off the minimum set: lambda_- - kappa = %.3e" % worst)
    return TrialBasis(points=pts, a=a, profile=fhat_profile(a))


# ---------------------------------------------------------------------------
# closed forms


def grad_norm_sq(a):
    """Dirichlet integral of the bump exp(-|x|^a/2) over the plane: pi a / 2."""
    a = float(a)
    if not (0.0 < a <= 2.0):
        raise ConfigError("bump exponent a must lie in (0, 2]")
    return 0.5 * np.pi * a


def grad_norm_sq_quadrature(a):
    """Independent radial quadrature of |grad f_a|^2; cross-checks grad_norm_sq."""
    a = float(a)
    if not (0.0 < a <= 2.0):
        raise ConfigError("bump exponent a must lie in (0, 2]")
    # upper cut where r^a - 2 ln r stays above the working budget
    u_up = 60.0
    for _ in range(40):
        u_up = 60.0 + 2.0 * np.log(u_up)
    r_hi = u_up ** (1.0 / a)
    r_lo = max(10.0 ** (-14.0 / (2.0 * a)), 1e-280)  # omitted head < 1e-14
    r, w = log_rule(r_lo, r_hi, 8, 8)
    grad_sq = 0.25 * a * a * r ** (2.0 * a - 2.0) * np.exp(-r ** a)
    return float(2.0 * np.pi * np.sum(w * r * grad_sq))


def _bump_sq(a, r):
    """|f_a(x)|^2 = exp(-r^a) at radius r."""
    return np.exp(-np.asarray(r, dtype=float) ** a)


# ---------------------------------------------------------------------------
# point selection on the minimum set


def select_points(minset, N, strategy="equispaced"):
    N = int(N)
    if N < 1:
        raise ConfigError("point count N must be >= 1")
    if strategy not in ("equispaced", "farthest_point"):
        raise ConfigError("unknown point strategy %r" % (strategy,))
    if isinstance(minset, PointCloud):
        distinct = np.unique(np.round(np.asarray(minset.points, float), 9), axis=0)
        if N > len(distinct):
            raise CapacityError(
                "requested %d points but the minimum set has only %d" % (N, len(distinct)))
        if strategy == "equispaced":
            return minset.sample(N)
        return _farthest_point(distinct, N)
    if strategy == "equispaced":
        return minset.sample(N)
    return _farthest_point(minset.sample(512), N)


def _farthest_point(candidates, N):
    cand = np.asarray(candidates, dtype=float)
    centroid = cand.mean(axis=0)
    chosen = [int(np.argmax(np.hypot(*(cand - centroid).T)))]
    dist = np.hypot(*(cand - cand[chosen[0]]).T)
    while len(chosen) < N:
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.hypot(*(cand - cand[nxt]).T))
    return cand[chosen]


@dataclass(frozen=True)
class PointSearchResult:
    points: np.ndarray
    lambda_max: float
    negative_definite: bool
    evaluations: int


def find_definite_points(nu, minset, N, budget=200, seed=0) -> PointSearchResult:
    """Search the minimum set for points with a negative definite Fourier matrix.

    Random restarts plus local angle jitter around the incumbent; failure is
    returned as a value carrying the best lambda_max seen.
    """
    N = int(N)
    if N < 1:
        raise ConfigError("point count N must be >= 1")
    rng = np.random.default_rng(seed)
    on_circle = isinstance(minset, Circle)

    def draw_random():
        if on_circle:
            ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, N))
            cx, cy = minset.center
            return np.column_stack([cx + minset.radius * np.cos(ang),
                                    cy + minset.radius * np.sin(ang)])
        idx = rng.choice(len(minset.points), size=N, replace=False)
        return np.asarray(minset.points, float)[idx]

    def jitter(pts, scale):
        if not on_circle:
            return draw_random()
        cx, cy = minset.center
        ang = np.arctan2(pts[:, 1] - cy, pts[:, 0] - cx)
        ang = ang + rng.normal(0.0, scale, N)
        return np.column_stack([cx + minset.radius * np.cos(ang),
                                cy + minset.radius * np.sin(ang)])

    def admissible(pts):
        for j in range(N):
            for k in range(j + 1, N):
                if np.hypot(*(pts[j] - pts[k])) <= MIN_POINT_SEP:
                    return False
        return True

    best_pts, best_lam = None, np.inf
    evals = 0
    candidate = select_points(minset, N, "equispaced" if on_circle else "farthest_point")
    while evals < budget:
        if admissible(candidate):
            rep = definiteness(fourier_matrix(nu, candidate), TOL_DEF)
            evals += 1
            if rep.lambda_max < best_lam:
                best_lam, best_pts = rep.lambda_max, candidate.copy()
            if rep.negative_definite:
                return PointSearchResult(points=best_pts, lambda_max=best_lam,
                                         negative_definite=True, evaluations=evals)
        if best_pts is not None and rng.uniform() < 0.7:
            candidate = jitter(best_pts, 0.4 * 2.0 * np.pi / max(N, 2))
        else:
            candidate = draw_random()
    if best_pts is None:
        best_pts = candidate
        best_lam = definiteness(fourier_matrix(nu, best_pts), TOL_DEF).lambda_max
    return PointSearchResult(points=best_pts, lambda_max=float(best_lam),
                             negative_definite=False, evaluations=evals)


# ---------------------------------------------------------------------------
# definiteness


@dataclass(frozen=True)
class DefinitenessReport:
    lambda_max: float
    negative_definite: bool


def definiteness(matrix, tol_rel=TOL_DEF) -> DefinitenessReport:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NumericalInputError("definiteness expects a square matrix")
    asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if asym > 1e-8:
        raise NumericalInputError(
            "matrix is not Hermitian (max asymmetry %.3e)" % asym)
    h = 0.5 * (m + m.conj().T)
    lam = float(np.linalg.eigvalsh(h)[-1]) if m.size else 0.0
    frob = float(np.linalg.norm(h)) if m.size else 0.0
    return DefinitenessReport(lambda_max=lam,
                              negative_definite=bool(lam < -tol_rel * max(1.0, frob)))


# ---------------------------------------------------------------------------
# kinetic matrix


def kinetic_matrix(model: CouplingSpec, thr: ThresholdData, basis: TrialBasis):
    """T_jk = integral of (lambda_-(p) - kappa) fhat(|p-p_j|) fhat(|p-p_k|) dp.

    Each entry is split along the perpendicular bisector of (p_j, p_k) and
    integrated in polar coordinates about the nearer bump center, so the
    near-singular concentration of fhat is always radially resolved.
    """
    pts = basis.points
    n = len(pts)
    T = np.zeros((n, n))
    for j in range(n):
        T[j, j] = _kinetic_halfplane(model, thr.kappa, basis.profile, pts[j], None)
        for k in range(j + 1, n):
            val = (_kinetic_halfplane(model, thr.kappa, basis.profile, pts[j], pts[k])
                   + _kinetic_halfplane(model, thr.kappa, basis.profile, pts[k], pts[j]))
            T[j, k] = T[k, j] = val
    return T


def _kinetic_halfplane(model, kappa, prof, center, other):
    """Polar integral about `center`, restricted to its bisector half-plane."""
    if other is None:
        d, axis = 0.0, 0.0
    else:
        d = float(np.hypot(*(other - center)))
        axis = float(np.arctan2(other[1] - center[1], other[0] - center[0]))
    t_ref, w_ref = uniform_rule(0.0, 1.0, 16, 8)
    rho_guard = 10.0 * (1.0 + np.hypot(*center) + d)
    k_lo = int(np.floor(np.log10(prof.rho_lo)))
    k_hi = int(np.ceil(np.log10(prof.rho_hi)))
    cum = 0.0
    converged = False
    for k in range(k_lo, k_hi):
        lo = max(10.0 ** k, prof.rho_lo)
        hi = min(10.0 ** (k + 1), prof.rho_hi)
        if hi <= lo:
            continue
        rho, w_rho = log_rule(lo, hi, 4, 8)
        if other is None:
            beta = np.zeros_like(rho)
        else:
            beta = np.where(rho > 0.5 * d,
                            np.arccos(np.clip(0.5 * d / rho, -1.0, 1.0)), 0.0)
        span = 2.0 * np.pi - 2.0 * beta
        theta = axis + beta[:, None] + span[:, None] * t_ref[None, :]
        w_ang = span[:, None] * w_ref[None, :]
        px = center[0] + rho[:, None] * np.cos(theta)
        py = center[1] + rho[:, None] * np.sin(theta)
        gap = np.maximum(lower_band(model, px, py) - kappa, 0.0)
        # near the band minimum the subtraction cancels to rounding noise;
        # a spurious positive residue there gets multiplied by the enormous
        # fhat peak, so clamp values below the noise floor to exact zero
        noise = 64.0 * np.finfo(float).eps * (px * px + py * py + abs(kappa) + 1.0)
        gap[gap < noise] = 0.0
        f_c = prof(rho)[:, None]
        if other is None:
            f_o = f_c
        else:
            f_o = prof(np.hypot(px - other[0], py - other[1]))
        # group so extremes cancel before they overflow: gap grows like
        # rho^2 while fhat decays like rho^-(2+a)
        dec = float(np.sum((w_rho[:, None] * w_ang * rho[:, None])
                           * ((gap * f_c) * f_o)))
        cum += dec
        if hi >= rho_guard and cum != 0.0 and abs(dec) < 1e-6 * abs(cum):
            converged = True
            break
    if not converged:
        raise ResolutionError(
            "kinetic quadrature annuli did not fall below 1e-6 relative "
            "within the tabulated radial range")
    return cum


# ---------------------------------------------------------------------------
# potential matrices


def _measure_nodes(nu, max_abs_p):
    """Flattened (x, y, signed weight) quadrature nodes of a measure."""
    if isinstance(nu, Sum):
        parts = [_measure_nodes(p, max_abs_p) for p in nu.parts]
        return (np.concatenate([p[0] for p in parts]),
                np.concatenate([p[1] for p in parts]),
                np.concatenate([p[2] for p in parts]))
    return nu.quad_nodes(max_abs_p)


def _pair_scale(pts):
    n = len(pts)
    mx = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            mx = max(mx, float(np.hypot(*(pts[j] - pts[k]))))
    return mx


def potential_matrix_dropped(nu, basis: TrialBasis):
    """W_jk with the band phase dropped: int e^{-i<p_j-p_k,x>} |f_a|^2 nu(dx)."""
    pts = basis.points
    x, y, w = _measure_nodes(nu, _pair_scale(pts) + 1.0)
    density = w * _bump_sq(basis.a, np.hypot(x, y))
    phases = np.exp(-1j * (pts[:, 0][:, None] * x[None, :]
                           + pts[:, 1][:, None] * y[None, :]))
    return (phases * density) @ phases.conj().T


def potential_matrix_exact(model: CouplingSpec, nu, basis: TrialBasis):
    """W_jk = nu(Psi_j, Psi_k) with the full lower-band spinor structure.

    Psi_j(x) = e^{i<p_j,x>} (u_-(p_j) f_a(|x|) + Delta_j(x) e_1): the second
    spinor component of u_- is constant by the phase convention, so the band
    correction Delta_j lives in the first component only.
    """
    pts = basis.points
    max_p = _pair_scale(pts) + float(np.max(np.hypot(pts[:, 0], pts[:, 1]))) + 4.0
    x, y, w = _measure_nodes(nu, max_p)
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    f = np.exp(-0.5 * r ** basis.a)
    n = len(pts)
    psi1 = np.empty((n, len(x)), dtype=complex)
    psi2 = np.empty((n, len(x)), dtype=complex)
    for j in range(n):
        pj = pts[j]
        vj = complex(lower_band_vectors(model, pj[0], pj[1])[0])
        delta = _band_correction(model, pj, basis, r, theta)
        phase = np.exp(1j * (pj[0] * x + pj[1] * y))
        psi1[j] = phase * (vj * f + delta)
        psi2[j] = phase * (f / _SQRT2)
    return (psi1.conj() * w) @ psi1.T + (psi2.conj() * w) @ psi2.T


# band-correction machinery: Delta_j(x) = sum_m i^m e^{im theta} R_m(r) with
# R_m(r) = int c_m(rho) fhat(rho) J_m(rho r) rho d rho, where c_m are the
# angular Fourier coefficients of u_-(p_j + q) - u_-(p_j) about p_j.

_N_ANGLES = 256
_M_MAX = 40
_OSC_BUDGET = 1.0e4       # oscillation periods resolved: P(r) * r ~ budget
_MAX_DISTINCT_RADII = 48


class _ModeTable:
    """Spline of the angular coefficients c_m(rho) for one expansion center.

    c_m is smooth in log rho on either side of the ring rho = |p_j| where
    the band vector direction passes through the origin; the table splits
    there so the kink is never interpolated across.
    """

    def __init__(self, model, pj, prof, m_arr):
        rj = float(np.hypot(*pj))
        lo = max(prof.rho_lo, 1e-12 * (1.0 + rj))
        hi = prof.rho_hi
        sets = [np.geomspace(lo, hi, int(32 * np.log10(hi / lo)) + 2)]
        if lo < rj < hi:
            side = np.geomspace(1e-6, 0.5, 24)
            ring = rj * np.concatenate([1.0 - side, [1.0], 1.0 + side])
            sets.append(ring[(ring > lo) & (ring < hi)])
        grid = merge_edges(*sets)
        cm = _angular_modes(model, pj, grid, m_arr)
        self.lo, self.hi = grid[0], grid[-1]
        self.rj = rj if lo < rj < hi else None
        self._pieces = []
        if self.rj is None:
            self._pieces.append((grid[0], grid[-1], self._fit(grid, cm)))
        else:
            k = int(np.searchsorted(grid, rj))
            self._pieces.append((grid[0], rj, self._fit(grid[:k + 1], cm[:k + 1])))
            self._pieces.append((rj, grid[-1], self._fit(grid[k:], cm[k:])))

    @staticmethod
    def _fit(grid, cm):
        lg = np.log(grid)
        return (CubicSpline(lg, cm.real, axis=0), CubicSpline(lg, cm.imag, axis=0))

    def __call__(self, rho):
        rho = np.clip(np.asarray(rho, dtype=float), self.lo, self.hi)
        out = np.empty(rho.shape + self._pieces[0][2][0](0.0).shape, dtype=complex)
        lower = True
        for lo, hi, (sre, sim) in self._pieces:
            sel = (rho <= hi) if lower else (rho > lo)
            lg = np.log(rho[sel])
            out[sel] = sre(lg) + 1j * sim(lg)
            lower = False
        return out


def _band_correction(model, pj, basis, r_nodes, theta_nodes):
    prof = basis.profile
    m_arr = np.arange(-_M_MAX, _M_MAX + 1)
    modes = _ModeTable(model, pj, prof, m_arr)
    rounded = np.round(r_nodes, 12)
    radii = np.unique(rounded)
    if len(radii) > _MAX_DISTINCT_RADII:
        pos = radii[radii > 0.0]
        grid = np.geomspace(max(pos.min(), 1e-4 * pos.max()), pos.max(),
                            _MAX_DISTINCT_RADII)
        table = np.array([_radial_modes(modes, pj, prof, basis.a, rr, m_arr)
                          for rr in grid])                    # (G, M)
        spline_re = CubicSpline(np.log(grid), table.real, axis=0)
        spline_im = CubicSpline(np.log(grid), table.imag, axis=0)
        lg = np.log(np.clip(rounded, grid[0], grid[-1]))
        R = spline_re(lg) + 1j * spline_im(lg)                # (T, M)
        zero = rounded == 0.0
        if np.any(zero):
            R[zero] = _radial_modes(modes, pj, prof, basis.a, 0.0, m_arr)
    else:
        lookup = {rr: _radial_modes(modes, pj, prof, basis.a, rr, m_arr)
                  for rr in radii}
        R = np.array([lookup[rr] for rr in rounded])          # (T, M)
    harmonics = np.exp(1j * np.outer(theta_nodes, m_arr)) * (1j) ** m_arr
    return np.sum(harmonics * R, axis=1)


def _angular_modes(model, pj, rho, m_arr):
    """Fourier coefficients in the polar angle of u_-(p_j + q) - u_-(p_j)."""
    phi = (np.arange(_N_ANGLES) + 0.5) * (2.0 * np.pi / _N_ANGLES)
    v0 = complex(lower_band_vectors(model, pj[0], pj[1])[0])
    out = np.empty((len(rho), _N_ANGLES), dtype=complex)
    for start in range(0, len(rho), 2048):
        chunk = rho[start:start + 2048]
        qx = pj[0] + chunk[:, None] * np.cos(phi)[None, :]
        qy = pj[1] + chunk[:, None] * np.sin(phi)[None, :]
        out[start:start + 2048] = lower_band_vectors(model, qx, qy)[..., 0] - v0
    coeff = np.fft.fft(out, axis=1) / _N_ANGLES
    sel = coeff[:, m_arr % _N_ANGLES]
    # quadrature phase offset of the half-shifted angle grid
    return sel * np.exp(-1j * m_arr[None, :] * (np.pi / _N_ANGLES))


def _radial_modes(modes, pj, prof, a, rr, m_arr):
    """R_m(rr) for all m at a single radius, with oscillatory tail closure."""
    rho_lo = max(prof.rho_lo, 1e-12 * (1.0 + np.hypot(*pj)))
    rj = float(np.hypot(*pj))
    if rr > 0.0:
        p_cut = max(2.0e3, _OSC_BUDGET / rr)
    else:
        p_cut = np.inf
    oscillatory = rr > 0.0 and 4.0 / rr < p_cut and p_cut < prof.rho_hi
    if not oscillatory:
        # no oscillation within reach: integrate the full tabulated range
        p_cut = prof.rho_hi
        edge_sets = [np.geomspace(rho_lo, p_cut, 4 * int(np.ceil(
            np.log10(p_cut / rho_lo))) + 1)]
    else:
        rho_lin = max(4.0 / rr, rho_lo * 10.0)
        panels = 2 * int(np.ceil((p_cut - rho_lin) * rr / np.pi))
        if panels * 6 > 500_000:
            raise ResolutionError(
                "band-correction quadrature exceeds the node budget",
                attempted_nodes=panels * 6)
        edge_sets = [np.geomspace(rho_lo, rho_lin, 4 * int(np.ceil(
            np.log10(rho_lin / rho_lo))) + 1),
            np.linspace(rho_lin, p_cut, panels + 1)]
    if rj > 0.0:
        # the angular coefficients c_m have a radial kink on the ring
        # rho = |p_j| (band vector singular at the origin); cluster edges
        side = np.geomspace(1e-6, 0.5, 24)
        ring = rj * np.concatenate([1.0 - side, [1.0], 1.0 + side])
        edge_sets.append(ring[(ring > rho_lo) & (ring < p_cut)])
    edges = merge_edges(*edge_sets)
    rho, wq = panel_rule(edges, 6)
    # two weightless sample points pin g and g' at the cutoff
    extras = np.array([p_cut * (1.0 - 1e-4), p_cut])
    rho_all = np.concatenate([rho, extras])
    cm = modes(rho_all)                                       # (Q+2, M)
    g = cm * (prof(rho_all) * rho_all)[:, None]
    vals = (wq[:, None] * g[:-2] * jv(m_arr[None, :], rho_all[:-2, None] * rr)).sum(axis=0)
    if oscillatory:
        vals = vals + _oscillatory_tail(g[-2:], extras, rr, m_arr)
    else:
        # power-law completion beyond the table, valid while J_m ~ const
        slope = 2.0 + a
        vals = vals + g[-1] * p_cut / slope * jv(m_arr, p_cut * rr)
    return vals


def _oscillatory_tail(g_pair, rho_pair, rr, m_arr):
    """Tail of int g J_m(rho r) d rho beyond the cutoff, by parts twice."""
    p = rho_pair[1]
    amp = np.sqrt(2.0 / (np.pi * p * rr))
    big_g = g_pair[1] * amp
    d_rho = rho_pair[1] - rho_pair[0]
    big_g_prime = (g_pair[1] * amp - g_pair[0] * np.sqrt(2.0 / (np.pi * rho_pair[0] * rr))) / d_rho
    omega = p * rr - 0.5 * np.pi * m_arr - 0.25 * np.pi
    mu = 4.0 * m_arr.astype(float) ** 2
    return (-big_g * np.sin(omega) / rr
            - big_g_prime * np.cos(omega) / rr ** 2
            - big_g * (mu - 1.0) / (8.0 * p * rr) * np.cos(omega) / rr)


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class RayleighMatrices:
    T: np.ndarray
    W_exact: np.ndarray
    W_dropped: np.ndarray
    Q: np.ndarray


def rayleigh_matrices(model, thr, nu, basis: TrialBasis) -> RayleighMatrices:
    T = kinetic_matrix(model, thr, basis)
    w_exact = potential_matrix_exact(model, nu, basis)
    w_dropped = potential_matrix_dropped(nu, basis)
    return RayleighMatrices(T=T, W_exact=w_exact, W_dropped=w_dropped,
                            Q=T + w_exact)


@dataclass(frozen=True)
class ScheduleStep:
    a: float
    lambda_max_Q: float
    negative_definite: bool
    kinetic_diagonal: tuple


@dataclass(frozen=True)
class CertificateResult:
    N: int
    a_star: float | None
    lambda_max_Q: float
    prechecked_fourier_matrix: DefinitenessReport
    certified: bool
    certified_count: int
    points: np.ndarray
    potential_form: str
    diagnostics: tuple


def certify(model: CouplingSpec, thr: ThresholdData, nu, N, a_schedule,
            point_strategy="equispaced", potential_form="exact",
            points=None) -> CertificateResult:
    schedule = [float(a) for a in a_schedule]
    problems = []
    if not schedule:
        problems.append("a_schedule must not be empty")
    if any(not (0.0 < a <= 2.0) for a in schedule):
        problems.append("a_schedule values must lie in (0, 2]")
    if any(schedule[i + 1] >= schedule[i] for i in range(len(schedule) - 1)):
        problems.append("a_schedule must be strictly decreasing")
    if potential_form not in ("exact", "dropped"):
        problems.append("potential_form must be 'exact' or 'dropped'")
    if problems:
        raise ConfigError(problems)
    if points is None:
        pts = select_points(thr.minset, N, point_strategy)
    else:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
    precheck = definiteness(fourier_matrix(nu, pts), TOL_DEF)

    steps = []
    best_q, best_lam = None, np.inf
    a_star, certified = None, False
    for a in schedule:
        basis = trial_basis(model, thr, pts, a)
        T = kinetic_matrix(model, thr, basis)
        if potential_form == "exact":
            W = potential_matrix_exact(model, nu, basis)
        else:
            W = potential_matrix_dropped(nu, basis)
        Q = T + W
        rep = definiteness(Q, TOL_DEF)
        steps.append(ScheduleStep(a=a, lambda_max_Q=rep.lambda_max,
                                  negative_definite=rep.negative_definite,
                                  kinetic_diagonal=tuple(np.diag(T))))
        if rep.lambda_max < best_lam:
            best_lam, best_q = rep.lambda_max, Q
        if rep.negative_definite:
            a_star, certified = a, True
            break

    if certified:
        count = len(pts)
    else:
        count = 0
        for nsub in range(len(pts), 0, -1):
            if definiteness(best_q[:nsub, :nsub], TOL_DEF).negative_definite:
                count = nsub
                break
    return CertificateResult(
        N=len(pts), a_star=a_star, lambda_max_Q=float(best_lam),
        prechecked_fourier_matrix=precheck, certified=certified,
        certified_count=count, points=pts, potential_form=potential_form,
        diagnostics=tuple(steps))
