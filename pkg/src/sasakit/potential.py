"""Canonical symplectic potential on C(mu), its Legendre transform, and u0.

    G(y) = 1/2 sum_i l_i log l_i + 1/2 l_xi log l_xi - 1/2 l_inf log l_inf

with l_i = <lambda_i, y>, l_xi = <xi, y>, l_inf = <sum_i lambda_i, y>.  The
orbit potential on h = ker(gamma) is u0(x) = 1/2 log l_xi(y) where
grad G(y) = B x.

For |x| of order 10 the solution y sits exponentially close to a ray of the
cone, so slacks l_i / l_xi drop far below binary64 resolution.  The Legendre
solve therefore runs in mpmath with working precision raised to match the
smallest slack; results are rounded to floats only at the end.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import mpmath
import numpy as np

from .cone import ConeModel, ReebVector, reeb_feasible
from .errors import InconsistentInputs, NoConvergence
from .futaki import SigmaModel

BASE_DPS = 30
MAX_DPS = 400
MAX_NEWTON = 200
FD_STEP = 1e-4  # relative step for the finite-difference Hessian
SKIP_LIMIT = 0.01


@dataclass(frozen=True)
class PotentialModel:
    cone: ConeModel
    xi: ReebVector

    @cached_property
    def l_inf(self) -> np.ndarray:
        return np.asarray(self.cone.l_infty, dtype=float)

    def slacks(self, y) -> tuple[np.ndarray, float, float]:
        y = np.asarray(y, dtype=float)
        return self.cone.normals_array @ y, float(self.xi.array @ y), float(self.l_inf @ y)

    def G(self, y) -> float:
        li, lx, lf = self.slacks(y)
        _check_interior(li, lx)
        return 0.5 * (math.fsum(li * np.log(li)) + lx * math.log(lx) - lf * math.log(lf))

    def gradG(self, y) -> np.ndarray:
        li, lx, lf = self.slacks(y)
        _check_interior(li, lx)
        lam = self.cone.normals_array
        return 0.5 * (lam.T @ np.log(li) + self.xi.array * (1.0 + math.log(lx)) - self.l_inf * math.log(lf))

    def hessG(self, y) -> np.ndarray:
        li, lx, lf = self.slacks(y)
        _check_interior(li, lx)
        lam = self.cone.normals_array
        xi = self.xi.array
        h = (lam.T / li) @ lam + np.outer(xi, xi) / lx - np.outer(self.l_inf, self.l_inf) / lf
        return 0.5 * h

    @cached_property
    def _mp_data(self):
        # exact rationals -> mpf at whatever precision is active when used
        return (
            [tuple(int(x) for x in lam) for lam in self.cone.normals],
            tuple(_as_rational(x) for x in self.xi.xi),
            tuple(int(x) for x in self.cone.l_infty),
        )


def _as_rational(x):
    from fractions import Fraction

    return x if isinstance(x, (int, Fraction)) else Fraction(float(x))


def _check_interior(li, lx):
    if np.any(li <= 0) or lx <= 0:
        raise ValueError("y is not in the interior of the moment cone")


def build_potential(cone: ConeModel, xi) -> PotentialModel:
    if not isinstance(xi, ReebVector) or not xi.feasible:
        xi = reeb_feasible(cone, xi.xi if isinstance(xi, ReebVector) else xi)
    return PotentialModel(cone, xi)


# --- high precision core --------------------------------------------------


def _mpf(q):
    return mpmath.mpf(q.numerator) / q.denominator if hasattr(q, "denominator") else mpmath.mpf(q)


class _MP:
    """mpf copies of the data at the current working precision."""

    def __init__(self, model: PotentialModel):
        lam, xi, linf = model._mp_data
        self.lam = [[mpmath.mpf(x) for x in row] for row in lam]
        self.xi = [_mpf(x) for x in xi]
        self.linf = [mpmath.mpf(x) for x in linf]
        self.n = len(self.xi)

    @staticmethod
    def dot(a, b):
        return mpmath.fsum(x * y for x, y in zip(a, b))

    def slacks(self, y):
        return [self.dot(r, y) for r in self.lam], self.dot(self.xi, y), self.dot(self.linf, y)

    def phi(self, y, xt, sl):
        li, lx, lf = sl
        g = mpmath.fsum(l * mpmath.log(l) for l in li) + lx * mpmath.log(lx) - lf * mpmath.log(lf)
        return g / 2 - self.dot(xt, y)

    def grad(self, sl):
        li, lx, lf = sl
        logs = [mpmath.log(l) for l in li]
        llx, llf = mpmath.log(lx), mpmath.log(lf)
        return [
            (mpmath.fsum(r[k] * lg for r, lg in zip(self.lam, logs)) + self.xi[k] * (1 + llx) - self.linf[k] * llf) / 2
            for k in range(self.n)
        ]

    def hess(self, sl):
        li, lx, lf = sl
        n = self.n
        h = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(i, n):
                v = mpmath.fsum(r[i] * r[j] / l for r, l in zip(self.lam, li))
                v += self.xi[i] * self.xi[j] / lx - self.linf[i] * self.linf[j] / lf
                h[i, j] = h[j, i] = v / 2
        return h


def _start(mp: _MP, model: PotentialModel):
    """Sum of the rays, scaled to l_xi = 1."""
    s = [mpmath.mpf(sum(r[k] for r in model.cone.rays)) for k in range(mp.n)]
    lx = mp.dot(mp.xi, s)
    return [x / lx for x in s]


class _Escalate(Exception):
    def __init__(self, y, sl):
        self.y, self.sl = y, sl


def _newton(mp: _MP, xt, y, tol):
    """Damped Newton for grad G(y) = xt; returns (y, residual, slacks).

    Raises _Escalate when the iterate gets too close to the boundary for
    the working precision.
    """
    floor = mpmath.mpf(10) ** (-(mpmath.mp.dps - BASE_DPS) / 2 - 5)
    sl = mp.slacks(y)
    if min(sl[0]) <= 0 or sl[1] <= 0:
        raise NoConvergence("starting point outside the moment cone")
    # exact minimization along the ray through y: G(ty) = t G(y) + t log(t) l_xi(y) / 2
    g_y = mp.phi(y, [0] * mp.n, sl)
    log_t = 2 * (mp.dot(xt, y) - g_y) / sl[1] - 1
    y = [mpmath.exp(log_t) * v for v in y]
    sl = mp.slacks(y)
    phi = mp.phi(y, xt, sl)
    for _ in range(MAX_NEWTON):
        g = mp.grad(sl)
        r = [a - b for a, b in zip(g, xt)]
        res = max(abs(x) for x in r)
        # log-slacks are only known to about eps / (relative slack)
        if res <= tol / _min_rel_slack(sl):
            return y, res, sl
        dy = mpmath.lu_solve(mp.hess(sl), mpmath.matrix(r))
        dy = [-dy[k] for k in range(mp.n)]
        slope = mp.dot(r, dy)
        t = mpmath.mpf(1)
        for _ in range(200):
            yt = [a + t * b for a, b in zip(y, dy)]
            st = mp.slacks(yt)
            if min(st[0]) > 0 and st[1] > 0:
                pt = mp.phi(yt, xt, st)
                if pt <= phi + mpmath.mpf("1e-4") * t * slope:
                    break
                # at the rounding floor compare gradients instead
                if pt <= phi + abs(phi) * mpmath.eps * 16:
                    gt = mp.grad(st)
                    if max(abs(a - b) for a, b in zip(gt, xt)) < res:
                        break
            t /= 2
        else:
            raise NoConvergence("line search failed in Legendre solve", float(res))
        y, sl, phi = yt, st, pt
        if _min_rel_slack(sl) < floor:
            raise _Escalate(y, sl)
    raise NoConvergence("Legendre solve did not converge", float(res))


def _min_rel_slack(sl):
    li, lx, _ = sl
    return min(li) / lx


def _needed_dps(sl) -> int:
    # enough digits for the smallest slack and for differencing Du0 across it
    s = -float(mpmath.log10(_min_rel_slack(sl)))
    return int(max(BASE_DPS, math.ceil(2 * max(s, 0.0)) + BASE_DPS))


def _solve_mp(model: PotentialModel, xt_float, y0=None, dps0: int = BASE_DPS):
    """Legendre solve with adaptive precision; returns (y as mpf list, dps).

    A warm start ``y0`` should come with the precision ``dps0`` it was found at.
    """
    if y0 is None and np.max(np.abs(xt_float)) > 1.0:
        # cold start far out: walk in from the origin in unit steps
        steps = int(math.ceil(np.max(np.abs(xt_float))))
        for k in range(1, steps):
            y0, dps0 = _solve_mp(model, np.asarray(xt_float) * (k / steps), y0, dps0)
    dps = max(BASE_DPS, dps0)
    y = y0
    while True:
        with mpmath.workdps(dps):
            mp = _MP(model)
            xt = [mpmath.mpf(float(v)) for v in xt_float]
            start = [mpmath.mpf(v) for v in y] if y is not None else _start(mp, model)
            scale = max(mpmath.mpf(1), max(abs(v) for v in xt))
            tol = scale * mpmath.mpf(10) ** (-(dps - 8))
            try:
                try:
                    y, res, sl = _newton(mp, xt, start, tol)
                except NoConvergence:
                    if y0 is None:
                        raise
                    y, res, sl = _newton(mp, xt, _start(mp, model), tol)
            except _Escalate as esc:
                y, res = esc.y, None
                need = max(_needed_dps(esc.sl) + 10, dps + 10)
            else:
                need = _needed_dps(sl)
            if need <= dps:
                return [+v for v in y], dps
        if need > MAX_DPS:
            raise NoConvergence(f"required precision {need} digits exceeds {MAX_DPS}", None if res is None else float(res))
        dps = need


def legendre_point(model: PotentialModel, xtilde, y0=None) -> np.ndarray:
    """The interior y with grad G(y) = xtilde."""
    xt = np.asarray(xtilde, dtype=float)
    if xt.shape != (model.cone.n,):
        raise InconsistentInputs("xtilde has the wrong dimension")
    y, _ = _solve_mp(model, xt, y0)
    return np.array([float(v) for v in y])


def _check_pair(model: PotentialModel, sigma: SigmaModel):
    if sigma.cone != model.cone or not np.array_equal(sigma.xi.array, model.xi.array):
        raise InconsistentInputs("potential model and Sigma disagree on cone or Reeb vector")


@dataclass
class OrbitPoint:
    """u0, Du0 and optionally Hess u0 (with its log-determinant) at one point of h."""

    x: np.ndarray
    u0: float
    du0: np.ndarray
    hess: np.ndarray | None = None
    logdet: float | None = None
    y: list | None = None  # mpf solution, for warm starts
    dps: int = BASE_DPS


def orbit_point(
    model: PotentialModel, sigma: SigmaModel, x, hessian: bool = False, y0=None, dps0: int = BASE_DPS
) -> OrbitPoint:
    """u0 = log(l_xi)/2 and Du0 = B^T y / l_xi at y = legendre_point(B x).

    The Hessian B^T (H^-1 / l_xi - 2 y y^T / l_xi^2) B, H = Hess G(y), is
    formed and its determinant taken in high precision: near the boundary
    of Sigma its small eigenvalues are far below float resolution of the
    large ones.
    """
    x = np.asarray(x, dtype=float)
    B = sigma.basis
    y, dps = _solve_mp(model, B @ x, y0, dps0)
    with mpmath.workdps(dps):
        mp = _MP(model)
        Bm = mpmath.matrix([[mpmath.mpf(float(v)) for v in row] for row in B])
        ym = mpmath.matrix(y)
        lx = mp.dot(mp.xi, y)
        u = mpmath.log(lx) / 2
        v = (Bm.T * ym) / lx
        hess = logdet = None
        if hessian:
            inner = mpmath.inverse(mp.hess(mp.slacks(y))) / lx - 2 * (ym * ym.T) / lx**2
            hm = Bm.T * inner * Bm
            det = mpmath.det(hm)
            logdet = float(mpmath.log(det)) if det > 0 else float("nan")
            hess = np.array([[float(hm[i, j]) for j in range(hm.cols)] for i in range(hm.rows)])
    return OrbitPoint(x, float(u), np.array([float(t) for t in v]), hess, logdet, y, dps)


def u0(model: PotentialModel, sigma: SigmaModel, x) -> float:
    _check_pair(model, sigma)
    return orbit_point(model, sigma, x).u0


def du0(model: PotentialModel, sigma: SigmaModel, x) -> np.ndarray:
    _check_pair(model, sigma)
    return orbit_point(model, sigma, x).du0


def hess_u0(model: PotentialModel, sigma: SigmaModel, x) -> np.ndarray:
    _check_pair(model, sigma)
    return orbit_point(model, sigma, x, hessian=True).hess


def hess_u0_fd(model: PotentialModel, sigma: SigmaModel, x, step: float = FD_STEP) -> np.ndarray:
    """Central differences of Du0 with step ``step * max(1, |x|)``."""
    _check_pair(model, sigma)
    x = np.asarray(x, dtype=float)
    h = step * max(1.0, float(np.linalg.norm(x)))
    centre = orbit_point(model, sigma, x)
    cols = []
    for a in range(len(x)):
        e = np.zeros(len(x))
        e[a] = h
        vp = orbit_point(model, sigma, x + e, y0=centre.y, dps0=centre.dps).du0
        vm = orbit_point(model, sigma, x - e, y0=centre.y, dps0=centre.dps).du0
        cols.append((vp - vm) / (2 * h))
    hm = np.array(cols).T
    return 0.5 * (hm + hm.T)


def vbar(sigma: SigmaModel, x) -> float:
    """max over vertices p of Sigma of <p, x>."""
    return float(np.max(sigma.sigma.points @ np.asarray(x, dtype=float)))


def G0(sigma: SigmaModel, v) -> float:
    """Closed form 1/2 (sum l'_i log l'_i - l'_inf log l'_inf + 1) on Sigma."""
    lp = sigma.lambda_primed @ np.asarray(v, dtype=float) + float(sigma.offset)
    linf = float(np.sum(lp))
    return 0.5 * (math.fsum(lp * np.log(lp)) - linf * math.log(linf) + 1.0)


# --- grid sweep -----------------------------------------------------------


@dataclass
class PotentialCheckReport:
    radius: float
    samples: int
    grid: np.ndarray
    u0_values: np.ndarray
    vbar_values: np.ndarray
    ma_residuals: np.ndarray
    du0_values: np.ndarray
    asym_sup: float
    ma_sup: float
    asym_ratio: float
    ma_ratio: float
    max_sigma_violation: float
    skipped: int
    csv_rows: list[list[float]] = field(default_factory=list)

    @property
    def skipped_fraction(self) -> float:
        return self.skipped / len(self.grid)

    @property
    def passed(self) -> bool:
        return (
            self.skipped_fraction <= SKIP_LIMIT
            and math.isfinite(self.asym_sup)
            and math.isfinite(self.ma_sup)
            and self.asym_ratio <= 2.0
            and self.ma_ratio <= 2.0
        )


def grid_points(m: int, radius: float, samples: int) -> np.ndarray:
    axis = np.linspace(-radius, radius, samples)
    return np.array(list(itertools.product(axis, repeat=m)))


def _line_task(args):
    """Solve one grid line (last coordinate varies), warm-starting outward from its middle."""
    model, sigma, xs = args
    k = len(xs)
    order = sorted(range(k), key=lambda j: (abs(j - (k - 1) / 2), j))
    out = [None] * k
    prev = {}
    for j in order:
        nb = j + 1 if j < (k - 1) / 2 else j - 1
        y0, d0 = prev.get(nb, (None, BASE_DPS))
        try:
            pt = orbit_point(model, sigma, xs[j], hessian=True, y0=y0, dps0=d0)
        except NoConvergence:
            continue
        prev[j] = (pt.y, pt.dps)
        out[j] = (pt.u0, pt.du0, pt.logdet)
    return out


def potential_checks(
    model: PotentialModel, sigma: SigmaModel, radius: float = 10.0, samples: int = 21, threads: int = 1
) -> PotentialCheckReport:
    """Sweep an N^m grid over [-R, R]^m.

    Work is split into fixed grid lines, each processed serially, so the
    output does not depend on ``threads``.
    """
    _check_pair(model, sigma)
    if radius <= 0 or samples < 2:
        raise ValueError("need radius > 0 and samples >= 2")
    m = sigma.m
    grid = grid_points(m, radius, samples)
    lines = [(model, sigma, grid[i : i + samples]) for i in range(0, len(grid), samples)]
    workers = threads if threads > 0 else (os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_line_task, lines))
    else:
        results = [_line_task(t) for t in lines]
    flat = [r for line in results for r in line]

    nan = float("nan")
    u0s = np.full(len(grid), nan)
    vbs = np.array([vbar(sigma, x) for x in grid])
    mas = np.full(len(grid), nan)
    dus = np.full((len(grid), m), nan)
    a, b = sigma.sigma.facet_arrays
    viol = 0.0
    for i, r in enumerate(flat):
        if r is None:
            continue
        u, d, logdet = r
        u0s[i], dus[i] = u, d
        mas[i] = logdet + (2 * m + 2) * u
        viol = max(viol, float(np.max(-(a @ d + b))))
    diff = np.abs(u0s - vbs)
    ma_abs = np.abs(mas)
    skipped = int(np.sum(np.isnan(u0s) | np.isnan(mas)))
    ok = ~(np.isnan(u0s) | np.isnan(mas))
    norm_inf = np.max(np.abs(grid), axis=1)
    inner = ok & (norm_inf <= radius / 2)
    outer = ok & (norm_inf >= radius / 2)

    def sup(v, mask):
        return float(np.max(v[mask])) if np.any(mask) else nan

    def ratio(v):
        lo = sup(v, inner)
        return sup(v, outer) / lo if lo > 0 else math.inf

    rows = [list(x) + [u0s[i], vbs[i], diff[i], mas[i]] for i, x in enumerate(grid)]
    return PotentialCheckReport(
        radius=float(radius),
        samples=samples,
        grid=grid,
        u0_values=u0s,
        vbar_values=vbs,
        ma_residuals=mas,
        du0_values=dus,
        asym_sup=sup(diff, ok),
        ma_sup=sup(ma_abs, ok),
        asym_ratio=ratio(diff),
        ma_ratio=ratio(ma_abs),
        max_sigma_violation=viol,
        skipped=skipped,
        csv_rows=rows,
    )


def csv_text(report: PotentialCheckReport) -> str:
    m = report.grid.shape[1]
    head = ",".join([f"x{i + 1}" for i in range(m)] + ["u0", "vbar", "diff", "ma_residual"])
    lines = [head] + [",".join(_fmt17(v) for v in row) for row in report.csv_rows]
    return "\n".join(lines) + "\n"


def _fmt17(v: float) -> str:
    return "nan" if math.isnan(v) else format(float(v), ".17g")
