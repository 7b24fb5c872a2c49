"""Volume minimization over the Reeb slice {<gamma, x> = -(m+1)} and regularity tags."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._exact import dot, integer_kernel_basis
from .cone import ConeModel, ReebVector, reeb_feasible
from .errors import MaxIterations, NotInterior
from .volume import VolumeModel, grad_vol, hess_vol, vol

ARMIJO = 1e-4
MAX_HALVINGS = 60
POLISH_STEPS = 2


@dataclass(frozen=True)
class Regularity:
    kind: str  # "RationalReeb" | "IrregularNumeric"
    certificate: tuple[Fraction, ...] | None = None
    denom_bound: int = 10**6

    @property
    def rational(self) -> bool:
        return self.kind == "RationalReeb"

    def __str__(self) -> str:
        if self.certificate is None:
            return self.kind
        return f"{self.kind}({', '.join(str(q) for q in self.certificate)})"


@dataclass
class MinimizeResult:
    x_c: np.ndarray
    value: float
    slice_grad_norm: float
    iterations: int
    regularity: Regularity | None = None
    trace: list[tuple[tuple[float, ...], float, float]] = field(default_factory=list)
    converged: bool = True


def slice_basis(cone: ConeModel) -> np.ndarray:
    """Integer basis (n x m, Hermite-normalized) of the lattice kernel of gamma."""
    return np.array(integer_kernel_basis(cone.gamma_integral), dtype=float)


def initial_point(cone: ConeModel) -> ReebVector:
    """s * sum_j lambda_j with s = -(m+1) / <gamma, sum_j lambda_j> (= (m+1)/d)."""
    b = cone.l_infty
    s = Fraction(-(cone.m + 1)) / dot(cone.gamma, b)
    return reeb_feasible(cone, [s * x for x in b])


def _cholesky_solve(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    lam = 0.0
    eye = np.eye(len(g))
    for _ in range(40):
        try:
            low = np.linalg.cholesky(h + lam * eye)
            break
        except np.linalg.LinAlgError:
            lam = max(2 * lam, 1e-12 * float(np.trace(h)) or 1e-300)
    else:
        raise np.linalg.LinAlgError("slice Hessian could not be regularized")
    y = np.linalg.solve(low, g)
    return np.linalg.solve(low.T, y)


def minimize(model: VolumeModel, x0: ReebVector | Sequence | None = None, tol: float = 1e-10, max_iter: int = 200) -> MinimizeResult:
    """Projected Newton on the affine slice through x0.

    Trial points outside the open dual cone are rejected by halving the step.
    Stops when the slice gradient norm drops below ``tol`` times its initial
    value (or reaches rounding level).
    """
    cone = model.cone
    if x0 is None:
        x0 = initial_point(cone)
    if not isinstance(x0, ReebVector):
        x0 = reeb_feasible(cone, x0)
    elif not x0.feasible:
        x0 = reeb_feasible(cone, x0.xi)
    B = slice_basis(cone)
    x = x0.array.copy()
    rays = cone.rays_array
    v = vol(model, x)
    full = grad_vol(model, x)
    g = B.T @ full
    g0 = float(np.linalg.norm(g))
    trace = [(tuple(x), v, g0)]
    eps = np.finfo(float).eps

    def done(gn: float, fullnorm: float) -> bool:
        return gn <= tol * g0 or gn <= 64 * eps * fullnorm

    it = 0
    gn = g0
    polish = 0
    while True:
        if done(gn, float(np.linalg.norm(full))):
            # a couple of extra Newton steps take x to rounding level
            if polish >= POLISH_STEPS or gn == 0.0:
                break
            polish += 1
        elif it >= max_iter:
            res = MinimizeResult(x, v, gn, it, None, trace, converged=False)
            raise MaxIterations(f"no convergence after {max_iter} iterations (slice gradient {gn:.3e})", res)
        H = B.T @ hess_vol(model, x) @ B
        dz = -_cholesky_solve(H, g)
        slope = float(g @ dz)
        dx = B @ dz
        t = 1.0
        accepted = False
        for _ in range(MAX_HALVINGS):
            xt = x + t * dx
            if np.all(rays @ xt > 0):
                vt = vol(model, xt)
                if vt <= v + ARMIJO * t * slope:
                    accepted = True
                    break
                # rounding-level plateau: accept if the gradient still shrinks
                if vt <= v + 4 * eps * abs(v):
                    gt = B.T @ grad_vol(model, xt)
                    if np.linalg.norm(gt) < gn:
                        accepted = True
                        break
            t *= 0.5
        if not accepted:
            break  # no descent possible at working precision
        full_t = grad_vol(model, xt)
        g_t = B.T @ full_t
        gn_t = float(np.linalg.norm(g_t))
        if polish and gn_t >= gn:
            break
        it += 1
        x, v, full, g, gn = xt, vt, full_t, g_t, gn_t
        trace.append((tuple(x), v, gn))
    return MinimizeResult(x, v, gn, it, None, trace, converged=True)


def _first_convergent_within(x: float, tol: float, max_q: int) -> Fraction | None:
    """Smallest-denominator continued-fraction convergent p/q with |x - p/q| <= tol."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    rest = Fraction(x)
    while True:
        a = math.floor(rest)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_q:
            return None
        cand = Fraction(p1, q1)
        if abs(float(cand) - x) <= tol or rest == a:
            return cand if abs(float(cand) - x) <= tol else None
        rest = 1 / (rest - a)


def classify_regularity(
    x_c: Sequence[float], denom_bound: int = 10**6, tol: float = 1e-9, resolution: float = 1e-12
) -> Regularity:
    """RationalReeb if every coordinate is explained by a small-denominator rational.

    Per coordinate, continued-fraction reconstruction takes the first
    convergent p/q within ``tol``.  It is accepted only if q <= ``denom_bound``
    and p/q reproduces the coordinate to ``resolution`` (relative to
    max(1, |x|)): Dirichlet's theorem gives *every* real number convergents
    within 1e-9 with q around 1e4, so closeness at ``tol`` alone certifies
    nothing.
    """
    cert = []
    for x in x_c:
        x = float(x)
        q = _first_convergent_within(x, tol, denom_bound)
        if q is None or abs(float(q) - x) > resolution * max(1.0, abs(x)):
            return Regularity("IrregularNumeric", None, denom_bound)
        cert.append(q)
    return Regularity("RationalReeb", tuple(cert), denom_bound)
