"""Toric Futaki obstruction and the soliton vector on the polytope Sigma.

With h = ker(gamma) spanned by the columns of an integer basis B, each normal
splits as lambda_i = B lambda'_i + xi/(m+1), and

    Sigma = {v in h* : <lambda'_i, v> + 1/(m+1) >= 0}.

The Futaki character is read off two ways: the slice gradient B^T grad V(xi)
and the barycenter of Sigma.  They differ by a negative factor, so they
vanish together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._exact import integer_kernel_basis, solve, to_fraction
from .cone import ConeModel, ReebVector, reeb_feasible
from .errors import InconsistentInputs, MaxIterations
from .polytope import Polytope, exp_moments, exp_moments_scaled, triangulate, vertex_enumeration
from .volume import VolumeModel, grad_vol

ARMIJO = 1e-4


@dataclass(frozen=True)
class SigmaModel:
    cone: ConeModel
    xi: ReebVector
    basis: np.ndarray  # n x m integer entries
    lambda_primed: np.ndarray  # d x m
    offset: Fraction
    sigma: Polytope

    @property
    def m(self) -> int:
        return self.cone.m


@dataclass
class FutakiReport:
    projected_grad: np.ndarray
    norm: float
    sigma_barycenter: np.ndarray
    barycenter_norm: float
    verdict: str  # "Obstructed" | "UnobstructedAtTolerance"
    tol: float
    fitted_constant: float | None = None  # projected_grad ~ const * barycenter


@dataclass
class SolitonResult:
    c: np.ndarray
    residual: float
    iterations: int
    c_ambient: np.ndarray
    residual_history: list[float] = field(default_factory=list)


def build_sigma(cone: ConeModel, xi, basis: Sequence[Sequence[int]] | None = None) -> SigmaModel:
    """Sigma for a feasible Reeb vector.

    ``basis`` overrides the default Hermite-normalized kernel basis of gamma
    (any integer basis of that lattice gives an equivalent model).
    """
    if not isinstance(xi, ReebVector) or not xi.feasible:
        xi = reeb_feasible(cone, xi.xi if isinstance(xi, ReebVector) else xi)
    m1 = cone.m + 1
    if basis is None:
        B_int = integer_kernel_basis(cone.gamma_integral)
    else:
        B_int = [[int(x) for x in row] for row in basis]
        g = cone.gamma_integral
        if len(B_int) != cone.n or any(len(r) != cone.m for r in B_int):
            raise InconsistentInputs("basis must be n x m")
        if any(sum(g[i] * B_int[i][j] for i in range(cone.n)) for j in range(cone.m)):
            raise InconsistentInputs("basis columns must lie in ker gamma")
    B = np.array(B_int, dtype=float)
    offset = Fraction(1, m1)
    if xi.exact:
        # normal equations B^T B l' = B^T (lambda - xi/(m+1)), solved exactly
        btb = [[sum(B_int[k][i] * B_int[k][j] for k in range(cone.n)) for j in range(cone.m)] for i in range(cone.m)]
        lp = []
        for lam in cone.normals:
            rhs_vec = [Fraction(lam[k]) - to_fraction(xi.xi[k]) * offset for k in range(cone.n)]
            rhs = [sum(B_int[k][i] * rhs_vec[k] for k in range(cone.n)) for i in range(cone.m)]
            lp.append(tuple(solve(btb, rhs)))
        facets = [(a, offset) for a in lp]
        lam_p = np.array([[float(x) for x in a] for a in lp])
    else:
        target = cone.normals_array - xi.array[None, :] / m1
        lam_p = np.linalg.lstsq(B, target.T, rcond=None)[0].T
        facets = [(tuple(float(x) for x in a), float(offset)) for a in lam_p]
    sigma = triangulate(vertex_enumeration(facets, cone.m))
    return SigmaModel(cone=cone, xi=xi, basis=B, lambda_primed=lam_p, offset=offset, sigma=sigma)


def sigma_barycenter(sigma: SigmaModel) -> np.ndarray:
    mom = exp_moments(sigma.sigma, np.zeros(sigma.m))
    return mom.i1 / mom.i0


def futaki_report(volmodel: VolumeModel, sigma: SigmaModel, xi=None, tol: float = 1e-7) -> FutakiReport:
    if volmodel.cone is not sigma.cone and volmodel.cone != sigma.cone:
        raise InconsistentInputs("volume model and Sigma come from different cones")
    if xi is None:
        xi = sigma.xi
    x = xi.array if isinstance(xi, ReebVector) else np.asarray(xi, dtype=float)
    if not np.allclose(x, sigma.xi.array, rtol=0, atol=1e-14):
        raise InconsistentInputs("Sigma was built for a different Reeb vector")
    pg = sigma.basis.T @ grad_vol(volmodel, x)
    bary = sigma_barycenter(sigma)
    norm, bnorm = float(np.linalg.norm(pg)), float(np.linalg.norm(bary))
    verdict = "UnobstructedAtTolerance" if norm <= tol and bnorm <= tol else "Obstructed"
    fitted = float(pg @ bary / (bary @ bary)) if bnorm > tol else None
    return FutakiReport(pg, norm, bary, bnorm, verdict, tol, fitted)


def soliton_vector(sigma: SigmaModel, tol: float = 1e-10, max_iter: int = 100) -> SolitonResult:
    """Root c of int_Sigma v exp(<c, v>) dv = 0.

    Damped Newton on the strictly convex L(c) = log int_Sigma exp(<c, v>) dv:
    its gradient is the weighted barycenter, its Hessian the weighted
    covariance.
    """
    p = sigma.sigma
    c = np.zeros(sigma.m)

    def state(cv):
        mom, shift = exp_moments_scaled(p, cv)
        return mom, shift + math.log(mom.i0)

    mom, L = state(c)
    history = []
    for it in range(max_iter + 1):
        mean = mom.mean
        resid = float(np.linalg.norm(mean))
        history.append(resid)
        if resid <= tol:
            return SolitonResult(c, resid, it, sigma.basis @ c, history)
        if it == max_iter:
            break
        step = -np.linalg.solve(mom.covariance, mean)
        slope = float(mean @ step)
        t = 1.0
        for _ in range(60):
            ct = c + t * step
            mt, Lt = state(ct)
            if math.isfinite(Lt) and Lt <= L + ARMIJO * t * slope:
                break
            if math.isfinite(Lt) and Lt <= L + 1e-15 * max(1.0, abs(L)) and np.linalg.norm(mt.mean) < resid:
                break
            t *= 0.5
        else:
            break
        c, mom, L = ct, mt, Lt
    res = SolitonResult(c, history[-1], len(history) - 1, sigma.basis @ c, history)
    raise MaxIterations(f"soliton Newton stalled at residual {history[-1]:.3e}", res)
