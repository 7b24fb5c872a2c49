"""The volume functional V on the interior of the dual moment cone.

Triangulating C(mu) by its rays into simplicial cones T = cone(r_1..r_n),
Delta_x = {y in C(mu) : 2<x, y> <= 1} splits into simplices with vertices
0 and r_k / (2<x, r_k>), so

    V(x) = 2(m+1)(2 pi)^(m+1) * sum_T A_T / prod_k 2<x, r_k>,
    A_T  = |det[r_1 .. r_n]| / n!.

The vertex set of Delta_x does not change with x, hence the formula (and its
derivatives below) is valid on the whole open dual cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _dd
from ._exact import det
from .cone import ConeModel, ReebVector
from .errors import NotInterior


@dataclass(frozen=True)
class VolumeModel:
    cone: ConeModel
    simplices: tuple[tuple[int, ...], ...]  # ray indices
    coefficients: tuple[Fraction, ...]  # A_T, exact

    @property
    def m(self) -> int:
        return self.cone.m

    @property
    def normalization(self) -> float:
        m1 = self.cone.m + 1
        return 2 * m1 * (2 * math.pi) ** m1

    @cached_property
    def coefficients_float(self) -> np.ndarray:
        return np.array([float(a) for a in self.coefficients])

    @cached_property
    def _ray_blocks(self) -> np.ndarray:
        rays = self.cone.rays_array
        return np.stack([rays[list(s)] for s in self.simplices])  # (T, n, n)


def build_volume_model(cone: ConeModel) -> VolumeModel:
    incidence = [frozenset(k for k, hit in enumerate(row) if hit) for row in cone.incidence]
    simplices = _dd.pulling_triangulation(cone.rays, incidence, cone.n)
    fact = math.factorial(cone.n)
    coeffs = tuple(abs(det([cone.rays[k] for k in s])) / fact for s in simplices)
    return VolumeModel(cone=cone, simplices=tuple(simplices), coefficients=coeffs)


def _xi_array(model: VolumeModel, xi) -> np.ndarray:
    x = xi.array if isinstance(xi, ReebVector) else np.asarray(xi, dtype=float)
    pairings = model.cone.rays_array @ x
    if not np.all(pairings > 0):
        k = int(np.argmin(pairings))
        raise NotInterior(k, model.cone.rays[k], float(pairings[k]))
    return x


def _terms(model: VolumeModel, x: np.ndarray):
    """Per-simplex values f_T and the pairings <x, r_k> of its rays."""
    p = model._ray_blocks @ x  # (T, n)
    f = model.normalization * model.coefficients_float / np.prod(2.0 * p, axis=1)
    return f, p


def vol(model: VolumeModel, xi) -> float:
    x = _xi_array(model, xi)
    f, _ = _terms(model, x)
    return math.fsum(f)


def grad_vol(model: VolumeModel, xi) -> np.ndarray:
    """dV/dx: each term contributes -f_T * sum_k r_k / <x, r_k>."""
    x = _xi_array(model, xi)
    f, p = _terms(model, x)
    s = np.einsum("tkn,tk->tn", model._ray_blocks, 1.0 / p)
    return -(f[:, None] * s).sum(axis=0)


def hess_vol(model: VolumeModel, xi) -> np.ndarray:
    """f_T * (s s^T + sum_k r_k r_k^T / <x, r_k>^2) summed over simplices."""
    x = _xi_array(model, xi)
    f, p = _terms(model, x)
    r = model._ray_blocks
    s = np.einsum("tkn,tk->tn", r, 1.0 / p)
    q = np.einsum("tki,tkj,tk->tij", r, r, 1.0 / p**2)
    h = np.einsum("t,tij->ij", f, np.einsum("ti,tj->tij", s, s) + q)
    return 0.5 * (h + h.T)
