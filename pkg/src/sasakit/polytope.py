"""Bounded polytopes: vertex enumeration, triangulation, volume, exponential moments.

Combinatorics run exactly.  A polytope given by binary64 facets is enumerated
on the exact rational values of those floats ("float mode"); only the reported
numbers are rounded back.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _dd
from ._exact import det, rank, to_fraction
from .errors import LowerDimensional, Unbounded
from .expint import TAYLOR_SPREAD, simplex_exp_moments


@dataclass(frozen=True)
class Polytope:
    """{v : <a_i, v> + b_i >= 0} with its vertices (lexicographic order)."""

    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    facets: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    incidence: tuple[frozenset, ...]  # vertex indices on each facet
    exact: bool = True
    triangulation: tuple[tuple[int, ...], ...] | None = None

    @cached_property
    def points(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.vertices])

    @cached_property
    def facet_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.array([[float(x) for x in f[0]] for f in self.facets])
        b = np.array([float(f[1]) for f in self.facets])
        return a, b

    def contains(self, v, slack: float = 0.0) -> bool:
        a, b = self.facet_arrays
        return bool(np.all(a @ np.asarray(v, dtype=float) + b >= -slack))

    @cached_property
    def simplex_volumes(self) -> tuple:
        """Exact volume of each simplex in the triangulation."""
        if self.triangulation is None:
            raise ValueError("polytope is not triangulated")
        fact = math.factorial(self.dim)
        out = []
        for simplex in self.triangulation:
            v0 = self.vertices[simplex[0]]
            rows = [[x - y for x, y in zip(self.vertices[i], v0)] for i in simplex[1:]]
            out.append(abs(det(rows)) / fact)
        return tuple(out)

    @cached_property
    def simplex_arrays(self) -> list[tuple[np.ndarray, float]]:
        pts = self.points
        return [(pts[list(s)], float(v)) for s, v in zip(self.triangulation, self.simplex_volumes)]


@dataclass(frozen=True)
class ExpMoments:
    i0: float
    i1: np.ndarray
    i2: np.ndarray

    @property
    def mean(self) -> np.ndarray:
        return self.i1 / self.i0

    @property
    def covariance(self) -> np.ndarray:
        mu = self.mean
        return self.i2 / self.i0 - np.outer(mu, mu)


def vertex_enumeration(facets: Sequence[tuple[Sequence, float]], dim: int) -> Polytope:
    """Vertices of a bounded full-dimensional H-polytope, by double description.

    Each facet is a pair ``(a, b)`` meaning ``<a, v> + b >= 0``.
    """
    exact = all(
        not isinstance(x, float) and not isinstance(x, np.floating)
        for a, b in facets
        for x in list(a) + [b]
    )
    fr = [(tuple(to_fraction(float(x) if isinstance(x, np.floating) else x) for x in a),
           to_fraction(float(b) if isinstance(b, np.floating) else b)) for a, b in facets]
    if any(len(a) != dim for a, _ in fr):
        raise ValueError("facet normal length does not match dim")
    # homogenize: (t, v) with b t + <a, v> >= 0 and t >= 0
    rows = [(b,) + a for a, b in fr] + [(Fraction(1),) + (Fraction(0),) * dim]
    if rank(rows) < dim + 1:
        raise Unbounded("inequalities leave a line free: the region is unbounded")
    rays = _dd.extreme_rays(_dd.integer_rows(rows))
    if not rays:
        raise LowerDimensional("empty region")
    if any(r[0] == 0 for r in rays):
        raise Unbounded("region has a recession direction")
    if rank(rays) < dim + 1:
        raise LowerDimensional("region is not full-dimensional")
    verts = sorted(tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays)
    incidence = tuple(
        frozenset(k for k, v in enumerate(verts) if sum(x * y for x, y in zip(a, v)) + b == 0)
        for a, b in fr
    )
    return Polytope(dim=dim, vertices=tuple(verts), facets=tuple(fr), incidence=incidence, exact=exact)


def triangulate(p: Polytope) -> Polytope:
    """Pulling triangulation; in the plane this is the fan from the least vertex."""
    if p.triangulation is not None:
        return p
    homog = [(Fraction(1),) + v for v in p.vertices]
    simplices = _dd.pulling_triangulation(homog, p.incidence, p.dim + 1)
    return dataclasses.replace(p, triangulation=tuple(simplices))


def volume(p: Polytope):
    """Sum of |det[v_1 - v_0, ..., v_m - v_0]| / m! over the triangulation.

    Exact ``Fraction`` for rational polytopes, ``float`` in float mode.
    """
    p = triangulate(p)
    total = sum(p.simplex_volumes, Fraction(0))
    return total if p.exact else float(total)


def barycenter(p: Polytope) -> tuple:
    """Exact centroid (area-weighted simplex centroids)."""
    p = triangulate(p)
    tot = sum(p.simplex_volumes, Fraction(0))
    acc = [Fraction(0)] * p.dim
    for simplex, vol in zip(p.triangulation, p.simplex_volumes):
        for i in simplex:
            acc = [a + vol * x for a, x in zip(acc, p.vertices[i])]
    c = [a / (tot * (p.dim + 1)) for a in acc]
    return tuple(c) if p.exact else tuple(float(x) for x in c)


def exp_moments_scaled(p: Polytope, c, spread: float = TAYLOR_SPREAD) -> tuple[ExpMoments, float]:
    """Moments times exp(-s) with s = max over vertices of <c, v>, and s itself.

    Keeps large ``c`` from overflowing; ratios such as the weighted mean are
    unaffected by the scaling.
    """
    c = np.asarray(c, dtype=float)
    p = triangulate(p)
    shift = float(np.max(p.points @ c))
    parts = [simplex_exp_moments(v, vol, c, shift, spread) for v, vol in p.simplex_arrays]
    m = p.dim
    i0 = math.fsum(t[0] for t in parts)
    i1 = np.array([math.fsum(t[1][a] for t in parts) for a in range(m)])
    i2 = np.array([[math.fsum(t[2][a, b] for t in parts) for b in range(m)] for a in range(m)])
    return ExpMoments(i0, i1, i2), shift


def exp_moments(p: Polytope, c, spread: float = TAYLOR_SPREAD) -> ExpMoments:
    """int v^k exp(<c, v>) dv over p for k = 0, 1, 2."""
    mom, shift = exp_moments_scaled(p, c, spread)
    f = math.exp(shift)
    return ExpMoments(mom.i0 * f, mom.i1 * f, mom.i2 * f)
