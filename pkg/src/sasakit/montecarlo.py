"""Seeded Monte-Carlo estimates by box rejection sampling (self-test oracles)."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .cone import ConeModel
from .polytope import Polytope

CHUNK = 1_000_000
DEFAULT_SEED = 20240607


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("SASAKIT_SEED")
    return int(raw) if raw not in (None, "") else default


@dataclass(frozen=True)
class MCEstimate:
    mean: np.ndarray  # estimated integrals
    stderr: np.ndarray
    samples: int
    seed: int


def _box_integrals(lo, hi, inside, weights, samples: int, seed: int) -> MCEstimate:
    """Integrals of ``weights(pts)`` (k columns) over {inside(pts)} within a box."""
    rng = np.random.default_rng(seed)
    box = float(np.prod(hi - lo))
    s1 = s2 = None
    done = 0
    while done < samples:
        k = min(CHUNK, samples - done)
        pts = lo + (hi - lo) * rng.random((k, len(lo)))
        w = weights(pts) * inside(pts)[:, None]
        a, b = w.sum(axis=0), (w * w).sum(axis=0)
        s1, s2 = (a, b) if s1 is None else (s1 + a, s2 + b)
        done += k
    mean = s1 / samples
    var = np.maximum(s2 / samples - mean**2, 0.0)
    return MCEstimate(box * mean, box * np.sqrt(var / samples), samples, seed)


def mc_volume_functional(cone: ConeModel, x, samples: int = 10**7, seed: int | None = None) -> MCEstimate:
    """V(x) = 2(m+1)(2 pi)^(m+1) Vol{y in C(mu) : 2<x,y> <= 1}, estimated."""
    seed = seed_from_env() if seed is None else seed
    x = np.asarray(x, dtype=float)
    rays = cone.rays_array
    verts = np.vstack([np.zeros(cone.n), rays / (2.0 * (rays @ x))[:, None]])
    lam = cone.normals_array
    est = _box_integrals(
        verts.min(axis=0),
        verts.max(axis=0),
        lambda p: np.all(p @ lam.T >= 0, axis=1) & (2.0 * (p @ x) <= 1.0),
        lambda p: np.ones((len(p), 1)),
        samples,
        seed,
    )
    m1 = cone.m + 1
    f = 2 * m1 * (2 * math.pi) ** m1
    return MCEstimate(f * est.mean, f * est.stderr, samples, seed)


def mc_exp_moments(p: Polytope, c, samples: int = 10**7, seed: int | None = None) -> MCEstimate:
    """Estimates of [i0, i1...] for int exp(<c,v>) (1, v) dv over ``p``."""
    seed = seed_from_env() if seed is None else seed
    c = np.asarray(c, dtype=float)
    a, b = p.facet_arrays
    pts = p.points
    return _box_integrals(
        pts.min(axis=0),
        pts.max(axis=0),
        lambda q: np.all(q @ a.T + b >= 0, axis=1),
        lambda q: np.exp(q @ c)[:, None] * np.hstack([np.ones((len(q), 1)), q]),
        samples,
        seed,
    )
