"""Toric diagrams, the moment cone C(mu) and Reeb-vector feasibility.

All cone combinatorics are exact (``int``/``Fraction``).  Floating point only
enters when a binary64 Reeb vector is tested against the cone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Sequence

import numpy as np

from . import _dd
from ._exact import dot, lcm_denominator, rank, solve, independent_subset, to_fraction
from .errors import (
    EmptyInterior,
    GammaInconsistent,
    MalformedInput,
    NonPrimitiveNormal,
    NotInterior,
    NotOnSlice,
    RankDeficient,
    RedundantNormal,
)

INT64_MIN, INT64_MAX = -(2**63), 2**63 - 1
SLICE_TOL = 1e-12


@dataclass(frozen=True)
class ToricDiagram:
    name: str
    n: int
    normals: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def d(self) -> int:
        return len(self.normals)


@dataclass(frozen=True)
class ConeModel:
    diagram: ToricDiagram
    rays: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[bool, ...], ...]  # incidence[j][k]: ray k on facet j
    gamma: tuple[Fraction, ...]
    ell: int
    l_infty: tuple[int, ...]

    @property
    def normals(self):
        return self.diagram.normals

    @property
    def n(self) -> int:
        return self.diagram.n

    @property
    def m(self) -> int:
        return self.diagram.n - 1

    @cached_property
    def normals_array(self) -> np.ndarray:
        return np.array(self.normals, dtype=float)

    @cached_property
    def rays_array(self) -> np.ndarray:
        return np.array(self.rays, dtype=float)

    @cached_property
    def gamma_array(self) -> np.ndarray:
        return np.array([float(g) for g in self.gamma])

    @cached_property
    def gamma_integral(self) -> tuple[int, ...]:
        """ell * gamma as integers."""
        return tuple(int(g * self.ell) for g in self.gamma)


@dataclass(frozen=True)
class ReebVector:
    xi: tuple  # Fractions when given exactly, floats otherwise
    on_slice: bool
    interior: bool
    slice_residual: float = 0.0
    min_pairing: float = 0.0

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self.xi)

    @property
    def array(self) -> np.ndarray:
        return np.array([float(x) for x in self.xi])

    @property
    def feasible(self) -> bool:
        return self.on_slice and self.interior


# --- parsing -------------------------------------------------------------------

def _as_int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedInput(f"{where}: expected an integer, got {x!r}")
    if not INT64_MIN <= x <= INT64_MAX:
        raise MalformedInput(f"{where}: integer {x} does not fit in signed 64 bits")
    return x


def parse_toric_diagram(text: str) -> ToricDiagram:
    """Parse and validate a JSON toric diagram document."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("top level must be a JSON object")
    allowed = {"name", "dim", "normals"}
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise MalformedInput(f"unknown field(s): {', '.join(unknown)}")
    missing = sorted(allowed - set(doc))
    if missing:
        raise MalformedInput(f"missing field(s): {', '.join(missing)}")
    name = doc["name"]
    if not isinstance(name, str):
        raise MalformedInput("name must be a string")
    n = _as_int(doc["dim"], "dim")
    normals = doc["normals"]
    if not isinstance(normals, list) or not all(isinstance(r, list) for r in normals):
        raise MalformedInput("normals must be a list of integer lists")
    rows = []
    for i, r in enumerate(normals):
        if len(r) != n:
            raise MalformedInput(f"normal at row {i + 1} has length {len(r)}, expected {n}")
        rows.append(tuple(_as_int(x, f"normals[{i}][{j}]") for j, x in enumerate(r)))
    return make_diagram(name, rows, n)


def make_diagram(name: str, normals: Sequence[Sequence[int]], n: int | None = None) -> ToricDiagram:
    """Validate normals and build a ToricDiagram (no silent normalization)."""
    rows = tuple(tuple(int(x) for x in r) for r in normals)
    if n is None:
        n = len(rows[0]) if rows else 0
    if not 2 <= n <= 4:
        raise MalformedInput(f"dim {n} unsupported (need 2 <= dim <= 4)")
    if any(len(r) != n for r in rows):
        raise MalformedInput("normals have inconsistent lengths")
    for i, r in enumerate(rows):
        g = reduce(gcd, (abs(x) for x in r), 0)
        if g != 1:
            if g == 0:
                raise MalformedInput(f"normal at row {i + 1} is zero")
            raise NonPrimitiveNormal(i, r, g)
    if len(set(rows)) != len(rows):
        raise MalformedInput("duplicate normals")
    if len(rows) < n or rank(rows) < n:
        raise RankDeficient(
            f"normals span a subspace of dimension {rank(rows) if rows else 0} < {n}; "
            "the cone contains a line"
        )
    diagram = ToricDiagram(name=name, n=n, normals=rows)
    _cone_geometry(diagram, redundancy=False)  # redundancy waits for the gamma check
    return diagram


# --- cone geometry ---------------------------------------------------------------

def _cone_geometry(diagram: ToricDiagram, redundancy: bool = True):
    n = diagram.n
    rays = _dd.extreme_rays(diagram.normals)
    if not rays or rank(rays) < n:
        raise EmptyInterior(f"cone {{y : <lambda_j, y> >= 0}} has empty interior for {diagram.name!r}")
    incidence = tuple(tuple(dot(lam, r) == 0 for r in rays) for lam in diagram.normals)
    for j, row in enumerate(incidence if redundancy else ()):
        on = [rays[k] for k, hit in enumerate(row) if hit]
        if not on or rank(on) < n - 1:
            raise RedundantNormal(f"normal at row {j + 1} {list(diagram.normals[j])} is not a facet normal")
    return tuple(rays), incidence


def dual_rays(diagram: ToricDiagram) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[bool, ...], ...]]:
    """Primitive extreme rays of C(mu) (lexicographic) and facet x ray incidence."""
    return _cone_geometry(diagram)


def gorenstein_gamma(normals: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], int]:
    """Exact gamma with <lambda_j, gamma> = -1 for all j, plus least ell with ell*gamma integral."""
    n = len(normals[0])
    idx = independent_subset(normals, n)
    gamma = tuple(solve([normals[i] for i in idx], [-1] * n))
    for j, lam in enumerate(normals):
        val = dot(lam, gamma)
        if val != -1:
            raise GammaInconsistent(
                "Gorenstein condition (lambda_j, gamma) = -1 unsolvable: "
                f"gamma = ({', '.join(map(str, gamma))}) from rows {[i + 1 for i in idx]} gives "
                f"(lambda_{j + 1}, gamma) = {val}"
            )
    return gamma, lcm_denominator(gamma)


def build_cone(diagram: ToricDiagram) -> ConeModel:
    """Gamma first: a non-Gorenstein diagram is reported as such even if it is also redundant."""
    gamma, ell = gorenstein_gamma(diagram.normals)
    rays, incidence = dual_rays(diagram)
    l_inf = tuple(sum(col) for col in zip(*diagram.normals))
    return ConeModel(diagram=diagram, rays=rays, incidence=incidence, gamma=gamma, ell=ell, l_infty=l_inf)


def load_cone(path) -> ConeModel:
    with open(path, encoding="utf-8") as fh:
        return build_cone(parse_toric_diagram(fh.read()))


# --- Reeb vectors --------------------------------------------------------------

def _coerce_xi(xi) -> tuple:
    out = []
    for x in xi:
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            out.append(Fraction(x))
        elif isinstance(x, str):
            out.append(Fraction(x))
        else:
            out.append(float(x))
    if any(isinstance(x, float) for x in out):
        out = [float(x) for x in out]
    return tuple(out)


def evaluate_reeb(model: ConeModel, xi) -> ReebVector:
    """Evaluate both feasibility flags without raising."""
    xi = _coerce_xi(xi)
    if len(xi) != model.n:
        raise ValueError(f"Reeb vector has {len(xi)} components, cone lives in R^{model.n}")
    m1 = model.m + 1
    if isinstance(xi[0], Fraction):
        resid = dot(model.gamma, xi) + m1
        on_slice = resid == 0
        pairings = [dot(xi, r) for r in model.rays]
        interior = all(p > 0 for p in pairings)
        return ReebVector(xi, on_slice, interior, float(resid), float(min(pairings)))
    arr = np.array(xi)
    resid = float(model.gamma_array @ arr) + m1
    pairings = model.rays_array @ arr
    return ReebVector(xi, abs(resid) <= SLICE_TOL, bool(np.all(pairings > 0)), resid, float(pairings.min()))


def reeb_feasible(model: ConeModel, xi) -> ReebVector:
    """Check (gamma, xi) = -(m+1) and xi in Int C(mu)*; raise on failure."""
    rv = evaluate_reeb(model, xi)
    if not rv.on_slice:
        raise NotOnSlice(rv.slice_residual)
    if not rv.interior:
        vals = [dot(rv.xi, r) if rv.exact else float(np.dot(rv.array, r)) for r in model.rays]
        k = min(range(len(vals)), key=lambda i: (vals[i], i))
        raise NotInterior(k, model.rays[k], vals[k])
    return rv


def canonical_reeb(model: ConeModel) -> ReebVector:
    """The slice rescaling of b = sum_j lambda_j (exact)."""
    b = model.l_infty
    s = Fraction(-(model.m + 1)) / dot(model.gamma, b)
    return reeb_feasible(model, [s * x for x in b])


def characteristic_polytope(model: ConeModel, xi: ReebVector):
    """{alpha in C(mu) : alpha(xi) = 1} in the chart dropping the largest xi-coordinate."""
    from .polytope import vertex_enumeration

    if not xi.feasible:
        xi = reeb_feasible(model, xi.xi)
    vals = [abs(float(x)) for x in xi.xi]
    k = max(range(len(vals)), key=lambda i: (vals[i], -i))
    exact = xi.exact
    X = [to_fraction(x) for x in xi.xi]
    facets = []
    for lam in model.normals:
        a = tuple(Fraction(lam[i]) - Fraction(lam[k]) * X[i] / X[k] for i in range(model.n) if i != k)
        b = Fraction(lam[k]) / X[k]
        facets.append((a, b))
    if not exact:
        facets = [(tuple(float(x) for x in a), float(b)) for a, b in facets]
    return vertex_enumeration(facets, model.m)


def chart_point(model: ConeModel, xi: ReebVector, alpha: Sequence) -> tuple:
    """Image of a point of the characteristic plane in the chart used above."""
    vals = [abs(float(x)) for x in xi.xi]
    k = max(range(len(vals)), key=lambda i: (vals[i], -i))
    return tuple(a for i, a in enumerate(alpha) if i != k)
