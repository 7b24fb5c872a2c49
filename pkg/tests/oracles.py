"""Independent reference computations used only by the tests.

None of these share code paths with the package: rays by brute force over
facet subsets, polytopes through scipy's qhull, integrals by Monte Carlo
sampling of a Delaunay triangulation, minima by golden-section search.
"""

from __future__ import annotations

import itertools
import math
from functools import reduce

import mpmath
import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, Delaunay, HalfspaceIntersection

PI = math.pi


# --- cones ------------------------------------------------------------------


def _nullvec(rows):
    """A nonzero integer vector orthogonal to n-1 rows in Z^n (None if rank deficient)."""
    n = len(rows[0])
    # cofactor expansion: generalized cross product
    out = []
    for k in range(n):
        minor = [[r[j] for j in range(n) if j != k] for r in rows]
        out.append((-1) ** k * _det_int(minor))
    if all(v == 0 for v in out):
        return None
    g = reduce(math.gcd, (abs(v) for v in out))
    return tuple(v // g for v in out)


def _det_int(m):
    if len(m) == 0:
        return 1
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det_int([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(len(m)))


def brute_force_rays(normals):
    """Extreme rays of {y : <l, y> >= 0}: kernels of (n-1)-subsets that are feasible."""
    n = len(normals[0])
    found = set()
    for sub in itertools.combinations(normals, n - 1):
        v = _nullvec([list(r) for r in sub])
        if v is None:
            continue
        for cand in (v, tuple(-x for x in v)):
            if all(sum(a * b for a, b in zip(lam, cand)) >= 0 for lam in normals):
                tight = [lam for lam in normals if sum(a * b for a, b in zip(lam, cand)) == 0]
                if np.linalg.matrix_rank(np.array(tight, dtype=float)) == n - 1:
                    found.add(cand)
    return sorted(found)


def lp_interior(rays, xi) -> bool:
    """Is xi strictly positive on the cone generated by ``rays``?

    LP: minimize <xi, y> over y = sum t_k r_k, t >= 0, sum t = 1.  The cone
    lies in {<xi,.> > 0} iff the optimum is positive.
    """
    R = np.array(rays, dtype=float)
    cost = R @ np.asarray(xi, dtype=float)
    res = linprog(cost, A_eq=np.ones((1, len(R))), b_eq=[1.0], bounds=[(0, None)] * len(R), method="highs")
    return bool(res.status == 0 and res.fun > 1e-12)


def lp_has_interior(normals) -> bool:
    """max s s.t. <l_j, y> >= s, |y_i| <= 1 has optimum s > 0."""
    L = np.array(normals, dtype=float)
    n = L.shape[1]
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A = np.hstack([-L, np.ones((len(L), 1))])
    res = linprog(c, A_ub=A, b_ub=np.zeros(len(L)), bounds=[(-1, 1)] * n + [(None, 1)], method="highs")
    return bool(res.status == 0 and -res.fun > 1e-9)


# --- polytopes ----------------------------------------------------------------


def halfspace_vertices(a, b):
    """Vertices of {v : a v + b >= 0} (0 must be interior) through qhull."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[1] == 1:
        lo = max(-bi / ai for ai, bi in zip(a[:, 0], b) if ai > 0)
        hi = min(-bi / ai for ai, bi in zip(a[:, 0], b) if ai < 0)
        return np.array([[lo], [hi]])
    hs = HalfspaceIntersection(np.hstack([-a, -b[:, None]]), np.zeros(a.shape[1]))
    pts = hs.intersections
    hull = ConvexHull(pts)
    return pts[hull.vertices]


def hull_volume(points) -> float:
    pts = np.asarray(points, dtype=float)
    if pts.shape[1] == 1:
        return float(pts.max() - pts.min())
    return float(ConvexHull(pts).volume)


def boundary_volume(points) -> float:
    """Divergence theorem: Vol = (1/m) sum_F <n_F, p_F> area(F) over hull facets."""
    pts = np.asarray(points, dtype=float)
    hull = ConvexHull(pts)
    m = pts.shape[1]
    total = 0.0
    for simplex, eq in zip(hull.simplices, hull.equations):
        face = pts[simplex]
        normal, offset = eq[:-1], eq[-1]
        if m == 2:
            area = float(np.linalg.norm(face[1] - face[0]))
        else:
            area = 0.5 * float(np.linalg.norm(np.cross(face[1] - face[0], face[2] - face[0])))
        total += -offset * area  # <n, p> = -offset for p on the facet
    return total / m


def mc_moments(vertices, c, samples: int, seed: int, chunk: int = 1_000_000):
    """Monte-Carlo [i0, i1...] and standard errors via uniform sampling of a Delaunay triangulation."""
    rng = np.random.default_rng(seed)
    pts = np.asarray(vertices, dtype=float)
    m = pts.shape[1]
    c = np.asarray(c, dtype=float)
    if m == 1:
        simplices = [np.array([[pts.min()], [pts.max()]])]
    else:
        tri = Delaunay(pts)
        simplices = [pts[s] for s in tri.simplices]
    vols = np.array([abs(np.linalg.det(s[1:] - s[0])) / math.factorial(m) for s in simplices])
    total = vols.sum()
    probs = vols / total
    s1 = np.zeros(m + 1)
    s2 = np.zeros(m + 1)
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        which = rng.choice(len(simplices), size=k, p=probs)
        bary = rng.dirichlet(np.ones(m + 1), size=k)
        verts = np.stack(simplices)[which]  # (k, m+1, m)
        x = np.einsum("ki,kij->kj", bary, verts)
        w = np.exp(x @ c)
        f = np.hstack([w[:, None], w[:, None] * x])
        s1 += f.sum(axis=0)
        s2 += (f * f).sum(axis=0)
        done += k
    mean = s1 / samples
    se = np.sqrt(np.maximum(s2 / samples - mean**2, 0.0) / samples)
    return total * mean, total * se


# --- scalar reference values ---------------------------------------------------


def golden_section(f, lo, hi, tol=1e-12):
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    x1, x2 = b - g * (b - a), a + g * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def mp_exp_divdiff(nodes, dps=60):
    """exp[z_0..z_k] for any (possibly repeated) nodes, in mpmath.

    Series sum_j h_j(z) / (k+j)! about 0 with h_j the complete homogeneous
    polynomials; 200 terms at 60 digits is ample for |z| <= 10.
    """
    with mpmath.workdps(dps):
        z = [mpmath.mpf(x) for x in nodes]
        k = len(z) - 1
        h = [mpmath.mpf(1)] + [mpmath.mpf(0)] * 200
        for zi in z:
            for j in range(1, 201):
                h[j] += zi * h[j - 1]
        return float(mpmath.fsum(h[j] / mpmath.factorial(k + j) for j in range(201)))


def fd_grad(f, x, h):
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def fd_jac(f, x, h):
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2 * h))
    return np.array(cols).T


def mp_divdiff_recursion(nodes, dps=200):
    """exp[z_0..z_k] by the plain divided-difference recursion, run at ``dps`` digits.

    Exactly repeated nodes use exp(z)/j!.  At 200 digits the cancellation of
    gaps down to 1e-12 over k <= 6 levels still leaves > 100 good digits.
    """
    with mpmath.workdps(dps):
        z = sorted(mpmath.mpf(float(x)) for x in nodes)
        k = len(z) - 1
        row = [mpmath.exp(x) for x in z]
        for lev in range(1, k + 1):
            row = [
                mpmath.exp(z[i]) / mpmath.factorial(lev) if z[i + lev] == z[i] else (row[i + 1] - row[i]) / (z[i + lev] - z[i])
                for i in range(k + 1 - lev)
            ]
        return row[0]


def mp_polytope_moments(points, c, dps=200):
    """[i0, i1..., i2 (flattened)] over conv(points), Delaunay simplices, mp divided differences."""
    pts = np.asarray(points, dtype=float)
    m = pts.shape[1]
    simplices = [pts[[pts.argmin(), pts.argmax()]]] if m == 1 else [pts[s] for s in Delaunay(pts).simplices]
    c = np.asarray(c, dtype=float)
    with mpmath.workdps(dps):
        i0 = mpmath.mpf(0)
        i1 = [mpmath.mpf(0)] * m
        i2 = [[mpmath.mpf(0)] * m for _ in range(m)]
        for s in simplices:
            scale = mpmath.mpf(abs(float(np.linalg.det(s[1:] - s[0]))))
            z = [mpmath.fsum(mpmath.mpf(float(a)) * mpmath.mpf(float(b)) for a, b in zip(v, c)) for v in s]
            i0 += scale * mp_divdiff_recursion(z, dps)
            for i in range(m + 1):
                e = scale * mp_divdiff_recursion(z + [z[i]], dps)
                i1 = [i1[a] + e * s[i][a] for a in range(m)]
                for j in range(m + 1):
                    w = scale * mp_divdiff_recursion(z + [z[i], z[j]], dps) * (2 if i == j else 1)
                    for a in range(m):
                        for b in range(m):
                            i2[a][b] += w * s[i][a] * s[j][b]
        return np.array([float(i0)] + [float(v) for v in i1] + [float(v) for row in i2 for v in row])
