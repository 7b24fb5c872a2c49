"""Double description and pulling triangulation on exact integer data.

Both the moment cone (rays of {y : A y >= 0}) and bounded polytopes
(homogenized to cones) go through these two routines.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ._exact import dot, independent_subset, primitive, rank, solve


def integer_rows(rows: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Clear denominators row by row (positive scaling keeps each inequality)."""
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        if any(fr):
            out.append(primitive(fr))
        else:
            out.append(tuple(0 for _ in fr))
    return out


def extreme_rays(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {y : <a, y> >= 0 for a in rows}.

    ``rows`` must have full column rank.  Constraints are inserted in
    lexicographic order; output rays are primitive integer vectors sorted
    lexicographically.  Returns [] when the cone is {0}.
    """
    rows = sorted(set(tuple(int(x) for x in r) for r in rows if any(r)))
    n = len(rows[0])
    start = independent_subset(rows, n)
    # columns of the inverse of the starting block generate a simplicial cone
    block = [rows[i] for i in start]
    rays = []
    for k in range(n):
        rhs = [int(i == k) for i in range(n)]
        rays.append(primitive(solve(block, rhs)))
    processed = list(start)
    zeros = [frozenset(start[i] for i in range(n) if i != k) for k in range(n)]

    for idx in range(len(rows)):
        if idx in start:
            continue
        a = rows[idx]
        vals = [dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays, new_zeros = [], []
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if len(common) < n - 2:
                    continue
                if any(k != p and k != q and common <= zeros[k] for k in range(len(rays))):
                    continue
                vp, vq = vals[p], vals[q]
                r = tuple(vp * x - vq * y for x, y in zip(rays[q], rays[p]))
                new_rays.append(primitive(r))
                new_zeros.append(common | {idx})
        keep = pos + zer
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | ({idx} if vals[k] == 0 else frozenset()) for k in keep] + new_zeros
        processed.append(idx)
    return sorted(set(rays))


def pulling_triangulation(points: Sequence[Sequence], incidence: Sequence[frozenset], dim: int):
    """Triangulate the cone spanned by ``points`` (already in lexicographic order).

    ``incidence[j]`` lists the points lying on the j-th supporting hyperplane;
    every face of the cone is cut out by some of these.  Each face is coned
    from its lexicographically least point over the facets avoiding it, so for
    polygons this is the fan from the least vertex.
    """
    points = [tuple(p) for p in points]

    @lru_cache(maxsize=None)
    def face_rank(face: frozenset) -> int:
        return rank([points[i] for i in sorted(face)])

    def rec(face: frozenset, d: int) -> list[tuple[int, ...]]:
        if len(face) == d:
            return [tuple(sorted(face))]
        apex = min(face)
        facets = set()
        for inc in incidence:
            sub = face & inc
            if apex in sub or len(sub) < d - 1 or sub == face:
                continue
            if face_rank(sub) == d - 1:
                facets.add(sub)
        out = []
        for f in sorted(facets, key=lambda s: tuple(sorted(s))):
            for simplex in rec(f, d - 1):
                out.append((apex,) + simplex)
        return out

    return rec(frozenset(range(len(points))), dim)
