"""Small exact linear algebra over the rationals.

Everything here works on plain tuples/lists of ``int`` or ``Fraction`` so the
cone combinatorics never touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Vector = tuple  # tuple of int | Fraction


def to_fraction(x) -> Fraction:
    """Exact conversion; floats keep their binary64 value exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    return Fraction(x)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    m = [[to_fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        for i in range(r + 1, len(m)):
            f = m[i][col]
            if f:
                f /= p
                row_r = m[r]
                m[i] = [a - f * b for a, b in zip(m[i], row_r)]
        r += 1
        if r == len(m):
            break
    return r


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly. Raises ValueError if singular."""
    n = len(a)
    m = [[to_fraction(x) for x in row] + [to_fraction(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [m[i][n] for i in range(n)]


def det(a: Sequence[Sequence]) -> Fraction:
    n = len(a)
    m = [[to_fraction(x) for x in row] for row in a]
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        out *= p
        for i in range(col + 1, n):
            f = m[i][col]
            if f:
                f /= p
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return sign * out


def independent_subset(rows: Sequence[Sequence], size: int) -> list[int]:
    """Greedy indices of ``size`` linearly independent rows, in input order."""
    chosen: list[int] = []
    for i in range(len(rows)):
        if rank([rows[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == size:
                return chosen
    raise ValueError("not enough independent rows")


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [to_fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def lcm_denominator(v: Sequence) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), (to_fraction(x).denominator for x in v), 1)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix with independent rows.

    Pivots are positive, entries above each pivot are reduced into ``[0, pivot)``.
    """
    m = [list(map(int, row)) for row in mat]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        rows = [i for i in range(r, nrows) if m[i][col] != 0]
        if not rows:
            continue
        # fold every nonzero entry of this column into row r
        i0 = rows[0]
        m[r], m[i0] = m[i0], m[r]
        for i in range(r + 1, nrows):
            if m[i][col] == 0:
                continue
            a, b = m[r][col], m[i][col]
            g, s, t = _ext_gcd(a, b)
            ua, ub = a // g, b // g
            row_r = [s * x + t * y for x, y in zip(m[r], m[i])]
            row_i = [-ub * x + ua * y for x, y in zip(m[r], m[i])]
            m[r], m[i] = row_r, row_i
        if m[r][col] < 0:
            m[r] = [-x for x in m[r]]
        p = m[r][col]
        for i in range(r):
            q = m[i][col] // p
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
    return m[:r]


def integer_kernel_basis(g: Sequence[int]) -> list[list[int]]:
    """Basis of the lattice {x in Z^n : <g, x> = 0} for a nonzero integer g.

    Returned as an n x (n-1) column matrix (list of rows).  The basis is put in
    Hermite normal form (as rows of its transpose) so it is canonical.
    """
    n = len(g)
    g = [int(x) for x in g]
    if not any(g):
        raise ValueError("zero functional")
    # unimodular column operations U with g U = (d, 0, ..., 0)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    row = list(g)
    for j in range(1, n):
        if row[j] == 0:
            continue
        a, b = row[0], row[j]
        d, s, t = _ext_gcd(a, b)
        ua, ub = a // d, b // d
        for i in range(n):
            c0, cj = u[i][0], u[i][j]
            u[i][0] = s * c0 + t * cj
            u[i][j] = -ub * c0 + ua * cj
        row[0], row[j] = d, 0
    kernel_rows = [[u[i][j] for i in range(n)] for j in range(1, n)]
    h = hermite_rows(kernel_rows)
    return [[h[j][i] for j in range(n - 1)] for i in range(n)]
