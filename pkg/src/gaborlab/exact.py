"""Exact rational scalars, small dense matrices and integer normal forms.

Matrices are tuples of row tuples holding ``Fraction`` (or ``int``) entries.
Everything here is written for the tiny sizes that occur for lattices in
R^2, R^4 and R^6, so clarity wins over asymptotics.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import ParseError

Scalar = Fraction
Matrix = tuple[tuple[Fraction, ...], ...]
IntMatrix = list[list[int]]

MAX_FRACTIONAL_DIGITS = 12

_INT_OR_RATIO = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_DECIMAL = re.compile(r"^[+-]?(?:\d+\.\d*|\.\d+)$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, an integer or a short decimal into an exact Fraction.

    Decimals with more than 12 fractional digits are rejected: they usually
    stand for an irrational value, and the lattice rules compare exactly.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"cannot parse {text!r} as a rational")
    s = text.strip()
    if _INT_OR_RATIO.match(s):
        if s.endswith("/0") or re.search(r"/0+$", s):
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(s)
    if _DECIMAL.match(s):
        frac_digits = s.split(".", 1)[1]
        if len(frac_digits) > MAX_FRACTIONAL_DIGITS:
            raise ParseError(
                f"{text!r} has more than {MAX_FRACTIONAL_DIGITS} fractional digits"
            )
        return Fraction(s)
    raise ParseError(f"cannot parse {text!r} as a rational")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


# -- rational matrices -------------------------------------------------------


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(parse_rational(v) for v in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt)
        for row in a
    )


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...]:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return result


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def is_integral(a: Sequence[Sequence]) -> bool:
    return all(Fraction(x).denominator == 1 for row in a for x in row)


def to_int(a: Sequence[Sequence]) -> IntMatrix:
    return [[int(Fraction(x)) for x in row] for row in a]


def common_denominator(a: Sequence[Sequence]) -> int:
    out = 1
    for row in a:
        for x in row:
            out = lcm(out, Fraction(x).denominator)
    return out


# -- integer normal forms ----------------------------------------------------


def _col_swap(m: IntMatrix, i: int, j: int) -> None:
    for row in m:
        row[i], row[j] = row[j], row[i]


def _col_addmul(m: IntMatrix, dst: int, src: int, k: int) -> None:
    """col[dst] += k * col[src]"""
    if k:
        for row in m:
            row[dst] += k * row[src]


def _col_combine(m: IntMatrix, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    """(col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j); ad - bc = +-1."""
    for row in m:
        x, y = row[i], row[j]
        row[i], row[j] = a * x + b * y, c * x + d * y


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def column_hnf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, int]:
    """Column-style Hermite normal form.

    Returns ``(H, U, rank)`` with ``A U = H`` and ``U`` unimodular. The first
    ``rank`` columns of ``H`` are in lower echelon form with positive pivots
    and entries left of each pivot reduced into ``[0, pivot)``; the remaining
    columns of ``H`` are zero, so the trailing columns of ``U`` span the
    integer kernel of ``A``.
    """
    h = [list(map(int, row)) for row in a]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = [[int(i == j) for j in range(cols)] for i in range(cols)]
    pc = 0
    pivots: list[tuple[int, int]] = []
    for r in range(rows):
        if pc >= cols:
            break
        for c in range(pc + 1, cols):
            if h[r][c] == 0:
                continue
            x, y = h[r][pc], h[r][c]
            g, s, t = _xgcd(x, y)
            # new pc = s*x_col + t*y_col ; new c = -(y/g) x_col + (x/g) y_col
            p, q = -y // g, x // g
            _col_combine(h, pc, c, s, t, p, q)
            _col_combine(u, pc, c, s, t, p, q)
        if h[r][pc] == 0:
            continue
        if h[r][pc] < 0:
            for m in (h, u):
                for row in m:
                    row[pc] = -row[pc]
        piv = h[r][pc]
        for c in range(pc):
            k = -(h[r][c] // piv)
            _col_addmul(h, c, pc, k)
            _col_addmul(u, c, pc, k)
        pivots.append((r, pc))
        pc += 1
    return h, u, pc


def integer_kernel(a: IntMatrix, ncols: int | None = None) -> IntMatrix:
    """Basis of {c in Z^n : A c = 0} as the columns of the returned matrix."""
    n = ncols if ncols is not None else len(a[0])
    if not a:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    _, u, rank = column_hnf(a)
    return [row[rank:] for row in u]


def smith_normal_form(a: IntMatrix) -> tuple[list[int], IntMatrix, IntMatrix]:
    """Smith normal form of a square nonsingular integer matrix.

    Returns ``(diag, U, V)`` with ``U A V = diag(diag)``, both transforms
    unimodular, and each invariant factor dividing the next.
    """
    n = len(a)
    m = [list(map(int, row)) for row in a]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_swap(mat, i, j):
        mat[i], mat[j] = mat[j], mat[i]

    def row_addmul(mat, dst, src, k):
        if k:
            mat[dst] = [x + k * y for x, y in zip(mat[dst], mat[src])]

    for t in range(n):
        while True:
            entries = [(abs(m[i][j]), i, j) for i in range(t, n) for j in range(t, n) if m[i][j]]
            if not entries:
                raise ValueError("matrix is singular")
            _, i, j = min(entries)
            row_swap(m, t, i)
            row_swap(u, t, i)
            _col_swap(m, t, j)
            _col_swap(v, t, j)
            p = m[t][t]
            done = True
            for i in range(t + 1, n):
                k = m[i][t] // p
                row_addmul(m, i, t, -k)
                row_addmul(u, i, t, -k)
                if m[i][t]:
                    done = False
            for j in range(t + 1, n):
                k = m[t][j] // p
                _col_addmul(m, j, t, -k)
                _col_addmul(v, j, t, -k)
                if m[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if m[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_addmul(m, t, bad[0], 1)
            row_addmul(u, t, bad[0], 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
    return [m[i][i] for i in range(n)], u, v


def rational_span_basis(vectors: Sequence[Sequence], dim: int) -> Matrix:
    """Basis (as columns) of the Z-span of rational column vectors.

    ``vectors`` is a ``dim x k`` matrix whose columns span the module. The
    returned matrix is ``dim x rank`` and in column Hermite normal form after
    clearing denominators, which makes it a canonical basis.
    """
    den = common_denominator(vectors) if vectors else 1
    scaled = [[int(Fraction(x) * den) for x in row] for row in vectors]
    h, _, rank = column_hnf(scaled)
    return tuple(tuple(Fraction(h[i][j], den) for j in range(rank)) for i in range(dim))


def gcd_all(values) -> int:
    out = 0
    for v in values:
        out = gcd(out, int(v))
    return out
