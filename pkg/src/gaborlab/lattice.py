"""Exact full-rank lattices in R^{2d} = time x frequency.

Coordinates are ordered ``(x_1, ..., x_d, omega_1, ..., omega_d)`` and a
lattice is the integer column span of a nonsingular rational generator.
Axis ``i`` owns the coordinate plane ``(x_i, omega_i)``; a lattice is in
product form when it is the direct sum of its intersections with these
planes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import exact
from .errors import DimensionMismatch, NotSymplectic, OddDimension, SingularGenerator
from .exact import Matrix


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice ``G Z^{2d}`` with an exact generator ``G``.

    ``gaussian_equivalent_to`` is set by :func:`apply_symplectic` when the
    lattice was produced by a map that leaves the Gaussian window invariant.
    """

    generator: Matrix
    abs_det: Fraction
    gaussian_equivalent_to: "Lattice | None" = field(default=None, compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.generator) // 2

    @property
    def size(self) -> int:
        return len(self.generator)

    @property
    def density(self) -> Fraction:
        return 1 / self.abs_det

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.generator])

    def contains(self, vector: Sequence) -> bool:
        coeffs = exact.matvec(exact.inverse(self.generator), [Fraction(v) for v in vector])
        return all(c.denominator == 1 for c in coeffs)

    def points_in_ball(self, radius: float) -> np.ndarray:
        """All lattice points with Euclidean norm <= radius, shape (n, 2d).

        Coefficient ranges come from the rows of G^{-1}, since
        ``|c_j| <= |row_j(G^{-1})| |lambda|``.
        """
        g = self.as_float()
        ginv = np.linalg.inv(g)
        bounds = np.floor(radius * np.linalg.norm(ginv, axis=1) + 1e-9).astype(int)
        ranges = [np.arange(-b, b + 1) for b in bounds]
        out = []
        # chunk over the first coefficient to bound memory
        rest = np.stack(np.meshgrid(*ranges[1:], indexing="ij"), axis=-1).reshape(-1, len(ranges) - 1) \
            if len(ranges) > 1 else np.zeros((1, 0))
        tol = 1e-9 * max(1.0, radius)
        for c0 in ranges[0]:
            coeffs = np.concatenate([np.full((rest.shape[0], 1), c0), rest], axis=1)
            pts = coeffs @ g.T
            keep = np.einsum("ij,ij->i", pts, pts) <= radius * radius + tol
            if keep.any():
                out.append(pts[keep])
        if not out:
            return np.zeros((0, self.size))
        pts = np.concatenate(out)
        order = np.lexsort(pts.T[::-1])
        return pts[order]


@dataclass(frozen=True)
class ProductForm:
    """A lattice written as the product of 2x2 blocks, one per axis.

    Block ``i`` acts on the plane ``(x_{pairing[i]}, omega_{pairing[i]})``;
    its first row is the time coordinate and its second the frequency.
    """

    blocks: tuple[Matrix, ...]
    pairing: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.blocks)

    @property
    def block_dets(self) -> tuple[Fraction, ...]:
        return tuple(abs(exact.det(b)) for b in self.blocks)

    def lattice(self) -> Lattice:
        return make_lattice(assemble_blocks(self.blocks, self.pairing))


@dataclass(frozen=True)
class SublatticeEmbedding:
    """``sub.generator == super.generator @ coefficients`` with integral coefficients."""

    sub: Lattice
    super: Lattice
    coefficients: tuple[tuple[int, ...], ...]
    index: int


BLOCK_ORTHOGONAL = "block-diagonal-orthogonal"
J_SWAP = "J-swap"
OTHER = "other"


@dataclass(frozen=True)
class SymplecticMap:
    matrix: Matrix
    kind: str = OTHER

    @property
    def gaussian_invariant(self) -> bool:
        return self.kind in (BLOCK_ORTHOGONAL, J_SWAP)


# -- construction ------------------------------------------------------------


def make_lattice(entries: Sequence[Sequence]) -> Lattice:
    g = exact.as_matrix(entries)
    n = len(g)
    if n == 0 or any(len(row) != n for row in g):
        raise OddDimension(f"generator must be square, got {n} rows of lengths {[len(r) for r in g]}")
    if n % 2:
        raise OddDimension(f"generator dimension {n} is odd")
    dt = exact.det(g)
    if dt == 0:
        raise SingularGenerator("generator matrix is singular")
    return Lattice(g, abs(dt))


def lattice_density(lattice: Lattice) -> Fraction:
    return 1 / lattice.abs_det


def assemble_blocks(blocks: Sequence[Sequence[Sequence]], pairing: Sequence[int] | None = None) -> Matrix:
    """Generator of the product lattice: block i fills rows/cols (p_i, d + p_i)."""
    d = len(blocks)
    pairing = tuple(range(d)) if pairing is None else tuple(pairing)
    g = [[Fraction(0)] * (2 * d) for _ in range(2 * d)]
    for block, axis in zip(blocks, pairing):
        idx = (axis, d + axis)
        for r in range(2):
            for c in range(2):
                g[idx[r]][idx[c]] = Fraction(block[r][c])
    return tuple(tuple(row) for row in g)


def assemble_groups(groups: Sequence[tuple[tuple[int, ...], Matrix]], d: int) -> Matrix:
    """Generator of the direct sum of lattices living on groups of axes."""
    g = [[Fraction(0)] * (2 * d) for _ in range(2 * d)]
    for axes, gen in groups:
        idx = list(axes) + [d + a for a in axes]
        for r, rr in enumerate(idx):
            for c, cc in enumerate(idx):
                g[rr][cc] = gen[r][c]
    return tuple(tuple(row) for row in g)


# -- intersections with coordinate subspaces ---------------------------------


def _plane_indices(axes: Iterable[int], d: int) -> list[int]:
    axes = list(axes)
    return axes + [d + a for a in axes]


def intersect_axes(lattice: Lattice, axes: Sequence[int]) -> Matrix:
    """Canonical generator of ``L ∩ span{x_a, omega_a : a in axes}``.

    Returned as a ``2k x 2k`` matrix in the coordinates
    ``(x_{a_1}..x_{a_k}, omega_{a_1}..omega_{a_k})``.
    """
    d = lattice.dim
    keep = _plane_indices(axes, d)
    drop = [r for r in range(2 * d) if r not in keep]
    g = lattice.generator
    constraints = []
    for r in drop:
        den = exact.common_denominator([g[r]])
        constraints.append([int(x * den) for x in g[r]])
    kernel = exact.integer_kernel(constraints, 2 * d)
    pts = exact.matmul(g, kernel)
    sub = [pts[r] for r in keep]
    return exact.rational_span_basis(sub, len(keep))


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def block_decomposition(lattice: Lattice) -> list[tuple[tuple[int, ...], Matrix]]:
    """Finest splitting of the lattice into a direct sum over groups of axes.

    Returns ``[(axes, generator), ...]`` sorted by first axis; a single group
    covering all axes means the lattice does not split.
    """
    d = lattice.dim
    partitions = sorted(
        (sorted(tuple(sorted(p)) for p in part) for part in _set_partitions(list(range(d)))),
        key=lambda part: (-len(part), part),
    )
    for part in partitions:
        if len(part) == 1:
            return [(tuple(range(d)), lattice.generator)]
        groups = [(axes, intersect_axes(lattice, axes)) for axes in part]
        total = Fraction(1)
        for _, gen in groups:
            total *= abs(exact.det(gen))
        if total == lattice.abs_det:
            return groups
    raise AssertionError("unreachable")


def maximal_product_sublattice(lattice: Lattice) -> ProductForm:
    """The largest sublattice of the form A_1 Z^2 ⊙ ... ⊙ A_d Z^2.

    Any product sublattice has its i-th block inside ``L ∩ plane_i``, so the
    direct sum of the plane intersections contains every candidate.
    """
    d = lattice.dim
    blocks = tuple(intersect_axes(lattice, (i,)) for i in range(d))
    return ProductForm(blocks, tuple(range(d)))


def detect_product_form(lattice: Lattice) -> ProductForm | None:
    pf = maximal_product_sublattice(lattice)
    total = Fraction(1)
    for dt in pf.block_dets:
        total *= dt
    return pf if total == lattice.abs_det else None


# -- sublattices and cosets --------------------------------------------------


def sublattice_embedding(sub: Lattice, sup: Lattice) -> SublatticeEmbedding | None:
    if sub.size != sup.size:
        raise DimensionMismatch(f"dimensions differ: {sub.size} vs {sup.size}")
    m = exact.matmul(exact.inverse(sup.generator), sub.generator)
    if not exact.is_integral(m):
        return None
    coeffs = tuple(tuple(int(x) for x in row) for row in m)
    index = abs(int(exact.det(m)))
    return SublatticeEmbedding(sub, sup, coeffs, index)


def _reduce_mod_columns(v: list[int], h: list[list[int]]) -> list[int]:
    """Reduce integer coordinates into the fundamental box of a lower-triangular HNF."""
    v = list(v)
    n = len(v)
    for j in range(n):
        piv = h[j][j]
        k = v[j] // piv
        if k:
            for r in range(n):
                v[r] -= k * h[r][j]
    return v


def coset_representatives(embedding: SublatticeEmbedding) -> list[tuple[Fraction, ...]]:
    """One vector per coset of ``sub`` in ``super``.

    The quotient is enumerated through the Smith form ``U M V = D``: digit
    vectors ``c`` with ``0 <= c_i < D_ii`` in lexicographic order map to
    ``U^{-1} c``, which is then reduced into the Hermite box of ``M`` so each
    representative is canonical.
    """
    m = [list(r) for r in embedding.coefficients]
    diag, u, _ = exact.smith_normal_form(m)
    u_inv = exact.to_int(exact.inverse(u))
    h, _, _ = exact.column_hnf(m)
    g = embedding.super.generator
    reps = []
    for digits in itertools.product(*(range(x) for x in diag)):
        coords = [sum(u_inv[r][c] * digits[c] for c in range(len(digits))) for r in range(len(digits))]
        coords = _reduce_mod_columns(coords, h)
        reps.append(exact.matvec(g, coords))
    return reps


def same_coset(u: Sequence, v: Sequence, lattice: Lattice) -> bool:
    return lattice.contains([Fraction(a) - Fraction(b) for a, b in zip(u, v)])


# -- symplectic maps ---------------------------------------------------------


def standard_j(d: int) -> Matrix:
    n = 2 * d
    rows = []
    for r in range(n):
        row = [Fraction(0)] * n
        if r < d:
            row[d + r] = Fraction(1)
        else:
            row[r - d] = Fraction(-1)
        rows.append(tuple(row))
    return tuple(rows)


def is_symplectic(m: Matrix) -> bool:
    d = len(m) // 2
    j = standard_j(d)
    return exact.matmul(exact.matmul(exact.transpose(m), j), m) == j


def symplectic_map(matrix: Sequence[Sequence], kind: str = OTHER) -> SymplecticMap:
    """Validate ``matrix`` and its kind tag; raises NotSymplectic."""
    m = exact.as_matrix(matrix)
    if len(m) % 2 or not is_symplectic(m):
        raise NotSymplectic("M^T J M != J")
    d = len(m) // 2
    if kind == J_SWAP and m != standard_j(d):
        raise NotSymplectic("J-swap kind requires M = J")
    if kind == BLOCK_ORTHOGONAL:
        b = tuple(row[:d] for row in m[:d])
        off = [m[r][c] for r in range(d) for c in range(d, 2 * d)] + \
              [m[r][c] for r in range(d, 2 * d) for c in range(d)]
        lower = tuple(row[d:] for row in m[d:])
        if any(off) or exact.matmul(exact.transpose(b), b) != exact.identity(d) or lower != b:
            raise NotSymplectic("not of the form diag(B, B^{-T}) with B orthogonal")
    return SymplecticMap(m, kind)


def j_swap(d: int) -> SymplecticMap:
    return SymplecticMap(standard_j(d), J_SWAP)


def block_orthogonal(b: Sequence[Sequence]) -> SymplecticMap:
    bm = exact.as_matrix(b)
    d = len(bm)
    m = [[Fraction(0)] * (2 * d) for _ in range(2 * d)]
    for r in range(d):
        for c in range(d):
            m[r][c] = bm[r][c]
            m[d + r][d + c] = bm[r][c]
    return symplectic_map(m, BLOCK_ORTHOGONAL)


def apply_symplectic(lattice: Lattice, m: SymplecticMap) -> Lattice:
    if m.kind != OTHER:
        m = symplectic_map(m.matrix, m.kind)
    elif not is_symplectic(m.matrix):
        raise NotSymplectic("M^T J M != J")
    if len(m.matrix) != lattice.size:
        raise DimensionMismatch("symplectic map and lattice dimensions differ")
    out = make_lattice(exact.matmul(m.matrix, lattice.generator))
    if m.gaussian_invariant:
        out = Lattice(out.generator, out.abs_det, gaussian_equivalent_to=lattice)
    return out


def same_point_set(a: Lattice, b: Lattice) -> bool:
    e1 = sublattice_embedding(a, b)
    return e1 is not None and e1.index == 1
