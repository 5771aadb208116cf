"""Algebraic certificates for Gaussian Gabor systems on lattices.

Three certificate types are produced, all from the coset structure of a
product sublattice ``K = A_1 Z^2 ⊙ ... ⊙ A_d Z^2`` of index ``n``:

* incompleteness: the ``n`` cosets split into groups of sizes ``l_i`` with
  ``sum l_i = n`` and ``l_i < det A_i``. Then each one-dimensional union of
  cosets has density ``l_i / det A_i < 1``, a tensor product of functions
  vanishing on those unions annihilates the whole system;
* frame: a product sublattice whose one-dimensional factors all have
  density above one is a frame, and so is every superset;
* complete but not a frame: a product sublattice whose factors all have
  density at least one makes the system complete, and if every coset
  projects, on some axis with a critical (density one) factor, into a single
  class of that factor, no lower frame bound can hold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import exact
from .exact import format_rational
from .lattice import (
    Lattice,
    ProductForm,
    SublatticeEmbedding,
    coset_representatives,
    maximal_product_sublattice,
    sublattice_embedding,
)

DEFAULT_INDEX_BOUND = 4


@dataclass(frozen=True)
class Splitting:
    l: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.l)


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of n into ``parts`` positive integers, lexicographic."""
    if parts == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def find_splittings(dets: Sequence, n: int) -> list[Splitting]:
    dets = [Fraction(x) for x in dets]
    return [Splitting(l) for l in compositions(n, len(dets))
            if all(li < di for li, di in zip(l, dets))]


def characterize_relevant_splittings(d: int, n: int) -> list[Splitting]:
    """Splittings for which the coset criterion can beat the density bound.

    These are the compositions with ``prod l_i < sum l_i``.
    """
    out = []
    for l in compositions(n, d):
        prod = 1
        for x in l:
            prod *= x
        if prod < n:
            out.append(Splitting(l))
    return out


# -- sublattice candidates ---------------------------------------------------


def _refine(pf: ProductForm, multipliers: Sequence[int]) -> ProductForm:
    blocks = []
    for block, m in zip(pf.blocks, multipliers):
        blocks.append(tuple((row[0] * m, row[1]) for row in block))
    return ProductForm(tuple(blocks), pf.pairing)


def _multiplier_tuples(d: int, budget: int) -> Iterator[tuple[int, ...]]:
    """All m in N^d with prod(m) <= budget, ordered by product then lexicographically."""
    tuples = []
    for m in itertools.product(range(1, budget + 1), repeat=d):
        p = 1
        for x in m:
            p *= x
        if p <= budget:
            tuples.append((p, m))
    for _, m in sorted(tuples):
        yield m


def candidate_product_sublattices(
    lattice: Lattice, index_bound: int = DEFAULT_INDEX_BOUND
) -> Iterator[tuple[ProductForm, SublatticeEmbedding]]:
    """Product sublattices of ``lattice`` in a deterministic order.

    Every product sublattice lies inside the maximal one, ``K``, so the
    candidates are ``K`` itself followed by its refinements with total index
    up to ``max(index_bound, [L:K])``; refining block ``i`` by a factor
    ``m_i`` is all that matters for the criteria since they only see
    ``det A_i``.
    """
    base = maximal_product_sublattice(lattice)
    base_emb = sublattice_embedding(base.lattice(), lattice)
    budget = max(index_bound, base_emb.index) // base_emb.index
    for m in _multiplier_tuples(base.dim, budget):
        pf = base if all(x == 1 for x in m) else _refine(base, m)
        emb = base_emb if pf is base else sublattice_embedding(pf.lattice(), lattice)
        yield pf, emb


# -- incompleteness ----------------------------------------------------------


def _matrix_json(m) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in m]


def _vector_json(v) -> list[str]:
    return [format_rational(x) for x in v]


@dataclass(frozen=True)
class IncompletenessCertificate:
    product_form: ProductForm
    embedding: SublatticeEmbedding
    splitting: Splitting
    cosets: tuple[tuple[Fraction, ...], ...]
    groupings: tuple[tuple[int, ...], ...]
    per_grouping_density: tuple[Fraction, ...]

    @property
    def index(self) -> int:
        return self.embedding.index

    def to_json(self) -> dict:
        return {
            "type": "incompleteness",
            "sublattice_generator": _matrix_json(self.embedding.sub.generator),
            "blocks": [_matrix_json(b) for b in self.product_form.blocks],
            "index": self.index,
            "splitting": list(self.splitting.l),
            "cosets": [_vector_json(c) for c in self.cosets],
            "groupings": [list(g) for g in self.groupings],
            "per_grouping_density": [format_rational(x) for x in self.per_grouping_density],
        }


def build_incompleteness_certificate(
    lattice: Lattice,
    product_form: ProductForm,
    embedding: SublatticeEmbedding | None = None,
) -> IncompletenessCertificate | None:
    if embedding is None:
        embedding = sublattice_embedding(product_form.lattice(), lattice)
        if embedding is None:
            raise ValueError("product form is not a sublattice of the lattice")
    dets = product_form.block_dets
    options = find_splittings(dets, embedding.index)
    if not options:
        return None
    split = options[0]
    cosets = tuple(coset_representatives(embedding))
    groupings = []
    start = 0
    for li in split.l:
        groupings.append(tuple(range(start, start + li)))
        start += li
    densities = tuple(Fraction(li) / dt for li, dt in zip(split.l, dets))
    return IncompletenessCertificate(product_form, embedding, split, cosets, tuple(groupings), densities)


def search_incompleteness_certificate(
    lattice: Lattice, index_bound: int = DEFAULT_INDEX_BOUND
) -> IncompletenessCertificate | None:
    for pf, emb in candidate_product_sublattices(lattice, index_bound):
        cert = build_incompleteness_certificate(lattice, pf, emb)
        if cert is not None:
            return cert
    return None


# -- frames ------------------------------------------------------------------


@dataclass(frozen=True)
class FrameMonotonicityCertificate:
    product_form: ProductForm
    embedding: SublatticeEmbedding
    factor_densities: tuple[Fraction, ...]

    @property
    def sublattice(self) -> Lattice:
        return self.embedding.sub

    @property
    def index(self) -> int:
        return self.embedding.index

    def to_json(self) -> dict:
        return {
            "type": "frame-sublattice",
            "sublattice_generator": _matrix_json(self.sublattice.generator),
            "blocks": [_matrix_json(b) for b in self.product_form.blocks],
            "index": self.index,
            "factor_densities": [format_rational(x) for x in self.factor_densities],
        }


def certify_frame_by_sublattice(
    lattice: Lattice, index_bound: int = DEFAULT_INDEX_BOUND
) -> FrameMonotonicityCertificate | None:
    for pf, emb in candidate_product_sublattices(lattice, index_bound):
        densities = tuple(1 / dt for dt in pf.block_dets)
        if all(x > 1 for x in densities):
            return FrameMonotonicityCertificate(pf, emb, densities)
    return None


# -- complete but not a frame ------------------------------------------------


def _class_key(vector2: Sequence[Fraction], block_inverse) -> tuple[Fraction, Fraction]:
    coords = exact.matvec(block_inverse, vector2)
    return tuple(c - (c.numerator // c.denominator) for c in coords)


@dataclass(frozen=True)
class CriticalCosetCertificate:
    """Completeness from a product sublattice with factor densities >= 1,
    and failure of the lower frame bound from a cover of the cosets by
    critical factors."""

    product_form: ProductForm
    embedding: SublatticeEmbedding
    cosets: tuple[tuple[Fraction, ...], ...]
    assignment: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "type": "critical-cosets",
            "sublattice_generator": _matrix_json(self.embedding.sub.generator),
            "blocks": [_matrix_json(b) for b in self.product_form.blocks],
            "index": self.embedding.index,
            "factor_densities": [format_rational(1 / dt) for dt in self.product_form.block_dets],
            "cosets": [_vector_json(c) for c in self.cosets],
            "assignment": list(self.assignment),
        }


def certify_complete_not_frame(lattice: Lattice) -> CriticalCosetCertificate | None:
    pf = maximal_product_sublattice(lattice)
    dets = pf.block_dets
    if any(dt > 1 for dt in dets):
        return None
    critical = [i for i, dt in enumerate(dets) if dt == 1]
    if not critical:
        return None
    emb = sublattice_embedding(pf.lattice(), lattice)
    cosets = coset_representatives(emb)
    d = lattice.dim
    keys: dict[int, list[tuple]] = {}
    for i in critical:
        inv = exact.inverse(pf.blocks[i])
        keys[i] = [_class_key((c[i], c[d + i]), inv) for c in cosets]
    choices = [sorted(set(keys[i])) + [None] for i in critical]
    for pick in itertools.product(*choices):
        assignment = []
        for j in range(len(cosets)):
            axis = next((i for i, key in zip(critical, pick)
                         if key is not None and keys[i][j] == key), None)
            if axis is None:
                break
            assignment.append(axis)
        else:
            return CriticalCosetCertificate(pf, emb, tuple(cosets), tuple(assignment))
    return None


# -- where certificates beat the density bound --------------------------------


def certificate_beyond_density(lattice: Lattice, index_bound: int = DEFAULT_INDEX_BOUND) -> list[Splitting]:
    """Feasible splittings of the maximal product sublattice of a lattice whose
    density is at least one, i.e. incompleteness the density bound misses."""
    if lattice.density < 1:
        return []
    pf = maximal_product_sublattice(lattice)
    emb = sublattice_embedding(pf.lattice(), lattice)
    return find_splittings(pf.block_dets, emb.index)


def coset_only_region(k: int, a_values: Sequence, b_values: Sequence) -> dict[int, list[tuple[Fraction, Fraction]]]:
    """Scan the ``cor6`` family on a grid; map each first part ``l`` to the
    cells where a splitting ``(l, k - l)`` certifies incompleteness while the
    density is at least one."""
    from .families import cor6

    region: dict[int, list[tuple[Fraction, Fraction]]] = {l: [] for l in range(1, k)}
    for a in a_values:
        for b in b_values:
            a, b = Fraction(a), Fraction(b)
            if a * b * k > 1:                       # density below one: nothing to beat
                continue
            for s in certificate_beyond_density(cor6(k, a, b)):
                region[s.l[0]].append((a, b))
    return region
