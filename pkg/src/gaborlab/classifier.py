"""Classification of Gaussian Gabor systems ``(g_d, L)`` with an evidence chain.

Rules are consulted in a fixed order and every rule consulted is recorded.
Exact rules never get overruled by numerical ones; numerical evidence is
only used when every exact rule is silent.

Rule order
----------
0. symplectic transfer, for lattices flagged as Gaussian-equivalent images
1. density: ``D(L) < 1`` means incomplete
2. block tensor: split ``L`` into a direct sum over groups of axes and
   combine the verdicts of the pieces (one-axis pieces are decided by their
   density alone)
3. frame sublattice
4. coset splitting (incompleteness certificate)
5. critical cosets (complete but not a frame)
6. integer type: ``L = T x T`` with ``T`` isometric to ``Z^d``, decided
   from the Zak transform (numeric)
7. numeric two-scale frame bound test, if enabled
"""

from __future__ import annotations

import csv
import io
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from . import certificates as cert
from . import exact
from .errors import NonPositive, UnsupportedDimension
from .exact import format_rational
from .families import build_family, get_family
from .lattice import Lattice, block_decomposition, make_lattice

MAX_DIM = 3
PHASE_FAMILIES = ("sep2d", "skew", "cor6", "threed")


class Outcome(str, Enum):
    FRAME = "Frame"
    COMPLETE_NOT_FRAME = "CompleteNotFrame"
    INCOMPLETE = "Incomplete"
    UNKNOWN = "Unknown"


EXACT = "exact"
NUMERIC = "numeric"
ALGEBRAIC = "algebraic"


@dataclass(frozen=True)
class Evidence:
    rule: str
    detail: Mapping
    kind: str = ALGEBRAIC

    def to_json(self) -> dict:
        return {"rule": self.rule, "kind": self.kind, "detail": dict(self.detail)}


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    confidence: str
    evidence: tuple[Evidence, ...] = ()
    riesz_subspace: bool = False
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.outcome is not Outcome.UNKNOWN and not self.evidence:
            raise ValueError("a decided verdict needs evidence")
        if self.confidence == EXACT and any(e.kind != ALGEBRAIC for e in self.evidence):
            raise ValueError("exact verdicts carry algebraic evidence only")

    @property
    def rule(self) -> str:
        """Name of the rule that decided the outcome (the last one consulted)."""
        return self.evidence[-1].rule if self.evidence else "none"

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "outcome": self.outcome.value,
            "confidence": self.confidence,
            "riesz_subspace": self.riesz_subspace,
            "evidence": [e.to_json() for e in self.evidence],
            "params": dict(self.params),
        }


@dataclass(frozen=True)
class AnalysisConfig:
    index_bound: int = cert.DEFAULT_INDEX_BOUND
    numeric_fallback: bool = False
    radius: float | None = None
    h: float | None = None
    T: float | None = None
    tol: float = 1e-8
    max_iter: int = 5000
    zak_resolution: int | None = None

    def __post_init__(self):
        if self.index_bound < 1:
            raise ValueError("index bound must be at least 1")


# default scan resolution and truncation radius per dimension
_ZAK_M = {1: 128, 2: 32, 3: 8}
_RADIUS = {1: 8.0, 2: 4.0}


# -- one-dimensional rule ------------------------------------------------------


def classify_1d(alpha, beta) -> Verdict:
    """Gaussian Gabor system on ``alpha Z x beta Z``.

    Frame iff ``alpha beta < 1``; complete but not a frame at ``alpha beta = 1``;
    otherwise incomplete and a Riesz basis for its span.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise NonPositive("lattice parameters must be positive")
    return _by_area(alpha * beta, {"alpha": format_rational(alpha), "beta": format_rational(beta)})


def _by_area(area: Fraction, detail: dict) -> Verdict:
    detail = dict(detail, density=format_rational(1 / area))
    if area < 1:
        outcome, riesz = Outcome.FRAME, False
    elif area == 1:
        outcome, riesz = Outcome.COMPLETE_NOT_FRAME, False
    else:
        outcome, riesz = Outcome.INCOMPLETE, True
    return Verdict(outcome, EXACT, (Evidence("one-dimensional-density", detail),), riesz)


def classify_plane(generator) -> Verdict:
    """A lattice in ``R^2`` is decided by its density; shape does not matter."""
    area = abs(exact.det(generator))
    return _by_area(area, {"generator": [[format_rational(x) for x in row] for row in generator]})


# -- tensor products -----------------------------------------------------------


def tensor_combine(verdicts: Sequence[Verdict]) -> Verdict:
    if not verdicts:
        raise ValueError("need at least one verdict")
    outcomes = [v.outcome for v in verdicts]
    if all(o is Outcome.FRAME for o in outcomes):
        outcome = Outcome.FRAME
    elif any(o is Outcome.INCOMPLETE for o in outcomes):
        outcome = Outcome.INCOMPLETE
    elif all(o in (Outcome.FRAME, Outcome.COMPLETE_NOT_FRAME) for o in outcomes):
        outcome = Outcome.COMPLETE_NOT_FRAME
    else:
        outcome = Outcome.UNKNOWN
    confidence = EXACT if all(v.confidence == EXACT for v in verdicts) else NUMERIC
    detail = {"factors": [v.outcome.value for v in verdicts]}
    kind = ALGEBRAIC if confidence == EXACT else NUMERIC
    evidence = tuple(e for v in verdicts for e in v.evidence) + (Evidence("tensor", detail, kind),)
    riesz = outcome is Outcome.INCOMPLETE and all(v.riesz_subspace for v in verdicts)
    return Verdict(outcome, confidence, evidence, riesz)


# -- helpers -------------------------------------------------------------------


def _coordinate_part(lattice: Lattice, keep: Sequence[int]):
    """Canonical basis of ``L`` intersected with the coordinate subspace ``keep``."""
    g = lattice.generator
    drop = [r for r in range(lattice.size) if r not in keep]
    constraints = []
    for r in drop:
        den = exact.common_denominator([g[r]])
        constraints.append([int(x * den) for x in g[r]])
    kernel = exact.integer_kernel(constraints, lattice.size)
    if not kernel or len(kernel[0]) != len(keep):
        return None
    pts = exact.matmul(g, kernel)
    return exact.rational_span_basis([pts[r] for r in keep], len(keep))


def _integer_type(lattice: Lattice) -> bool:
    """``L = T x T`` (time part equal to frequency part) with ``T`` integral unimodular.

    For d <= 3 every integral unimodular positive lattice is isometric to
    ``Z^d``, so ``L`` is the image of ``Z^{2d}`` under ``diag(B, B)`` with
    ``B`` orthogonal, which leaves the Gaussian invariant.
    """
    d = lattice.dim
    if lattice.abs_det != 1:
        return False
    tx = _coordinate_part(lattice, range(d))
    tw = _coordinate_part(lattice, range(d, 2 * d))
    if tx is None or tx != tw or abs(exact.det(tx)) != 1:
        return False
    gram = exact.matmul(exact.transpose(tx), tx)
    return exact.is_integral(gram) and abs(exact.det(gram)) == 1


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GABORLAB_THREADS", "1")))
    except ValueError:
        return 1


# -- main pipeline -------------------------------------------------------------


def classify(lattice: Lattice, cfg: AnalysisConfig | None = None, params: Mapping | None = None) -> Verdict:
    cfg = cfg or AnalysisConfig()
    d = lattice.dim
    if d > MAX_DIM:
        raise UnsupportedDimension(f"dimension {d} > {MAX_DIM} is not supported")
    params = dict(params or {})
    verdict = _classify(lattice, cfg)
    return replace(verdict, params=params)


def _classify(lattice: Lattice, cfg: AnalysisConfig) -> Verdict:
    d = lattice.dim
    chain: list[Evidence] = []

    source = lattice.gaussian_equivalent_to
    if source is not None:
        inner = _classify(source, cfg)
        ev = Evidence("symplectic-transfer", {"source_generator": _gen_json(source.generator)})
        kind_ok = inner.confidence == EXACT
        return replace(inner, evidence=(ev,) + inner.evidence if kind_ok else inner.evidence + (ev,))

    density = lattice.density
    if density < 1:
        chain.append(Evidence("density", {"density": format_rational(density), "result": "Incomplete"}))
        riesz = False
        groups = block_decomposition(lattice)
        if len(groups) > 1 or d == 1:
            riesz = _block_verdict(groups, d, cfg).riesz_subspace
        found = cert.search_incompleteness_certificate(lattice, cfg.index_bound)
        if found is not None:
            # corroborating; the density theorem already decides
            chain.insert(0, Evidence("coset-splitting", found.to_json()))
        return Verdict(Outcome.INCOMPLETE, EXACT, tuple(chain), riesz)
    chain.append(Evidence("density", {"density": format_rational(density), "result": "inconclusive"}))

    groups = block_decomposition(lattice)
    if len(groups) > 1 or d == 1:
        combined = _block_verdict(groups, d, cfg)
        if combined.outcome is not Outcome.UNKNOWN:
            return replace(combined, evidence=tuple(chain) + combined.evidence)
        chain.append(Evidence("tensor", {"result": "inconclusive",
                                         "factors": [e.rule for e in combined.evidence]}))

    frame = cert.certify_frame_by_sublattice(lattice, cfg.index_bound)
    if frame is not None:
        return Verdict(Outcome.FRAME, EXACT, tuple(chain) + (Evidence("frame-sublattice", frame.to_json()),))
    chain.append(Evidence("frame-sublattice", {"result": "none found", "index_bound": cfg.index_bound}))

    found = cert.search_incompleteness_certificate(lattice, cfg.index_bound)
    if found is not None:
        return Verdict(Outcome.INCOMPLETE, EXACT, tuple(chain) + (Evidence("coset-splitting", found.to_json()),))
    chain.append(Evidence("coset-splitting", {"result": "none found", "index_bound": cfg.index_bound}))

    cnf = cert.certify_complete_not_frame(lattice)
    if cnf is not None:
        return Verdict(Outcome.COMPLETE_NOT_FRAME, EXACT,
                       tuple(chain) + (Evidence("critical-cosets", cnf.to_json()),))
    chain.append(Evidence("critical-cosets", {"result": "not applicable"}))

    if _integer_type(lattice):
        from .numerics.signals import GaussianWindow
        from .numerics.zak import zak_frame_bounds_integer

        m = cfg.zak_resolution or _ZAK_M[d]
        zb = zak_frame_bounds_integer(GaussianWindow(d), m)
        chain.append(Evidence("integer-type-zak", dict(zb.to_json(), result="CompleteNotFrame"), NUMERIC))
        return Verdict(Outcome.COMPLETE_NOT_FRAME, NUMERIC, tuple(chain))

    if cfg.numeric_fallback:
        return _numeric(lattice, cfg, chain)
    return Verdict(Outcome.UNKNOWN, EXACT, tuple(chain))


def _block_verdict(groups, d: int, cfg: AnalysisConfig) -> Verdict:
    parts = []
    for axes, gen in groups:
        if len(axes) == 1:
            parts.append(classify_plane(gen))
        else:
            sub = _classify(make_lattice(gen), cfg)
            parts.append(sub)
    if len(parts) == 1:
        return parts[0]
    return tensor_combine(parts)


def _numeric(lattice: Lattice, cfg: AnalysisConfig, chain: list[Evidence]) -> Verdict:
    from .numerics.frames import POSITIVE, two_scale_test
    from .numerics.signals import GaussianWindow

    d = lattice.dim
    if d not in _RADIUS:
        chain.append(Evidence("numeric-two-scale", {"result": "skipped", "reason": "d = 3"}, NUMERIC))
        return Verdict(Outcome.UNKNOWN, NUMERIC, tuple(chain))
    R = cfg.radius or _RADIUS[d]
    res = two_scale_test(GaussianWindow(d), lattice, R, cfg.h, cfg.T, tol=cfg.tol, max_iter=cfg.max_iter)
    chain.append(Evidence("numeric-two-scale", res.to_json(), NUMERIC))
    outcome = Outcome.FRAME if res.status == POSITIVE else Outcome.UNKNOWN
    return Verdict(outcome, NUMERIC, tuple(chain))


def _gen_json(g) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in g]


# -- phase diagrams ------------------------------------------------------------


@dataclass(frozen=True)
class PhaseCell:
    params: Mapping[str, Fraction]
    verdict: Verdict


def phase_diagram(
    family: str,
    grid: Mapping[str, Sequence],
    cfg: AnalysisConfig | None = None,
    threads: int | None = None,
) -> list[PhaseCell]:
    """Classify every cell of the parameter grid, in grid order.

    ``grid`` maps each family parameter to its list of values; cells are
    enumerated with the first parameter varying slowest. Cells are evaluated
    on up to ``threads`` workers (default ``GABORLAB_THREADS`` or 1) and
    returned in grid order, so the result does not depend on scheduling.
    """
    if family not in PHASE_FAMILIES:
        get_family(family)                      # raises UnknownFamily for unknown names
        raise ValueError(f"phase diagrams support {PHASE_FAMILIES}, not {family!r}")
    fam = get_family(family)
    missing = [p for p in fam.params if p not in grid]
    if missing:
        raise ValueError(f"grid lacks parameters {missing}")
    cfg = cfg or AnalysisConfig()
    names = list(fam.params)
    cells = [dict(zip(names, vals)) for vals in itertools.product(*(grid[n] for n in names))]

    def run(values):
        vals = {k: Fraction(v) for k, v in values.items()}
        lattice = build_family(family, vals)
        v = classify(lattice, cfg, {k: format_rational(x) for k, x in vals.items()})
        return PhaseCell(vals, v)

    workers = threads or _threads()
    if workers == 1:
        return [run(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, cells))


def phase_csv(cells: Sequence[PhaseCell]) -> str:
    if not cells:
        return ""
    names = list(cells[0].params)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names + ["outcome", "confidence", "rule"])
    for c in cells:
        w.writerow([format_rational(c.params[n]) for n in names]
                   + [c.verdict.outcome.value, c.verdict.confidence, c.verdict.rule])
    return buf.getvalue()
