"""Named lattice families and the plain-text lattice format.

Text format::

    2
    1 0 0   0
    0 1 0   0
    0 0 1/2 1/2
    0 0 -1/2 1/2

i.e. ``d`` on the first line followed by ``2d`` rows of ``2d`` rational
literals. A single line naming a family is accepted too::

    skew a=0.7 b=0.7
    sep d=2 a=1/2 b=1/2
    cor6 k=3 a=0.4 b=0.7
    threed a=0.4 b=0.4 c=0.9
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping

from .errors import NonPositive, ParseError, UnknownFamily
from .exact import parse_rational
from .lattice import Lattice, make_lattice


def _diag(values):
    n = len(values)
    return [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _blockdiag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for r, row in enumerate(b):
            for c, v in enumerate(row):
                out[off + r][off + c] = Fraction(v)
        off += len(b)
    return out


def separable(*params) -> Lattice:
    """Z^d x diag(params) Z^d."""
    d = len(params)
    return make_lattice(_blockdiag(_diag([1] * d), _diag(list(params))))


def skew(a, b) -> Lattice:
    """Z^2 x [[a, a], [-b, b]] Z^2."""
    a, b = Fraction(a), Fraction(b)
    return make_lattice(_blockdiag(_diag([1, 1]), [[a, a], [-b, b]]))


def cor6(k, a, b) -> Lattice:
    """[[a k, a], [0, b]] Z^2 x Z^2."""
    k, a, b = int(k), Fraction(a), Fraction(b)
    return make_lattice(_blockdiag([[a * k, a], [0, b]], _diag([1, 1])))


def threed(a, b, c) -> Lattice:
    """Z^3 x [[a, a, 0], [-b, b, 0], [0, 0, c]] Z^3."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    return make_lattice(_blockdiag(_diag([1, 1, 1]), [[a, a, 0], [-b, b, 0], [0, 0, c]]))


def integer_lattice(d: int) -> Lattice:
    return make_lattice(_diag([1] * (2 * d)))


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[str, ...]
    build: Callable[..., Lattice]
    integer_params: tuple[str, ...] = ()

    def __call__(self, **values) -> Lattice:
        missing = [p for p in self.params if p not in values]
        if missing:
            raise ParseError(f"family {self.name!r} needs parameters {missing}")
        args = []
        for p in self.params:
            v = values[p]
            if p in self.integer_params:
                v = Fraction(v)
                if v.denominator != 1 or v < 1:
                    raise ParseError(f"{p} must be a positive integer, got {v}")
                args.append(int(v))
            else:
                v = Fraction(v)
                if v <= 0:
                    raise NonPositive(f"{p} must be positive, got {v}")
                args.append(v)
        return self.build(*args)


FAMILIES: dict[str, Family] = {
    "sep1d": Family("sep1d", ("a",), separable),
    "sep2d": Family("sep2d", ("a", "b"), separable),
    "sep3d": Family("sep3d", ("a", "b", "c"), separable),
    "skew": Family("skew", ("a", "b"), skew),
    "cor6": Family("cor6", ("k", "a", "b"), cor6, integer_params=("k",)),
    "threed": Family("threed", ("a", "b", "c"), threed),
}


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownFamily(f"unknown family {name!r}; known: {sorted(FAMILIES)}") from None


def build_family(name: str, values: Mapping[str, object]) -> Lattice:
    fam = get_family(name)
    extra = sorted(set(values) - set(fam.params))
    if extra:
        raise ParseError(f"family {name!r} does not take parameters {extra}")
    parsed = {}
    for key, v in values.items():
        parsed[key] = parse_rational(v) if isinstance(v, str) else Fraction(v)
    return fam(**parsed)


def _parse_shorthand(line: str) -> Lattice:
    head, *rest = line.split()
    kv = {}
    for tok in rest:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        kv[key] = val
    if head == "sep":
        d = kv.pop("d", "2")
        if d not in ("1", "2", "3"):
            raise ParseError("sep family supports d = 1, 2, 3")
        return build_family(f"sep{d}d", kv)
    return build_family(head, kv)


def parse_lattice_text(text: str) -> Lattice:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty lattice description")
    first = lines[0].split()
    if first[0][0].isalpha():
        if len(lines) != 1:
            raise ParseError("family shorthand must be a single line")
        return _parse_shorthand(lines[0])
    try:
        d = int(lines[0])
    except ValueError:
        raise ParseError(f"first line must be the dimension d, got {lines[0]!r}") from None
    if d < 1:
        raise ParseError("dimension must be positive")
    rows = [[parse_rational(tok) for tok in ln.split()] for ln in lines[1:]]
    if len(rows) != 2 * d or any(len(r) != 2 * d for r in rows):
        raise ParseError(f"expected {2 * d} rows of {2 * d} entries")
    return make_lattice(rows)


def read_lattice(path: str | Path) -> Lattice:
    return parse_lattice_text(Path(path).read_text())


def format_lattice_text(lattice: Lattice) -> str:
    lines = [str(lattice.dim)]
    lines += [" ".join(str(x) for x in row) for row in lattice.generator]
    return "\n".join(lines) + "\n"
