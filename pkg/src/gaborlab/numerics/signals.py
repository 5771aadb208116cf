"""Gaussian window, sampled signals, STFT and Bargmann transform by quadrature."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import DimensionMismatch, GridTooCoarse

# (h, T) per dimension; the Gaussian tail beyond T is below 1e-15.
DEFAULT_GRID = {1: (1 / 16, 6.0), 2: (1 / 8, 4.0), 3: (1 / 6, 3.0)}
MAX_STEP = 0.25


def default_grid(d: int) -> tuple[float, float]:
    return DEFAULT_GRID.get(d, DEFAULT_GRID[3])


def check_step(h: float) -> None:
    if h > MAX_STEP:
        raise GridTooCoarse(f"grid step {h} exceeds {MAX_STEP}")


def check_band(h: float, radius: float) -> None:
    """Frequency shifts up to ``radius`` must sit below the Nyquist limit."""
    check_step(h)
    if radius > 1 / (2 * h) + 1e-12:
        raise GridTooCoarse(f"truncation radius {radius} exceeds 1/(2h) = {1 / (2 * h)}")


@dataclass(frozen=True)
class GaussianWindow:
    """``g_d(x) = 2^{d/4} exp(-pi |x|^2)``, unit norm in L^2(R^d)."""

    d: int = 1

    def __call__(self, x) -> np.ndarray:
        return window_eval(self, x)


def gaussian_1d(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return 2 ** 0.25 * np.exp(-np.pi * t * t)


def window_eval(g: GaussianWindow, x) -> np.ndarray | float:
    """Evaluate the window at points ``x`` of shape ``(..., d)`` (or scalars for d = 1)."""
    x = np.asarray(x, dtype=float)
    if g.d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        sq = x * x
    else:
        if x.shape[-1] != g.d:
            raise DimensionMismatch(f"expected points with last axis {g.d}, got {x.shape}")
        sq = np.sum(x * x, axis=-1)
    out = 2 ** (g.d / 4) * np.exp(-np.pi * sq)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class TFPoint:
    x: tuple[float, ...]
    omega: tuple[float, ...]

    def __post_init__(self):
        if len(self.x) != len(self.omega):
            raise DimensionMismatch("time and frequency parts differ in length")
        if not np.all(np.isfinite(self.x + self.omega)):
            raise ValueError("time-frequency point must be finite")

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "TFPoint":
        v = [float(a) for a in v]
        d = len(v) // 2
        return cls(tuple(v[:d]), tuple(v[d:]))

    @property
    def d(self) -> int:
        return len(self.x)

    def as_vector(self) -> np.ndarray:
        return np.array(self.x + self.omega, dtype=float)


def axis_points(h: float, T: float) -> np.ndarray:
    n = 2 * T / h
    if abs(n - round(n)) > 1e-9 * max(1.0, n):
        raise ValueError(f"2T/h = {n} is not an integer")
    return -T + h * np.arange(int(round(n)) + 1)


def trapezoid_weights(h: float, n: int) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = h / 2
    return w


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Samples of a function on ``{-T, -T + h, ..., T}^d``."""

    d: int
    h: float
    T: float
    samples: np.ndarray

    def __post_init__(self):
        n = len(axis_points(self.h, self.T))
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (n,) * self.d:
            raise ValueError(f"samples have shape {s.shape}, expected {(n,) * self.d}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, fn: Callable, d: int, h: float, T: float) -> "SampledSignal":
        """Sample ``fn`` which takes an array of points with last axis ``d``."""
        ax = axis_points(h, T)
        mesh = np.stack(np.meshgrid(*([ax] * d), indexing="ij"), axis=-1)
        vals = fn(mesh)
        return cls(d, h, T, np.asarray(vals, dtype=complex).reshape((len(ax),) * d))

    @classmethod
    def gaussian(cls, d: int, h: float | None = None, T: float | None = None) -> "SampledSignal":
        dh, dT = default_grid(d)
        h = dh if h is None else h
        T = dT if T is None else T
        return cls.from_function(lambda p: window_eval(GaussianWindow(d), p), d, h, T)

    @property
    def axis(self) -> np.ndarray:
        return axis_points(self.h, self.T)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    def weights(self) -> np.ndarray:
        return trapezoid_weights(self.h, self.n)

    def inner(self, other: "SampledSignal") -> complex:
        """Quadrature of ``f * conj(other)``."""
        self._check_same_grid(other)
        return complex(_contract(self.samples * np.conj(other.samples), [self.weights()] * self.d))

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self).real))

    def scaled(self, alpha: complex) -> "SampledSignal":
        return SampledSignal(self.d, self.h, self.T, alpha * self.samples)

    def _check_same_grid(self, other: "SampledSignal") -> None:
        if (self.d, self.n) != (other.d, other.n) or abs(self.h - other.h) > 1e-15:
            raise DimensionMismatch("signals live on different grids")


def _contract(arr: np.ndarray, vectors: Sequence[np.ndarray]) -> complex:
    out = arr
    for v in vectors:
        out = np.tensordot(v, out, axes=([0], [0]))
    return out


def atom_table(axis: np.ndarray, x: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Samples of ``M_omega T_x g_1`` on ``axis`` for each (x, omega) pair, shape (P, n)."""
    x = np.asarray(x, dtype=float)[:, None]
    w = np.asarray(omega, dtype=float)[:, None]
    return gaussian_1d(axis[None, :] - x) * np.exp(2j * np.pi * w * axis[None, :])


def _analysis(f: SampledSignal, points: np.ndarray) -> np.ndarray:
    """Quadrature of <f, pi(lambda) g_d> for every row of ``points`` (shape (P, 2d))."""
    d = f.d
    ax = f.axis
    w = f.weights()
    tables = [np.conj(atom_table(ax, points[:, i], points[:, d + i])) * w for i in range(d)]
    s = f.samples
    if d == 1:
        return tables[0] @ s
    n = f.n
    first = tables[0] @ s.reshape(n, -1)                    # (P, n^{d-1})
    if d == 2:
        return np.einsum("pj,pj->p", first, tables[1])
    first = first.reshape(-1, n, n)
    return np.einsum("pjk,pj,pk->p", first, tables[1], tables[2])


def stft(f: SampledSignal, g: GaussianWindow, points) -> np.ndarray:
    """Vectorised :func:`stft_point` over an array of shape (P, 2d)."""
    if g.d != f.d:
        raise DimensionMismatch("window and signal dimensions differ")
    check_step(f.h)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 2 * f.d:
        raise DimensionMismatch(f"points must have {2 * f.d} coordinates")
    return _analysis(f, pts)


def stft_point(f: SampledSignal, g: GaussianWindow, lam: TFPoint) -> complex:
    """Trapezoidal quadrature of ``∫ f(t) e^{-2πi ω·t} g(t - x) dt``."""
    if lam.d != f.d:
        raise DimensionMismatch("time-frequency point and signal dimensions differ")
    return complex(stft(f, g, lam.as_vector()[None, :])[0])


def stft_grid(f: SampledSignal, g: GaussianWindow, xs, omegas) -> np.ndarray:
    """STFT on the tensor grid ``(xs x omegas)^d``.

    Returns an array indexed ``[x_1, w_1, x_2, w_2, ...]``.
    """
    if g.d != f.d:
        raise DimensionMismatch("window and signal dimensions differ")
    check_step(f.h)
    xs = np.asarray(xs, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    X, W = np.meshgrid(xs, omegas, indexing="ij")
    table = np.conj(atom_table(f.axis, X.ravel(), W.ravel())) * f.weights()
    out = f.samples
    for _ in range(f.d):
        out = np.tensordot(table, out, axes=([1], [0]))     # contracts the leading time axis
        out = np.moveaxis(out, 0, -1)
    return out.reshape((len(xs), len(omegas)) * f.d)


BARGMANN_STANDARD = "standard"
BARGMANN_IMAGINARY = "imaginary-exponent"


def bargmann_point(f: SampledSignal, z: Sequence[complex], convention: str = BARGMANN_STANDARD) -> complex:
    """Quadrature of the Bargmann transform, coordinate by coordinate.

    ``standard``: kernel ``2^{1/4} exp(2π t z - π t^2 - π z^2 / 2)`` per axis.
    ``imaginary-exponent``: the same with ``2π i t z`` in the exponent; it is
    kept so the relation check can show that only the standard kernel
    satisfies ``|V_g f(x, -ξ)| = |Bf(x + iξ)| e^{-π|x + iξ|^2 / 2}``.
    """
    check_step(f.h)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (f.d,):
        raise DimensionMismatch(f"expected {f.d} complex coordinates")
    ax = f.axis
    w = f.weights()
    vecs = []
    for zi in z:
        lin = 2j * np.pi * ax * zi if convention == BARGMANN_IMAGINARY else 2 * np.pi * ax * zi
        if convention not in (BARGMANN_STANDARD, BARGMANN_IMAGINARY):
            raise ValueError(f"unknown convention {convention!r}")
        vecs.append(w * 2 ** 0.25 * np.exp(lin - np.pi * ax * ax - np.pi * zi * zi / 2))
    return complex(_contract(f.samples, vecs))
