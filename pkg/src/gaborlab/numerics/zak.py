"""Zak transform of the Gaussian and of sampled signals."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import DimensionMismatch
from .signals import GaussianWindow, SampledSignal, gaussian_1d

DEFAULT_TERMS = 12


def zak_point(f, x: Sequence[float], omega: Sequence[float], K: int = DEFAULT_TERMS) -> complex:
    """``sum_{k in {-K..K}^d} f(x - k) e^{2πi k·ω}``.

    For a :class:`GaussianWindow` the terms are evaluated in closed form; for
    a :class:`SampledSignal` every ``x - k`` must fall on the sample grid (or
    outside it, where the signal is taken to be zero).
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    d = f.d
    if x.shape != (d,) or omega.shape != (d,):
        raise DimensionMismatch(f"expected {d} time and {d} frequency coordinates")
    ks = np.array(list(itertools.product(range(-K, K + 1), repeat=d)), dtype=float)
    phase = np.exp(2j * np.pi * ks @ omega)
    shifted = x[None, :] - ks
    if isinstance(f, GaussianWindow):
        vals = 2 ** (d / 4) * np.exp(-np.pi * np.sum(shifted * shifted, axis=1))
    else:
        vals = _lookup(f, shifted)
    return complex(np.sum(vals * phase))


def _lookup(f: SampledSignal, pts: np.ndarray) -> np.ndarray:
    idx_f = (pts + f.T) / f.h
    idx = np.rint(idx_f)
    if np.any(np.abs(idx_f - idx) > 1e-9):
        raise ValueError("zak_point on a sampled signal needs x - k on the sample grid")
    idx = idx.astype(int)
    inside = np.all((idx >= 0) & (idx < f.n), axis=1)
    out = np.zeros(len(pts), dtype=complex)
    if inside.any():
        out[inside] = f.samples[tuple(idx[inside].T)]
    return out


def zak_gaussian_1d(x, omega, K: int = DEFAULT_TERMS) -> np.ndarray:
    """Closed-form series for ``Z g_1`` on broadcast arrays ``x``, ``omega``."""
    x = np.asarray(x, dtype=float)[..., None]
    omega = np.asarray(omega, dtype=float)[..., None]
    k = np.arange(-K, K + 1, dtype=float)
    return np.sum(gaussian_1d(x - k) * np.exp(2j * np.pi * k * omega), axis=-1)


def scan_axis(m: int, offset: float = 0.0) -> np.ndarray:
    return np.arange(m) / m + offset


def zak_grid(g: GaussianWindow, m: int, offset: float = 0.0, K: int = DEFAULT_TERMS) -> np.ndarray:
    """``Z g_d`` on the uniform grid ``(j/m + offset)`` over ``[0,1)^{2d}``.

    Indexed ``[x_1, ..., x_d, w_1, ..., w_d]``. The d-dimensional Gaussian
    summand is a product over coordinates, so the series is evaluated as the
    product of one-dimensional series.
    """
    u = scan_axis(m, offset)
    table = zak_gaussian_1d(u[:, None], u[None, :], K)       # [x, w]
    d = g.d
    out = table
    for _ in range(d - 1):
        out = np.multiply.outer(out, table)
    # axes now (x1, w1, x2, w2, ...) -> (x1..xd, w1..wd)
    order = [2 * i for i in range(d)] + [2 * i + 1 for i in range(d)]
    return np.transpose(out, order)


@dataclass(frozen=True)
class ZakScan:
    d: int
    m: int
    offset: float
    min_modulus: float
    argmin: tuple[float, ...]
    max_modulus: float
    values: np.ndarray = None

    def coords(self) -> np.ndarray:
        return scan_axis(self.m, self.offset)


def zak_min_scan(g: GaussianWindow, m: int, offset: float = 0.0, K: int = DEFAULT_TERMS) -> ZakScan:
    if m < 8:
        raise ValueError("scan resolution m must be at least 8")
    z = np.abs(zak_grid(g, m, offset, K))
    flat = int(np.argmin(z))
    where = np.unravel_index(flat, z.shape)
    u = scan_axis(m, offset)
    return ZakScan(g.d, m, offset, float(z.flat[flat]), tuple(float(u[i]) for i in where),
                   float(z.max()), z)


@dataclass(frozen=True)
class ZakBounds:
    A: float
    B: float
    m: int

    def to_json(self) -> dict:
        return {"A": self.A, "B": self.B, "m": self.m}


def zak_frame_bounds_integer(g: GaussianWindow, m: int, K: int = DEFAULT_TERMS) -> ZakBounds:
    """Grid estimates of ess inf / ess sup of ``|Z g_d|^2``.

    For the integer lattice these are the optimal frame bounds, so a minimum
    tending to zero under refinement shows the system is not a frame.
    """
    scan = zak_min_scan(g, m, 0.0, K)
    return ZakBounds(scan.min_modulus ** 2, scan.max_modulus ** 2, m)


def write_scan_csv(scan: ZakScan, path: str | Path) -> None:
    u = scan.coords()
    d = scan.d
    header = [f"x{i + 1}" for i in range(d)] + [f"omega{i + 1}" for i in range(d)] + ["abs_Z"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for idx in itertools.product(range(scan.m), repeat=2 * d):
            w.writerow([f"{u[i]:.10g}" for i in idx] + [f"{scan.values[idx]:.12e}"])
