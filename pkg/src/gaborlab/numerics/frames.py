"""Truncated frame operators, frame bound estimates and Gram matrices.

Frame bounds are estimated on a trial space of Hermite functions whose
phase-space footprint lies inside the ball of radius ``R / 2``: for such
``f`` the atoms with ``|lambda| <= R`` carry essentially all of
``sum |<f, pi(lambda) g>|^2``, so the truncated quadratic form is a faithful
restriction of the full frame operator. Restricting in time alone would
include functions with unbounded frequency content and make every lattice
look like a non-frame.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import linalg

from ..errors import DimensionMismatch, EmptyTruncation, NoConvergence
from ..lattice import Lattice
from .signals import (
    GaussianWindow,
    SampledSignal,
    atom_table,
    axis_points,
    check_band,
    default_grid,
    trapezoid_weights,
)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 5000
ATOM_CHUNK = 2048

POSITIVE_LOWER = 1e-2
VANISHING_LOWER = 1e-3
RATIO_THRESHOLD = 0.5
NOISE_FLOOR = 1e-10


def _atoms(lattice: Lattice, R: float) -> np.ndarray:
    pts = lattice.points_in_ball(R)
    if len(pts) == 0:
        raise EmptyTruncation(f"no lattice points within radius {R}")
    return pts


def frame_operator_apply(
    g: GaussianWindow, lattice: Lattice, R: float, f: SampledSignal
) -> SampledSignal:
    """``S_R f = sum_{|lambda| <= R} <f, pi(lambda) g> pi(lambda) g`` on the grid of ``f``."""
    if g.d != f.d or lattice.dim != f.d:
        raise DimensionMismatch("window, lattice and signal dimensions differ")
    check_band(f.h, R)
    pts = _atoms(lattice, R)
    d, ax, w = f.d, f.axis, f.weights()
    out = np.zeros_like(f.samples)
    for start in range(0, len(pts), ATOM_CHUNK):
        chunk = pts[start:start + ATOM_CHUNK]
        tables = [atom_table(ax, chunk[:, i], chunk[:, d + i]) for i in range(d)]
        coef = _coefficients(f.samples, [np.conj(t) * w for t in tables])
        if d == 1:
            out += coef @ tables[0]
        elif d == 2:
            out += np.einsum("p,pi,pj->ij", coef, tables[0], tables[1])
        else:
            out += np.einsum("p,pi,pj,pk->ijk", coef, *tables)
    return SampledSignal(f.d, f.h, f.T, out)


def _coefficients(samples: np.ndarray, conj_tables) -> np.ndarray:
    if len(conj_tables) == 1:
        return conj_tables[0] @ samples
    first = conj_tables[0] @ samples.reshape(samples.shape[0], -1)
    rest = first.reshape((first.shape[0],) + samples.shape[1:])
    if len(conj_tables) == 2:
        return np.einsum("pj,pj->p", rest, conj_tables[1])
    return np.einsum("pjk,pj,pk->p", rest, conj_tables[1], conj_tables[2])


# -- trial space ---------------------------------------------------------------


def hermite_functions(t: np.ndarray, n_max: int) -> np.ndarray:
    """L^2-normalised Hermite functions ``h_0 .. h_{n_max}`` adapted to ``g_1 = h_0``.

    Row ``n`` holds ``(2π)^{1/4} φ_n(√(2π) t)`` with the physicists' functions
    ``φ_n`` from the three-term recurrence.
    """
    x = math.sqrt(2 * math.pi) * np.asarray(t, dtype=float)
    out = np.empty((n_max + 1, len(x)))
    out[0] = math.pi ** -0.25 * np.exp(-x * x / 2)
    if n_max >= 1:
        out[1] = math.sqrt(2) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2 / (n + 1)) * x * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out * (2 * math.pi) ** 0.25


def trial_degree(R: float) -> int:
    """Largest total Hermite degree whose phase-space radius stays below R / 2."""
    rho = R / 2
    return int(math.floor(math.pi * rho * rho + 1e-12))


def trial_indices(d: int, degree: int) -> np.ndarray:
    return np.array([nu for nu in itertools.product(range(degree + 1), repeat=d)
                     if sum(nu) <= degree], dtype=int)


def _orthonormal_axis_basis(ax: np.ndarray, w: np.ndarray, degree: int) -> np.ndarray:
    """Hermite samples orthonormalised for the trapezoid inner product (rows)."""
    H = hermite_functions(ax, degree)
    sw = np.sqrt(w)
    q, r = np.linalg.qr((H * sw).T)
    q = q * np.sign(np.diag(r))                         # keep h_n orientation
    return (q / sw[:, None]).T


def trial_frame_matrix(
    g: GaussianWindow, lattice: Lattice, R: float, h: float, T: float
) -> tuple[np.ndarray, int]:
    """Matrix of the truncated frame operator on the Hermite trial space.

    Returns ``(Q, atoms)`` with ``Q = Phi^H Phi`` and
    ``Phi[p, nu] = <h_nu, pi(lambda_p) g>``, accumulated over atom chunks.
    """
    d = lattice.dim
    if g.d != d:
        raise DimensionMismatch("window and lattice dimensions differ")
    check_band(h, R)
    pts = _atoms(lattice, R)
    ax = axis_points(h, T)
    w = trapezoid_weights(h, len(ax))
    degree = trial_degree(R)
    basis = _orthonormal_axis_basis(ax, w, degree)          # (degree+1, n)
    nus = trial_indices(d, degree)
    Q = np.zeros((len(nus), len(nus)), dtype=complex)
    for start in range(0, len(pts), ATOM_CHUNK):
        chunk = pts[start:start + ATOM_CHUNK]
        phi = np.ones((len(chunk), len(nus)), dtype=complex)
        for i in range(d):
            table = np.conj(atom_table(ax, chunk[:, i], chunk[:, d + i])) * w   # (P, n)
            coeff = table @ basis.T                                               # (P, degree+1)
            phi *= coeff[:, nus[:, i]]
        Q += phi.conj().T @ phi
    return (Q + Q.conj().T) / 2, len(pts)


# -- iterative bounds ----------------------------------------------------------


@dataclass(frozen=True)
class FrameBoundsEstimate:
    A_est: float
    B_est: float
    R: float
    h: float
    T: float
    residual_A: float
    residual_B: float
    iterations: int
    converged: bool
    trial_dim: int
    atoms: int

    @property
    def residual(self) -> float:
        return max(self.residual_A, self.residual_B)

    def flags(self) -> list[str]:
        out = [] if self.converged else ["not-converged"]
        if self.A_est < NOISE_FLOOR:
            out.append("lower-bound-at-noise-floor")
        return out

    def to_json(self, extra_flags: tuple[str, ...] = ()) -> dict:
        out = asdict(self)
        out["residual"] = self.residual
        out["classification_flags"] = self.flags() + list(extra_flags)
        return out


BLOCK_SIZE = 12


def _start_block(n: int, k: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return np.linalg.qr(v)[0]


def _subspace_iteration(apply, Q: np.ndarray, V: np.ndarray, pick_top: bool,
                        scale, tol: float, max_iter: int):
    """Block power iteration on ``apply`` with Rayleigh-Ritz on ``Q``.

    Returns the extreme Ritz value of ``Q`` (largest if ``pick_top``), its
    residual ``|Q v - theta v| / scale`` and the iteration count. Working
    with a block rather than a single vector keeps the convergence rate
    usable when the extreme eigenvalues are clustered.
    """
    theta, res = 0.0, np.inf
    for it in range(1, max_iter + 1):
        V = np.linalg.qr(apply(V))[0]
        QV = Q @ V
        evals, evecs = linalg.eigh(V.conj().T @ QV)
        j = -1 if pick_top else 0
        theta = float(evals[j])
        v, qv = V @ evecs[:, j], QV @ evecs[:, j]
        res = float(np.linalg.norm(qv - theta * v)) / scale(theta)
        if res < tol:
            return theta, res, it
    return theta, res, max_iter


def frame_bounds_estimate(
    g: GaussianWindow,
    lattice: Lattice,
    R: float,
    h: float | None = None,
    T: float | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
) -> FrameBoundsEstimate:
    """Extreme eigenvalues of the truncated frame operator on the trial space.

    ``B_est`` comes from (block) power iteration and ``A_est`` from (block)
    inverse iteration with a tiny positive shift, both started from the same
    seeded random block. Residuals are relative to ``B_est``.
    """
    dh, dT = default_grid(lattice.dim)
    h = dh if h is None else h
    T = dT if T is None else T
    Q, n_atoms = trial_frame_matrix(g, lattice, R, h, T)
    n = len(Q)
    V0 = _start_block(n, min(n, BLOCK_SIZE), seed)
    B, res_B, it_B = _subspace_iteration(lambda V: Q @ V, Q, V0, True,
                                         lambda th: max(th, 1e-300), tol, max_iter)
    scale = max(B, 1e-300)
    factor = linalg.cho_factor(Q + 1e-13 * scale * np.eye(n), lower=True)
    A, res_A, it_A = _subspace_iteration(lambda V: linalg.cho_solve(factor, V), Q, V0, False,
                                         lambda th: scale, tol, max_iter)
    converged = bool(res_A < tol and res_B < tol)
    return FrameBoundsEstimate(
        A_est=max(A, 0.0), B_est=B, R=float(R), h=float(h), T=float(T),
        residual_A=float(res_A), residual_B=float(res_B), iterations=max(it_A, it_B),
        converged=converged, trial_dim=n, atoms=n_atoms,
    )


def frame_bounds_dense(
    g: GaussianWindow, lattice: Lattice, R: float, h: float | None = None, T: float | None = None
) -> tuple[float, float]:
    """Reference values of the same bounds from a dense eigensolver."""
    dh, dT = default_grid(lattice.dim)
    Q, _ = trial_frame_matrix(g, lattice, R, dh if h is None else h, dT if T is None else T)
    ev = linalg.eigvalsh(Q)
    return float(max(ev[0], 0.0)), float(ev[-1])


# -- two-scale test ------------------------------------------------------------


POSITIVE = "positive"
VANISHING = "vanishing"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TwoScaleResult:
    coarse: FrameBoundsEstimate
    fine: FrameBoundsEstimate
    ratio: float
    status: str

    def to_json(self) -> dict:
        flag = (f"two-scale-{self.status}",)
        return {"coarse": self.coarse.to_json(flag), "fine": self.fine.to_json(flag),
                "ratio": self.ratio, "status": self.status}


def two_scale_status(A_coarse: float, A_fine: float) -> tuple[float, str]:
    ratio = A_fine / A_coarse if A_coarse > 0 else 0.0
    if A_fine > POSITIVE_LOWER and ratio > RATIO_THRESHOLD:
        return ratio, POSITIVE
    # at the noise floor the ratio carries no information
    if A_fine < VANISHING_LOWER and (ratio < RATIO_THRESHOLD or A_fine < NOISE_FLOOR):
        return ratio, VANISHING
    return ratio, INCONCLUSIVE


def two_scale_test(
    g: GaussianWindow,
    lattice: Lattice,
    R: float,
    h: float | None = None,
    T: float | None = None,
    **kwargs,
) -> TwoScaleResult:
    """Estimate at ``R`` on ``(h, T)`` and at ``2R`` on ``(h/2, 2T)``."""
    dh, dT = default_grid(lattice.dim)
    h = dh if h is None else h
    T = dT if T is None else T
    coarse = frame_bounds_estimate(g, lattice, R, h, T, **kwargs)
    fine = frame_bounds_estimate(g, lattice, 2 * R, h / 2, 2 * T, **kwargs)
    ratio, status = two_scale_status(coarse.A_est, fine.A_est)
    return TwoScaleResult(coarse, fine, ratio, status)


# -- Gram matrix ---------------------------------------------------------------


def gram_matrix(
    g: GaussianWindow,
    lattice: Lattice,
    R: float,
    h: float | None = None,
    T: float | None = None,
    method: str = "closed-form",
) -> np.ndarray:
    """``G[p, q] = <pi(lambda_q) g, pi(lambda_p) g>`` for ``|lambda| <= R``.

    ``closed-form`` uses the Gaussian formula of :func:`gram_entry_exact`;
    ``quadrature`` integrates on the sample grid, which needs frequency
    differences up to ``2R`` resolved, i.e. ``2R <= 1/(2h)``.
    """
    d = lattice.dim
    if g.d != d:
        raise DimensionMismatch("window and lattice dimensions differ")
    pts = _atoms(lattice, R)
    if method == "closed-form":
        x, w = pts[:, :d], pts[:, d:]
        diff = pts[:, None, :] - pts[None, :, :]
        sq = np.einsum("pqk,pqk->pq", diff, diff)
        phase = np.einsum("qk,pk->pq", w, x) - np.einsum("pk,qk->pq", w, x)
        phase += np.einsum("qk,qk->q", w, x)[None, :] - np.einsum("pk,pk->p", w, x)[:, None]
        return np.exp(-np.pi * sq / 2) * np.exp(1j * np.pi * phase)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    dh, dT = default_grid(d)
    h = dh if h is None else h
    T = dT if T is None else T
    check_band(h, 2 * R)
    ax = axis_points(h, T)
    wts = trapezoid_weights(h, len(ax))
    G = np.ones((len(pts), len(pts)), dtype=complex)
    for i in range(d):
        a = atom_table(ax, pts[:, i], pts[:, d + i])
        G *= (np.conj(a) * wts) @ a.T
    return (G + G.conj().T) / 2


def gram_smallest_eig(
    g: GaussianWindow,
    lattice: Lattice,
    R: float,
    h: float | None = None,
    T: float | None = None,
    method: str = "closed-form",
) -> float:
    """Smallest eigenvalue of the truncated Gram matrix; bounded away from zero
    under growing ``R`` iff the system is a Riesz sequence."""
    G = gram_matrix(g, lattice, R, h, T, method)
    return float(linalg.eigvalsh(G, subset_by_index=[0, 0])[0])


def gram_entry_exact(lam, mu) -> complex:
    """Closed form of ``<pi(lambda) g, pi(mu) g>`` for the Gaussian window."""
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    d = len(lam) // 2
    x, w = lam[:d], lam[d:]
    y, e = mu[:d], mu[d:]
    diff = lam - mu
    return complex(np.exp(-np.pi * diff @ diff / 2) * np.exp(1j * np.pi * (w - e) @ (x + y)))


def ensure_converged(est: FrameBoundsEstimate) -> FrameBoundsEstimate:
    if not est.converged:
        raise NoConvergence(f"frame bound iteration stopped at residual {est.residual:.3g}")
    return est
