"""Fourier symbols, frequency sampling, and the LFA eigenvalue bounds.

Frequencies live in Theta_h = (-pi/h_1, pi/h_1] x ... per axis; for
triangular geometry the components are reciprocal-basis coordinates with
the common scalar width, so every formula below treats both geometries
identically.  Coarsening by 2^k declares the centered box of half-width
pi/(2^k h_d) "low"; everything else is "high".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .stencils import GridGeometry, Stencil

JACOBI = "jacobi"
L1_JACOBI = "l1_jacobi"
PRECONDITIONERS = (JACOBI, L1_JACOBI)

#: symmetric stencils must produce symbols with imaginary part below this
REAL_SYMBOL_TOL = 1e-12


def evaluate_symbol(stencil: Stencil, theta: np.ndarray) -> np.ndarray:
    """Symbol sum_j c_j exp(i theta . (h*offset_j)) at frequencies theta.

    ``theta`` has shape (..., d); the result drops the last axis.
    """
    theta = np.asarray(theta, dtype=float)
    scaled = stencil.offset_array * np.asarray(stencil.geometry.h)
    phase = theta @ scaled.T
    return np.exp(1j * phase) @ stencil.coefficient_array.astype(complex)


def preconditioner_symbol(stencil: Stencil, kind: str) -> float:
    """Constant-coefficient diagonal preconditioner: a scalar.

    Jacobi uses the center coefficient; l1-Jacobi adds the absolute
    off-center mass.
    """
    if kind not in PRECONDITIONERS:
        raise ValueError(f"unknown preconditioner {kind!r}")
    center = stencil.center
    if kind == JACOBI:
        return center
    off = [c for o, c in zip(stencil.offsets, stencil.coefficients)
           if any(o)]
    return center + float(np.sum(np.abs(off)))


def preconditioned_symbol(stencil: Stencil, kind: str,
                          theta: np.ndarray) -> np.ndarray:
    """Symbol of [A_h^+]^{-1} A_h; real for symmetric stencils."""
    s = evaluate_symbol(stencil, theta)
    worst = float(np.max(np.abs(s.imag))) if s.size else 0.0
    if worst > REAL_SYMBOL_TOL * max(1.0, float(np.max(np.abs(s)))):
        raise ValueError(
            f"symbol has imaginary part {worst:.2e}; preconditioned analysis "
            "requires a symmetric stencil"
        )
    return s.real / preconditioner_symbol(stencil, kind)


@dataclass(frozen=True)
class FrequencySampling:
    """Uniform lattice resolution for LFA sweeps.

    ``samples_per_axis`` must be a multiple of 2^k for every coarsening
    ratio used so the low/high cutoff lands on sample boundaries;
    ``offset_fraction`` shifts the low-frequency lattice off the singular
    zero frequency.
    """

    samples_per_axis: int = 64
    offset_fraction: float = 0.5

    def __post_init__(self):
        if self.samples_per_axis < 2:
            raise ValueError("need at least two samples per axis")
        if not 0.0 < self.offset_fraction < 1.0:
            raise ValueError("offset_fraction must lie in (0, 1)")

    def validate_ratio(self, k: int) -> None:
        if self.samples_per_axis % 2**k:
            raise ValueError(
                f"samples_per_axis={self.samples_per_axis} is not a multiple "
                f"of 2^{k}"
            )


def frequency_lattice(geometry: GridGeometry,
                      sampling: FrequencySampling) -> np.ndarray:
    """Inclusive uniform lattice over (-pi/h_d, pi/h_d] (contains 0 and pi/h)."""
    n = sampling.samples_per_axis
    axes = []
    for w in geometry.h:
        axes.append(-np.pi / w + (2 * np.pi / (w * n)) * np.arange(1, n + 1))
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def low_frequency_mask(geometry: GridGeometry, k: int,
                       theta: np.ndarray) -> np.ndarray:
    """Membership in Theta_{2^k h}: the half-open box (-b_d, b_d] per axis."""
    h = np.asarray(geometry.h)
    b = np.pi / (2**k * h)
    eps = 1e-12 * b
    return np.all((theta > -b - eps) & (theta <= b + eps), axis=-1)


def high_closure_mask(geometry: GridGeometry, k: int,
                      theta: np.ndarray) -> np.ndarray:
    """Closure of the high-frequency region (keeps the low-box boundary)."""
    h = np.asarray(geometry.h)
    b = np.pi / (2**k * h)
    return np.max(np.abs(theta) / b, axis=-1) >= 1.0 - 1e-12


def sample_frequencies(geometry: GridGeometry, k: int,
                       sampling: FrequencySampling
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Offset uniform lattice over Theta_h, split into (low, high).

    The lattice is shifted by offset_fraction of a step so theta = 0 is
    never sampled; exactly (N/2^k)^d samples land in the low box.
    """
    sampling.validate_ratio(k)
    n = sampling.samples_per_axis
    axes = []
    for w in geometry.h:
        step = 2 * np.pi / (w * n)
        axes.append(-np.pi / w + step * (np.arange(n) + sampling.offset_fraction))
    grids = np.meshgrid(*axes, indexing="ij")
    theta = np.stack([g.ravel() for g in grids], axis=-1)
    low = low_frequency_mask(geometry, k, theta)
    return theta[low], theta[~low]


def low_midpoint_lattice(geometry: GridGeometry, k: int,
                         sampling: FrequencySampling) -> np.ndarray:
    """The low-box sublattice of sample_frequencies (base frequencies)."""
    low, _ = sample_frequencies(geometry, k, sampling)
    return low


def _polish_max(stencil: Stencil, kind: str, theta0: np.ndarray) -> float:
    """Local refinement of max |X~| from a lattice seed (torus, unconstrained)."""
    def neg(t):
        return -abs(float(preconditioned_symbol(stencil, kind, t[None])[0]))

    res = minimize(neg, theta0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
    return -res.fun


def _polish_face_min(stencil: Stencil, kind: str, k: int, axis: int,
                     sign: float, start: np.ndarray) -> float:
    """Minimize |X~| over one face of the low box, free coordinates bounded."""
    h = np.asarray(stencil.geometry.h)
    b = np.pi / (2**k * h)
    d = stencil.geometry.dimension
    fixed = sign * b[axis]

    def val(free):
        t = np.insert(np.atleast_1d(free), axis, fixed)
        return abs(float(preconditioned_symbol(stencil, kind, t[None])[0]))

    free0 = np.delete(start, axis)
    if d == 1:
        return val(np.empty(0))
    bounds = [(-b[j], b[j]) for j in range(d) if j != axis]
    res = minimize(val, free0, method="Powell", bounds=bounds,
                   options={"xtol": 1e-12, "ftol": 1e-15, "maxiter": 2000})
    return float(res.fun)


def lambda_bounds(stencil: Stencil, kind: str, k: int,
                  sampling: FrequencySampling | None = None
                  ) -> tuple[float, float]:
    """LFA eigenvalue bounds of [A_h^+]^{-1} A_h over the high frequencies.

    lambda0 is the minimum of |X~| over the closure of the high-frequency
    region (lattice sweep plus local refinement on the low-box faces, so
    boundary infima such as the 5-point value 1/2 are met exactly);
    lambda1 is the maximum over all frequencies, which is asserted to
    agree with the maximum over the high range.
    """
    if not stencil.is_symmetric():
        raise ValueError("lambda bounds require a symmetric stencil")
    sampling = sampling or FrequencySampling()
    sampling.validate_ratio(k)
    geometry = stencil.geometry
    theta = frequency_lattice(geometry, sampling)
    x = preconditioned_symbol(stencil, kind, theta)
    if np.min(x) < -REAL_SYMBOL_TOL:
        raise ValueError("preconditioned symbol is not positive semi-definite")
    ax = np.abs(x)

    lam1 = float(np.max(ax))
    lam1 = max(lam1, _polish_max(stencil, kind, theta[int(np.argmax(ax))]))

    hi = high_closure_mask(geometry, k, theta)
    theta_hi = theta[hi]
    ax_hi = ax[hi]
    lam0 = float(np.min(ax_hi))
    d = geometry.dimension
    b = np.pi / (2**k * np.asarray(geometry.h))
    for axis in range(d):
        for sign in (-1.0, 1.0):
            on_face = np.abs(theta_hi[:, axis] - sign * b[axis]) < 1e-12 * b[axis]
            if not np.any(on_face):
                continue
            cand = theta_hi[on_face]
            start = cand[int(np.argmin(ax_hi[on_face]))]
            lam0 = min(lam0, _polish_face_min(stencil, kind, k, axis, sign, start))

    lam1_high = float(np.max(ax_hi))
    lam1_high = max(lam1_high,
                    _polish_max(stencil, kind, theta_hi[int(np.argmax(ax_hi))]))
    if abs(lam1_high - lam1) > 1e-9 * lam1:
        raise ValueError(
            f"symbol maximum {lam1:.6g} is not attained on the high range "
            f"(high max {lam1_high:.6g}); lambda1 would be ambiguous"
        )
    return float(lam0), float(lam1)
