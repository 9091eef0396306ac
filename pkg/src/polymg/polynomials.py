"""The three polynomial smoother families as scalar error polynomials.

Every family is described by its error polynomial e(x) = 1 - x*q(x) with
e(0) = 1; q approximates 1/x on the smoothing interval.  Chebyshev is the
scaled/shifted classical polynomial, "sa" the smoothed-aggregation
polynomial (no lower interval end), and "ba1x" the best uniform
approximation to 1/x built by a three-term recurrence.

The recurrence constant for ba1x is c = 4*mu0*mu1/(sqrt(mu0)+sqrt(mu1))^2
= (1+delta)^2/lambda1.  Only this value keeps the recurrence consistent
with the closed-form endpoint error delta^m*(kappa-1)/2 and with an
independent exchange-algorithm construction (both are enforced in the
test suite); it also makes the two endpoint maps x -> +-1 of the
underlying Chebyshev argument exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

CHEBYSHEV = "chebyshev"
SA = "sa"
BA1X = "ba1x"
FAMILIES = (CHEBYSHEV, SA, BA1X)


def cheb_T(k: int, t) -> np.ndarray | float:
    """First-kind Chebyshev value T_k(t).

    Three-term recurrence inside [-1, 1]; the hyperbolic closed form
    0.5*((t-sqrt(t^2-1))^k + (t+sqrt(t^2-1))^k) outside, which avoids the
    recurrence's cancellation for |t| > 1.
    """
    if k < 0:
        raise ValueError("cheb_T needs k >= 0")
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    inside = np.abs(t) <= 1.0
    ti = t[inside]
    tp, tc = np.ones_like(ti), ti.copy()
    if k == 0:
        tc = tp
    for _ in range(k - 1):
        tp, tc = tc, 2 * ti * tc - tp
    out[inside] = tc
    to = t[~inside]
    a = np.abs(to)
    s = np.sqrt(a * a - 1.0)
    out[~inside] = np.sign(to) ** k * 0.5 * ((a - s) ** k + (a + s) ** k)
    return out if out.ndim else float(out)


def cheb_U(k: int, t) -> np.ndarray | float:
    """Second-kind Chebyshev value U_k(t) (U_{-1} = 0)."""
    if k < -1:
        raise ValueError("cheb_U needs k >= -1")
    t = np.asarray(t, dtype=float)
    if k == -1:
        out = np.zeros_like(t)
        return out if out.ndim else 0.0
    out = np.empty_like(t)
    inside = np.abs(t) <= 1.0
    ti = t[inside]
    up, uc = np.ones_like(ti), 2 * ti
    if k == 0:
        uc = up
    for _ in range(k - 1):
        up, uc = uc, 2 * ti * uc - up
    out[inside] = uc
    to = t[~inside]
    a = np.abs(to)
    s = np.sqrt(a * a - 1.0)
    out[~inside] = np.sign(to) ** k * ((a + s) ** (k + 1) - (a - s) ** (k + 1)) / (2 * s)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SmootherSpec:
    """Family, degree and smoothing interval of a polynomial smoother.

    ``degree`` is the degree of the approximant q (the error polynomial has
    degree degree+1).  ``lambda0`` is ignored by the SA family.
    """

    family: str
    degree: int
    lambda0: float
    lambda1: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown smoother family {self.family!r}")
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        if self.lambda1 <= 0:
            raise ValueError("lambda1 must be positive")
        if self.family != SA:
            if self.lambda0 < 0 or self.lambda0 >= self.lambda1:
                raise ValueError("need 0 <= lambda0 < lambda1")
        if self.family == CHEBYSHEV and self.lambda0 == self.lambda1:
            raise ValueError("degenerate Chebyshev interval")
        if self.family == BA1X and self.lambda0 == 0:
            raise ValueError("ba1x needs lambda0 > 0 (finite kappa)")

    def with_lambda0(self, lambda0: float) -> "SmootherSpec":
        return replace(self, lambda0=lambda0)

    def to_dict(self) -> dict:
        return {"family": self.family, "degree": self.degree,
                "lambda0": self.lambda0, "lambda1": self.lambda1}

    @staticmethod
    def from_dict(d: dict) -> "SmootherSpec":
        return SmootherSpec(family=d["family"], degree=int(d["degree"]),
                            lambda0=float(d["lambda0"]),
                            lambda1=float(d["lambda1"]))


def _ba1x_constants(lam0: float, lam1: float) -> tuple[float, float, float, float]:
    """(mu0, mu1, delta, c) of the recurrence on [lam0, lam1]."""
    mu0, mu1 = 1.0 / lam1, 1.0 / lam0
    kappa = lam1 / lam0
    delta = (math.sqrt(kappa) - 1) / (math.sqrt(kappa) + 1)
    c = 4 * mu0 * mu1 / (math.sqrt(mu0) + math.sqrt(mu1)) ** 2
    return mu0, mu1, delta, c


def ba1x_approximant(m: int, lam0: float, lam1: float, x) -> np.ndarray:
    """Best uniform approximation p_m(x) to 1/x on [lam0, lam1].

    Seeds: p_0 = (mu0+mu1)/2, p_1 = (sqrt(mu0)+sqrt(mu1))^2/2 - mu0*mu1*x;
    then p_{j+1} = p_j + delta^2 (p_j - p_{j-1}) + c (1 - x p_j).
    Stable for x in [0, lambda1].
    """
    x = np.asarray(x, dtype=float)
    mu0, mu1, delta, c = _ba1x_constants(lam0, lam1)
    p_prev = np.full_like(x, 0.5 * (mu0 + mu1))
    if m == 0:
        return p_prev
    p = 0.5 * (math.sqrt(mu0) + math.sqrt(mu1)) ** 2 - mu0 * mu1 * x
    for _ in range(m - 1):
        p, p_prev = p + delta**2 * (p - p_prev) + c * (1.0 - x * p), p
    return p


def error_poly(spec: SmootherSpec, x) -> np.ndarray:
    """The error polynomial e(x) = 1 - x q(x); e(0) = 1 for every family."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if spec.family == CHEBYSHEV:
        lam0, lam1 = spec.lambda0, spec.lambda1
        t = (lam0 + lam1 - 2 * x) / (lam1 - lam0)
        a = (lam0 + lam1) / (lam1 - lam0)
        e = cheb_T(spec.degree + 1, t) / cheb_T(spec.degree + 1, np.array(a))
    elif spec.family == SA:
        nu = spec.degree
        n = 2 * nu + 3
        u = np.sqrt(np.maximum(x, 0.0) / spec.lambda1)
        e = np.ones_like(x)
        nz = u > 1e-12
        # sign chosen so the removable singularity at x=0 has value +1
        e[nz] = (-1.0) ** (nu + 1) * cheb_T(n, u[nz]) / (n * u[nz])
    else:
        e = 1.0 - x * ba1x_approximant(spec.degree, spec.lambda0,
                                       spec.lambda1, x)
    return float(e[0]) if scalar else e


def q_value(spec: SmootherSpec, x) -> np.ndarray:
    """The approximant q(x) = (1 - e(x))/x, x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("q_value needs x > 0")
    if spec.family == BA1X:
        return ba1x_approximant(spec.degree, spec.lambda0, spec.lambda1, x)
    return (1.0 - error_poly(spec, x)) / x


def sa_q_coefficients(nu: int, lam1: float) -> np.ndarray:
    """Monomial coefficients of the SA approximant q_nu (index = power).

    Extracted from the odd Chebyshev expansion: e(x) is a polynomial of
    degree nu+1 in x, so q = (1-e)/x has the coefficients below.  Intended
    for moderate degrees (operator application); the scalar error formula
    stays usable at any degree.
    """
    n = 2 * nu + 3
    cheb_basis = np.zeros(n + 1)
    cheb_basis[n] = 1.0
    mono = np.polynomial.chebyshev.cheb2poly(cheb_basis)  # T_n coefficients
    sign = (-1.0) ** (nu + 1)
    # e(x) = sign/n * sum_j mono[2j+1] (x/lam1)^j
    e_coeffs = np.array([sign / n * mono[2 * j + 1] / lam1**j
                         for j in range(nu + 2)])
    return -e_coeffs[1:]


def ba1x_endpoint_errors(m: int, lam: float, lam0: float, lam1: float
                         ) -> tuple[float, float]:
    """Closed-form endpoint errors of p_m built on [lam, lam1].

    Returns (|1 - lam1 p_m(lam1; lam)|, lam0 * E_m(lam0; lam)) where
    E_m(x) = 1/x - p_m(x) has the explicit second-kind-Chebyshev form
    E_m = -delta^m E_0 U_{m-2}(y) + delta^{m-1} E_1 U_{m-1}(y) with
    y = (1 + delta^2 - c x)/(2 delta).  The U terms are evaluated through
    the scaled recurrence V_j = delta^j U_j(y), which stays bounded for
    x in [0, lambda1].
    """
    if m < 1:
        raise ValueError("endpoint errors need m >= 1")
    if not lam0 <= lam <= lam1:
        raise ValueError("need lambda0 <= lambda <= lambda1")
    if lam == lam1:
        raise ValueError("lambda = lambda1 is degenerate (kappa = 1)")
    kappa = lam1 / lam
    delta = (math.sqrt(kappa) - 1) / (math.sqrt(kappa) + 1)
    at_lambda1 = delta**m * (kappa - 1) / 2.0

    mu0, mu1, delta, c = _ba1x_constants(lam, lam1)
    x = lam0
    y = (1.0 + delta**2 - c * x) / (2.0 * delta)
    e0 = 1.0 / x - 0.5 * (mu0 + mu1)
    e1 = 1.0 / x - (0.5 * (math.sqrt(mu0) + math.sqrt(mu1)) ** 2 - mu0 * mu1 * x)
    v_prev, v_cur = 0.0, 1.0  # V_{-1}, V_0
    for _ in range(m - 1):
        v_prev, v_cur = v_cur, 2 * y * delta * v_cur - delta**2 * v_prev
    em = -(delta**2) * e0 * v_prev + e1 * v_cur
    return at_lambda1, lam0 * em


def optimal_lambda0_smoothing(m: int, lambda0: float, lambda1: float,
                              rel_tol: float = 1e-10) -> float:
    """The interval left end minimizing max|e| over [lambda0, lambda1].

    The error at lambda1 decreases and the error at lambda0 increases as
    the construction interval [lam, lambda1] shrinks, so their crossing is
    the min-max point; found by bisection.  If the branches never cross
    the better endpoint is returned.
    """
    if m < 1:
        raise ValueError("optimal lambda0 needs degree m >= 1")
    if not 0 < lambda0 < lambda1:
        raise ValueError("need 0 < lambda0 < lambda1")

    def gap(lam: float) -> float:
        hi, lo = ba1x_endpoint_errors(m, lam, lambda0, lambda1)
        return hi - lo

    lo, hi = lambda0, lambda1 * (1.0 - 1e-12)
    if gap(lo) <= 0:
        return lambda0
    if gap(hi) > 0:
        return hi
    while hi - lo > rel_tol * lambda1:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def min_degree(rho: float, kappa: float, lambda1: float) -> int:
    """Minimal ba1x degree giving damping rho and a positive approximant.

    Smallest integer m with m >= max(|log(2 rho/(kappa-1))|,
    |log(2/(lambda1 (kappa-1)))|) / |log delta|.
    """
    if not 0 < rho < 1:
        raise ValueError("need 0 < rho < 1")
    if kappa <= 1:
        raise ValueError("need kappa > 1")
    delta = (math.sqrt(kappa) - 1) / (math.sqrt(kappa) + 1)
    bound = max(abs(math.log(2 * rho / (kappa - 1))),
                abs(math.log(2 / (lambda1 * (kappa - 1)))))
    bound /= abs(math.log(delta))
    return max(math.ceil(bound), 0)


def is_admissible(spec: SmootherSpec, samples: int = 4001) -> bool:
    """Convergent-smoother proxy: max |e(x)| < 1 on (0, lambda1]."""
    x = np.linspace(spec.lambda1 / samples, spec.lambda1, samples)
    return bool(np.max(np.abs(error_poly(spec, x))) < 1.0)
