"""Independent reference implementations used as test oracles.

Everything here is deliberately written from first principles (exchange
algorithm, characteristic polynomial + simultaneous root iteration, naive
summations) so the package code paths are checked against routes that
share none of their machinery.
"""

from __future__ import annotations

import numpy as np


# ---------------------------------------------------------------------------
# best uniform approximation of 1/x by the exchange (Remez) algorithm
# ---------------------------------------------------------------------------

def remez_reciprocal(degree: int, a: float, b: float, grid: int = 200001,
                     max_iters: int = 100):
    """Best degree-``degree`` polynomial approximation to 1/x on [a, b].

    Returns a callable evaluating the polynomial.  Works in the Chebyshev
    basis of the interval; the evaluation grid is cosine-spaced so the
    oscillations near a small left endpoint stay resolved.
    """
    from numpy.polynomial import chebyshev as C

    def to_unit(x):
        return 2.0 * (x - a) / (b - a) - 1.0

    xs = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(
        np.pi * np.arange(grid) / (grid - 1))
    fs = 1.0 / xs

    count = degree + 2
    ref = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(
        np.pi * np.arange(count) / (count - 1))
    coef = None
    for _ in range(max_iters):
        signs = (-1.0) ** np.arange(count)
        vander = C.chebvander(to_unit(ref), degree)
        system = np.hstack([vander, signs[:, None]])
        sol = np.linalg.solve(system, 1.0 / ref)
        coef, leveled = sol[:-1], abs(sol[-1])
        err = C.chebval(to_unit(xs), coef) - fs
        pts = _alternating_extrema(err, count)
        ref_new = xs[pts]
        peak = float(np.max(np.abs(err)))
        if peak - leveled <= 1e-13 * max(peak, 1e-300):
            break
        ref = ref_new
    return lambda x: C.chebval(to_unit(np.asarray(x, dtype=float)), coef)


def _alternating_extrema(err: np.ndarray, count: int) -> list[int]:
    idx = [0]
    interior = np.nonzero(
        (err[1:-1] - err[:-2]) * (err[2:] - err[1:-1]) <= 0)[0] + 1
    idx.extend(interior.tolist())
    idx.append(len(err) - 1)
    pts: list[int] = []
    for i in idx:
        if pts and np.sign(err[i]) == np.sign(err[pts[-1]]):
            if abs(err[i]) > abs(err[pts[-1]]):
                pts[-1] = i
        else:
            pts.append(i)
    while len(pts) > count:
        if abs(err[pts[0]]) < abs(err[pts[-1]]):
            pts.pop(0)
        else:
            pts.pop()
    if len(pts) < count:
        raise RuntimeError("exchange step lost alternation points")
    return pts


# ---------------------------------------------------------------------------
# eigenvalues via characteristic polynomial + Durand-Kerner iteration
# ---------------------------------------------------------------------------

def characteristic_polynomial(a: np.ndarray) -> np.ndarray:
    """Coefficients of det(lambda I - A) by the Faddeev-LeVerrier recursion.

    Returned highest power first: p(l) = l^n + c[1] l^{n-1} + ... + c[n].
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * eye
        coeffs.append(-(a @ m).trace() / k)
    return np.array(coeffs)


def durand_kerner_roots(coeffs: np.ndarray, iters: int = 2000,
                        tol: float = 1e-13) -> np.ndarray:
    """All roots of a polynomial by the simultaneous (Weierstrass) iteration."""
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    n = len(c) - 1
    radius = 1.0 + max(abs(x) for x in c[1:])
    roots = radius * (0.4 + 0.9j) ** np.arange(n)
    for _ in range(iters):
        vals = np.polyval(c, roots)
        step = np.empty_like(roots)
        for i in range(n):
            others = np.delete(roots, i)
            step[i] = vals[i] / np.prod(roots[i] - others)
        roots = roots - step
        if np.max(np.abs(step)) < tol * max(1.0, np.max(np.abs(roots))):
            break
    return roots


def eigenvalues_by_roots(a: np.ndarray) -> np.ndarray:
    return durand_kerner_roots(characteristic_polynomial(a))


# ---------------------------------------------------------------------------
# naive summations / assemblies
# ---------------------------------------------------------------------------

def naive_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, k = a.shape
    k2, m = b.shape
    assert k == k2
    out = np.zeros((n, m), dtype=complex)
    for i in range(n):
        for j in range(m):
            acc = 0.0 + 0.0j
            for t in range(k):
                acc += a[i, t] * b[t, j]
            out[i, j] = acc
    return out


def naive_symbol(offsets, coefficients, h, theta) -> complex:
    """Term-by-term complex sum for one frequency (scalar loop)."""
    acc = 0.0 + 0.0j
    for off, c in zip(offsets, coefficients):
        phase = sum(t * o * hh for t, o, hh in zip(theta, off, h))
        acc += c * complex(np.cos(phase), np.sin(phase))
    return acc


def assemble_fd_matrix(n: int, dimension: int) -> np.ndarray:
    """Dense Dirichlet FD Laplacian on the unit domain via 1D Kronecker sums."""
    h = 1.0 / (n + 1)
    one_d = (np.diag(np.full(n, 2.0)) + np.diag(np.full(n - 1, -1.0), 1)
             + np.diag(np.full(n - 1, -1.0), -1)) / h**2
    eye = np.eye(n)
    if dimension == 2:
        return np.kron(one_d, eye) + np.kron(eye, one_d)
    return (np.kron(np.kron(one_d, eye), eye)
            + np.kron(np.kron(eye, one_d), eye)
            + np.kron(np.kron(eye, eye), one_d))


def bilinear_weight_stencil() -> dict[tuple[int, int], float]:
    """Classical factor-2 bilinear weights (1/4, 1/2, 1 pattern)."""
    base = {-1: 0.5, 0: 1.0, 1: 0.5}
    return {(i, j): wi * wj for i, wi in base.items()
            for j, wj in base.items()}
