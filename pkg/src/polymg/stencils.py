"""Grid geometries and constant-coefficient stencils.

A stencil couples a lattice neighbourhood (integer offsets) to real
coefficients; the geometry supplies the physical scaling and, for
triangular grids, the two angles that characterize the mesh.  Offsets are
stored unscaled so one stencil object serves every mesh width.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

RECTANGULAR = "rectangular"
TRIANGULAR = "triangular"


@dataclass(frozen=True)
class GridGeometry:
    """Lattice geometry: rectangular (2D/3D) or triangular (2D).

    For a rectangular grid ``h`` holds one mesh width per axis.  A
    triangular grid is generated by two basis vectors forming angles
    ``alpha``, ``beta`` with the third mesh direction (gamma = pi - alpha
    - beta must stay positive) and a single scalar mesh width.
    """

    kind: str
    h: tuple[float, ...]
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in (RECTANGULAR, TRIANGULAR):
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if any(w <= 0 for w in self.h):
            raise ValueError("mesh widths must be positive")
        if self.kind == TRIANGULAR:
            if len(self.h) != 2:
                raise ValueError("triangular geometry is two-dimensional")
            if self.alpha is None or self.beta is None:
                raise ValueError("triangular geometry needs both angles")
            gamma = math.pi - self.alpha - self.beta
            if min(self.alpha, self.beta, gamma) <= 0:
                raise ValueError(
                    f"degenerate angles: alpha={self.alpha}, beta={self.beta}, "
                    f"gamma={gamma}"
                )
        else:
            if len(self.h) not in (2, 3):
                raise ValueError("rectangular geometry must be 2D or 3D")

    @property
    def dimension(self) -> int:
        return len(self.h)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "dimension": self.dimension, "h": list(self.h)}
        if self.kind == TRIANGULAR:
            d["alpha"] = self.alpha
            d["beta"] = self.beta
        return d

    @staticmethod
    def from_dict(d: dict) -> "GridGeometry":
        geometry = GridGeometry(
            kind=d["kind"],
            h=tuple(float(w) for w in d["h"]),
            alpha=d.get("alpha"),
            beta=d.get("beta"),
        )
        if "dimension" in d and int(d["dimension"]) != geometry.dimension:
            raise ValueError("dimension field disagrees with mesh widths")
        return geometry


def rectangular(h: float | Sequence[float], dimension: int | None = None) -> GridGeometry:
    """Rectangular geometry from a scalar (isotropic) or per-axis widths."""
    if np.isscalar(h):
        if dimension is None:
            raise ValueError("dimension required for a scalar mesh width")
        widths = (float(h),) * dimension
    else:
        widths = tuple(float(w) for w in h)
    return GridGeometry(kind=RECTANGULAR, h=widths)


def triangular(alpha: float, beta: float, h: float = 1.0) -> GridGeometry:
    return GridGeometry(kind=TRIANGULAR, h=(float(h), float(h)),
                        alpha=float(alpha), beta=float(beta))


@dataclass(frozen=True)
class Stencil:
    """Constant-coefficient operator: integer offsets plus coefficients."""

    geometry: GridGeometry
    offsets: tuple[tuple[int, ...], ...]
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if len(self.offsets) != len(self.coefficients):
            raise ValueError("offsets and coefficients must pair up")
        if len(set(self.offsets)) != len(self.offsets):
            raise ValueError("duplicate stencil offsets")
        zero = tuple([0] * self.geometry.dimension)
        if zero not in self.offsets:
            raise ValueError("stencil must contain the zero offset")
        if self.coefficients[self.offsets.index(zero)] <= 0:
            raise ValueError("center coefficient must be positive")
        for o in self.offsets:
            if len(o) != self.geometry.dimension:
                raise ValueError("offset dimension mismatch")

    @property
    def center(self) -> float:
        zero = tuple([0] * self.geometry.dimension)
        return self.coefficients[self.offsets.index(zero)]

    @property
    def offset_array(self) -> np.ndarray:
        return np.asarray(self.offsets, dtype=float)

    @property
    def coefficient_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    def is_symmetric(self, tol: float = 1e-14) -> bool:
        """coefficient at -o equals coefficient at o for every offset."""
        table = dict(zip(self.offsets, self.coefficients))
        for o, c in table.items():
            neg = tuple(-x for x in o)
            if neg not in table or abs(table[neg] - c) > tol:
                return False
        return True

    def with_mesh_width(self, factor: float) -> "Stencil":
        """The same operator family regenerated at mesh width factor*h."""
        g = self.geometry
        if g.kind == RECTANGULAR:
            return build_fd_laplace(rectangular([w * factor for w in g.h]))
        return build_fem_tri_laplace(g.alpha, g.beta, g.h[0] * factor)

    def to_dict(self) -> dict:
        return {
            "geometry": self.geometry.to_dict(),
            "entries": [
                {"offset": list(o), "coefficient": c}
                for o, c in zip(self.offsets, self.coefficients)
            ],
        }

    @staticmethod
    def from_dict(d: dict) -> "Stencil":
        geometry = GridGeometry.from_dict(d["geometry"])
        offsets = tuple(tuple(int(x) for x in e["offset"]) for e in d["entries"])
        coefficients = tuple(float(e["coefficient"]) for e in d["entries"])
        return Stencil(geometry=geometry, offsets=offsets, coefficients=coefficients)

    def save(self, path: str) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)

    @staticmethod
    def load(path: str) -> "Stencil":
        with open(path) as f:
            return Stencil.from_dict(json.load(f))


def build_fd_laplace(geometry: GridGeometry) -> Stencil:
    """Standard 5-point (2D) / 7-point (3D) finite-difference Laplacian.

    Center 2*d/h^2, axis neighbours -1/h_d^2 (per-axis widths supported).
    """
    if geometry.kind != RECTANGULAR:
        raise ValueError("finite-difference Laplacian needs a rectangular grid")
    d = geometry.dimension
    offsets = [tuple([0] * d)]
    coeffs = [sum(2.0 / w**2 for w in geometry.h)]
    for ax in range(d):
        for s in (-1, 1):
            o = [0] * d
            o[ax] = s
            offsets.append(tuple(o))
            coeffs.append(-1.0 / geometry.h[ax] ** 2)
    return Stencil(geometry=geometry, offsets=tuple(offsets),
                   coefficients=tuple(coeffs))


def build_fem_tri_laplace(alpha: float, beta: float, h: float = 1.0) -> Stencil:
    """Linear-FEM Laplacian stencil on a structured triangular grid.

    Seven entries: the mesh directions e1, e2 and the diagonal e1+e2 carry
    -cot(gamma), -cot(alpha), -cot(beta) respectively, all scaled by
    (cot(alpha)+cot(beta))/h^2; the row sum is zero.
    """
    geometry = triangular(alpha, beta, h)
    gamma = math.pi - alpha - beta
    ca, cb, cg = 1 / math.tan(alpha), 1 / math.tan(beta), 1 / math.tan(gamma)
    pref = (ca + cb) / h**2
    offsets = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1))
    coeffs = (2 * (ca + cb + cg), -cg, -cg, -ca, -ca, -cb, -cb)
    return Stencil(geometry=geometry, offsets=offsets,
                   coefficients=tuple(pref * c for c in coeffs))
