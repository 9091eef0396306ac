import json
import math

import numpy as np
import pytest

from polymg import (Stencil, build_fd_laplace, build_fem_tri_laplace,
                    rectangular, triangular)


@pytest.mark.parametrize("dimension,center", [(2, 4.0), (3, 6.0)])
def test_fd_laplace_unit_width(dimension, center):
    st = build_fd_laplace(rectangular(1.0, dimension))
    assert st.center == pytest.approx(center)
    off_center = [c for o, c in zip(st.offsets, st.coefficients) if any(o)]
    assert off_center == pytest.approx([-1.0] * 2 * dimension)


def test_fd_laplace_scaling():
    st = build_fd_laplace(rectangular(0.5, 2))
    assert st.center == pytest.approx(16.0)
    assert min(st.coefficients) == pytest.approx(-4.0)


def test_fd_laplace_rejects_triangular():
    with pytest.raises(ValueError):
        build_fd_laplace(triangular(math.pi / 3, math.pi / 3))


def test_fem_tri_row_sum_zero():
    rng = np.random.default_rng(3)
    for _ in range(20):
        alpha = rng.uniform(0.2, 2.0)
        beta = rng.uniform(0.2, min(2.0, math.pi - alpha - 0.2))
        st = build_fem_tri_laplace(alpha, beta, h=rng.uniform(0.1, 2.0))
        assert sum(st.coefficients) == pytest.approx(0.0, abs=1e-12)
        assert st.is_symmetric()


def test_fem_tri_rejects_degenerate_angles():
    with pytest.raises(ValueError):
        build_fem_tri_laplace(2.0, math.pi - 2.0)  # gamma = 0
    with pytest.raises(ValueError):
        build_fem_tri_laplace(-0.1, 1.0)


def test_geometry_invariants():
    with pytest.raises(ValueError):
        rectangular([1.0, -1.0])
    with pytest.raises(ValueError):
        rectangular(1.0, 4)
    with pytest.raises(ValueError):
        triangular(1.0, 1.0, h=0.0)


def test_stencil_invariants():
    geo = rectangular(1.0, 2)
    with pytest.raises(ValueError):  # duplicate offsets
        Stencil(geo, ((0, 0), (0, 0)), (4.0, -1.0))
    with pytest.raises(ValueError):  # missing center
        Stencil(geo, ((1, 0),), (-1.0,))
    with pytest.raises(ValueError):  # non-positive center
        Stencil(geo, ((0, 0),), (-1.0,))


def test_json_round_trip(tmp_path):
    for st in (build_fd_laplace(rectangular([0.5, 0.25], 2)),
               build_fem_tri_laplace(math.pi / 3, math.pi / 4, 0.7)):
        path = tmp_path / "stencil.json"
        st.save(path)
        with open(path) as f:
            doc = json.load(f)
        assert {"geometry", "entries"} <= doc.keys()
        again = Stencil.load(path)
        assert again == st


def test_with_mesh_width_regenerates_family():
    st = build_fd_laplace(rectangular(1.0, 2))
    coarse = st.with_mesh_width(4.0)
    assert coarse.center == pytest.approx(4.0 / 16.0)
    tri = build_fem_tri_laplace(math.pi / 3, math.pi / 3, 1.0)
    tri_coarse = tri.with_mesh_width(2.0)
    assert tri_coarse.center == pytest.approx(tri.center / 4.0)
    assert tri_coarse.offsets == tri.offsets
