"""Tests for the bivariate criss-cross machinery and the box-spline element."""

import numpy as np
import pytest

from splineqi import (
    TensorMesh,
    crisscross_g2,
    crisscross_t2,
    eval_zp_box,
    monomial_residuals,
    nb_box_coeffs,
)
from splineqi.bivariate import bcoef_monomial, family_moment, zp_dqi_empirical_norm
from splineqi.partitions import random_mesh


class TestTensorMesh:
    def test_spans_and_midpoints(self):
        mesh = TensorMesh([0.0, 1.0, 3.0], [0.0, 2.0])
        np.testing.assert_allclose(mesh.hx, [1.0, 2.0])
        np.testing.assert_allclose(mesh.sx, [0.5, 2.0])
        np.testing.assert_allclose(mesh.sy, [1.0])

    def test_rejects_nonincreasing(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            TensorMesh([0.0, 1.0, 1.0], [0.0, 1.0])

    def test_from_text(self):
        mesh = TensorMesh.from_text("0 0.5 1\n0 1 2 3\n")
        assert mesh.ncx == 2 and mesh.ncy == 3


class TestBoxCoeffs:
    def test_three_direction_values(self):
        center, vertex, nu = nb_box_coeffs("three-direction", 2)
        assert center == pytest.approx(1 + 1 / 8)
        assert vertex == pytest.approx(-1 / 48)
        assert nu == pytest.approx(1.25)

    def test_four_direction_s1(self):
        center, vertex, nu = nb_box_coeffs("four-direction", 1)
        assert center == pytest.approx(1.5)
        assert vertex == pytest.approx(-0.125)
        assert nu == pytest.approx(2.0)

    @pytest.mark.parametrize("kind,count", [("three-direction", 6), ("four-direction", 4)])
    def test_weight_arithmetic_identity(self, kind, count):
        for s in (1, 2, 3, 5):
            center, vertex, nu = nb_box_coeffs(kind, s)
            assert center + count * abs(vertex) == pytest.approx(nu, rel=1e-15)
            assert nu == pytest.approx(1 + 1 / s**2, rel=1e-15)

    def test_scale_below_one_rejected(self):
        with pytest.raises(ValueError):
            nb_box_coeffs("four-direction", 0)


class TestCrissCrossFamilies:
    def test_t2_uniform_values(self):
        fam = crisscross_t2(TensorMesh.uniform(5, 5))
        assert fam.a[2] == pytest.approx(-3.0 / 20.0, rel=1e-14)
        assert fam.center(2, 2) == pytest.approx(8.0 / 5.0, rel=1e-14)
        assert fam.nu(2, 2) == pytest.approx(11.0 / 5.0, rel=1e-14)

    def test_g2_uniform_values(self):
        fam = crisscross_g2(TensorMesh.uniform(5, 5))
        assert fam.a[2] == pytest.approx(-1.0 / 6.0, rel=1e-14)
        assert fam.center(2, 2) == pytest.approx(5.0 / 3.0, rel=1e-14)
        assert fam.nu(2, 2) == pytest.approx(7.0 / 3.0, rel=1e-14)

    def test_directional_weight_bounds_on_rough_meshes(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            mesh = random_mesh(6, 6, rng, ratio=1e6)
            t2 = crisscross_t2(mesh)
            g2 = crisscross_g2(mesh)
            assert t2.max_directional_weight() <= 0.75 + 1e-12
            assert np.nanmax([-t2.a, -t2.abar, -t2.c, -t2.cbar]) >= 0  # all nonpositive
            assert g2.max_directional_weight() <= 1.0 + 1e-12

    def test_norm_bounds_on_rough_meshes(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            mesh = random_mesh(5, 7, rng, ratio=1e6)
            assert crisscross_t2(mesh).nu_bound() <= 7.0 + 1e-12
            assert crisscross_g2(mesh).nu_bound() <= 9.0 + 1e-12

    def test_center_closes_partition_of_unity(self):
        rng = np.random.default_rng(12)
        mesh = random_mesh(6, 6, rng)
        for fam in (crisscross_t2(mesh), crisscross_g2(mesh)):
            for i, j in mesh.interior_cells():
                assert sum(fam.weights(i, j).values()) == pytest.approx(1.0, rel=1e-12)

    def test_exact_on_quadratics(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            mesh = random_mesh(5, 6, rng)
            for fam in (crisscross_t2(mesh), crisscross_g2(mesh)):
                ok, worst = fam.is_exact_pi2()
                assert ok, (fam.tag, worst)


class TestMonomialResiduals:
    def test_uniform_unit_mesh(self):
        mesh = TensorMesh.uniform(4, 4)
        assert monomial_residuals("S1", mesh)["e20"][2, 2] == pytest.approx(0.25, rel=1e-12)
        assert monomial_residuals("T1", mesh)["e20"][2, 2] == pytest.approx(0.3, rel=1e-12)
        assert monomial_residuals("G1", mesh)["e02"][2, 2] == pytest.approx(1 / 3, rel=1e-12)

    def test_scaling_in_span_squared(self):
        mesh = TensorMesh(2.0 * np.arange(5), 1.0 * np.arange(5))
        res = monomial_residuals("G1", mesh)
        assert res["e20"][2, 2] == pytest.approx(4.0 / 3.0, rel=1e-12)
        assert res["e02"][2, 2] == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_random_mesh_residual_coefficients(self):
        rng = np.random.default_rng(14)
        mesh = random_mesh(5, 5, rng)
        factors = {"S1": 0.25, "T1": 0.3, "G1": 1.0 / 3.0}
        for tag, fac in factors.items():
            res = monomial_residuals(tag, mesh)
            for i in range(mesh.ncx):
                for j in range(mesh.ncy):
                    assert res["e20"][i, j] == pytest.approx(
                        fac * mesh.hx[i] ** 2, rel=1e-12
                    )
                    assert res["e02"][i, j] == pytest.approx(
                        fac * mesh.hy[j] ** 2, rel=1e-12
                    )

    def test_bilinear_monomials_are_exact(self):
        rng = np.random.default_rng(15)
        mesh = random_mesh(4, 4, rng)
        for kind in ("point", "pyramid", "cell"):
            for i in range(mesh.ncx):
                for j in range(mesh.ncy):
                    for r, s in ((0, 0), (1, 0), (0, 1), (1, 1)):
                        assert family_moment(kind, mesh, i, j, r, s) == pytest.approx(
                            bcoef_monomial(mesh, i, j, r, s), rel=1e-12
                        )


class TestZPElement:
    def test_partition_of_unity(self):
        rng = np.random.default_rng(16)
        pts = rng.uniform(-4.0, 4.0, size=(500, 2))
        total = np.zeros(len(pts))
        for kx in range(-6, 7):
            for ky in range(-6, 7):
                total += eval_zp_box(pts[:, 0] - kx, pts[:, 1] - ky)
        np.testing.assert_allclose(total, 1.0, atol=1e-10)

    def test_support_boundary_vanishes(self):
        for x, y in ((1.5, 0.5), (0.5, 1.5), (-1.5, 0.5), (1.0, 1.0), (1.5, -0.5)):
            assert eval_zp_box(x, y) == pytest.approx(0.0, abs=1e-12)
        assert eval_zp_box(2.0, 0.0) == 0.0

    def test_symmetries(self):
        rng = np.random.default_rng(17)
        x = rng.uniform(-1.6, 1.6, 200)
        y = rng.uniform(-1.6, 1.6, 200)
        base = eval_zp_box(x, y)
        np.testing.assert_allclose(eval_zp_box(-x, y), base, atol=1e-14)
        np.testing.assert_allclose(eval_zp_box(x, -y), base, atol=1e-14)
        np.testing.assert_allclose(eval_zp_box(y, x), base, atol=1e-14)

    def test_center_value(self):
        assert eval_zp_box(0.0, 0.0) == pytest.approx(0.5, rel=1e-14)

    def test_continuity_across_cell_edges(self):
        # C^1 element: values approach the same limit from both sides
        for edge in (0.5, 1.0):
            lo = eval_zp_box(edge - 1e-8, 0.3)
            hi = eval_zp_box(edge + 1e-8, 0.3)
            assert lo == pytest.approx(hi, abs=1e-7)

    @pytest.mark.parametrize("s,want", [(1, 1.5), (2, 1.25), (3, 1 + 1.0 / 9.0)])
    def test_stencil_empirical_norm(self, s, want):
        got = zp_dqi_empirical_norm(s, grid=200)
        assert got == pytest.approx(want, abs=0.01)
        assert got <= 1 + 1 / s**2 + 1e-9
