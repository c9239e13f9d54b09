"""Tests for coefficient functionals and the operator container."""

import numpy as np
import pytest

from splineqi import (
    DISCRETE,
    CoefficientFunctional,
    KnotSequence,
    QuasiInterpolant,
    gs1,
    gs2,
    is_exact_on,
    s2,
    schoenberg,
)
from splineqi.partitions import random_clamped


@pytest.fixture
def quad_uniform():
    return KnotSequence.clamped(2, np.linspace(0.0, 1.0, 11))


class TestApply:
    def test_point_evaluation_of_constant(self, quad_uniform):
        lam = CoefficientFunctional(quad_uniform, DISCRETE, 3, point_entries=((3, 1.0),))
        assert lam.apply(lambda x: 1.0) == pytest.approx(1.0)

    def test_three_term_on_identity(self, quad_uniform):
        # weights (-1/8, 5/4, -1/8) reproduce e_1 at the anchor's Greville point
        ks = quad_uniform
        lam = CoefficientFunctional(
            ks, DISCRETE, 5,
            point_entries=((4, -0.125), (5, 1.25), (6, -0.125)),
        )
        assert lam.apply(lambda x: x) == pytest.approx(ks.greville(5), rel=1e-13)

    def test_moment_functional_on_identity(self):
        rng = np.random.default_rng(4)
        ks = random_clamped(3, 9, rng)
        g1 = gs1(ks)
        for i in range(1, ks.nbasis - 1):
            got = g1.functionals[i].apply(lambda x: np.asarray(x))
            assert got == pytest.approx(ks.greville(i), rel=1e-12)

    def test_linearity_on_random_polynomials(self):
        rng = np.random.default_rng(5)
        ks = random_clamped(2, 8, rng)
        for q in (schoenberg(ks), s2(ks), gs1(ks), gs2(ks)):
            lam = q.functionals[3]
            c1, c2 = rng.standard_normal(3), rng.standard_normal(3)
            f = lambda x: np.polyval(c1, x)
            g = lambda x: np.polyval(c2, x)
            al, be = 0.7, -1.3
            combined = lam.apply(lambda x: al * f(x) + be * g(x))
            split = al * lam.apply(f) + be * lam.apply(g)
            assert combined == pytest.approx(split, rel=1e-12, abs=1e-12)


class TestApplyMonomial:
    def test_unit_weight_sum_reproduces_constants(self):
        rng = np.random.default_rng(6)
        ks = random_clamped(3, 7, rng)
        for q in (schoenberg(ks), s2(ks), gs1(ks), gs2(ks)):
            for lam in q.functionals:
                assert lam.apply_monomial(0) == pytest.approx(1.0, rel=1e-12)

    def test_gs2_reproduces_second_symmetric(self):
        rng = np.random.default_rng(7)
        ks = random_clamped(3, 8, rng)
        g2 = gs2(ks)
        for i in range(ks.nbasis):
            assert g2.functionals[i].apply_monomial(2) == pytest.approx(
                ks.symmetric_coeff(i, 2), rel=1e-10, abs=1e-12
            )

    def test_schoenberg_overshoot_is_lam(self):
        rng = np.random.default_rng(8)
        ks = random_clamped(2, 9, rng)
        s1 = schoenberg(ks)
        for i in range(ks.nbasis):
            over = s1.functionals[i].apply_monomial(2) - ks.symmetric_coeff(i, 2)
            assert over == pytest.approx(ks.lam(i), rel=1e-9, abs=1e-14)

    def test_agreement_with_apply(self):
        rng = np.random.default_rng(9)
        for m in (2, 3, 4):
            ks = random_clamped(m, 7, rng)
            for q in (schoenberg(ks), s2(ks), gs1(ks), gs2(ks)):
                for lam in q.functionals[:: max(1, ks.nbasis // 4)]:
                    for r in range(m + 1):
                        direct = lam.apply(lambda x: np.asarray(x, float) ** r)
                        assert lam.apply_monomial(r) == pytest.approx(
                            direct, rel=1e-10, abs=1e-12
                        )

    def test_negative_order_rejected(self, quad_uniform):
        lam = CoefficientFunctional(quad_uniform, DISCRETE, 0, point_entries=((0, 1.0),))
        with pytest.raises(ValueError):
            lam.apply_monomial(-1)


class TestNu:
    def test_absolute_weight_sum(self, quad_uniform):
        lam = CoefficientFunctional(
            quad_uniform, DISCRETE, 5,
            point_entries=((4, -0.125), (5, 1.25), (6, -0.125)),
        )
        assert lam.nu == 0.125 + 1.25 + 0.125

    def test_additivity_over_entry_kinds(self):
        ks = KnotSequence.clamped(2, np.linspace(0.0, 1.0, 6))
        g2 = gs2(ks)
        lam = g2.functionals[1]  # mixes a point entry with kernel entries
        total = sum(abs(w) for _, w in lam.point_entries)
        total += sum(abs(w) for _, w in lam.kernel_entries)
        assert lam.nu == total


class TestRecord:
    def test_discrete_record_fields(self, quad_uniform):
        q = s2(quad_uniform)
        rec = q.functionals[4].record()
        assert rec["kind"] == DISCRETE
        assert rec["anchor"] == 4
        assert rec["offsets"] == [-1, 0, 1]
        np.testing.assert_allclose(rec["weights"], [-0.125, 1.25, -0.125], rtol=1e-12)
        assert rec["nodes"] == [quad_uniform.greville(j) for j in (3, 4, 5)]

    def test_kernel_record_nodes_are_indices(self, quad_uniform):
        g1 = gs1(quad_uniform)
        rec = g1.functionals[3].record()
        assert rec["nodes"] == [3]
        assert rec["weights"] == [1.0]


class TestQuasiInterpolant:
    def test_requires_one_functional_per_index(self, quad_uniform):
        funs = tuple(
            CoefficientFunctional(quad_uniform, DISCRETE, i, point_entries=((i, 1.0),))
            for i in range(quad_uniform.nbasis - 1)
        )
        with pytest.raises(ValueError, match="one functional per basis index"):
            QuasiInterpolant(quad_uniform, funs, degree_exact=1, family="broken")

    def test_evaluate_reproduces_line(self, quad_uniform):
        q = schoenberg(quad_uniform)
        xs = np.linspace(0.0, 1.0, 23)
        np.testing.assert_allclose(q.evaluate(lambda x: 2 * x - 0.3, xs), 2 * xs - 0.3, atol=1e-13)

    def test_is_discrete_flag(self, quad_uniform):
        assert schoenberg(quad_uniform).is_discrete
        assert not gs1(quad_uniform).is_discrete


class TestIsExactOn:
    def test_schoenberg_degree_one(self):
        rng = np.random.default_rng(12)
        ks = random_clamped(3, 9, rng)
        ok, _ = is_exact_on(schoenberg(ks), 1)
        assert ok

    def test_s2_degree_two_on_random_partitions(self):
        rng = np.random.default_rng(13)
        for m in (2, 3, 4, 5):
            ks = random_clamped(m, 8, rng)
            ok, worst = is_exact_on(s2(ks), 2)
            assert ok, worst

    def test_schoenberg_fails_degree_two_with_lam_residual(self):
        rng = np.random.default_rng(14)
        ks = random_clamped(2, 9, rng)
        s1 = schoenberg(ks)
        ok, worst = is_exact_on(s1, 2)
        assert not ok
        lam_max = max(ks.lam(j) for j in range(ks.nbasis))
        assert worst == pytest.approx(lam_max, rel=1e-9)

    def test_beyond_degree_rejected(self, quad_uniform):
        with pytest.raises(ValueError, match="beyond the spline degree"):
            is_exact_on(schoenberg(quad_uniform), 3)
