import math

import numpy as np
import pytest

from waveguide_nls import sphere_criteria as sc
from waveguide_nls.errors import DomainError


class TestTerms:
    def test_mass_critical_t3_is_one(self):
        _, _, t3, _ = sc.criterion_terms(3, 1.0)
        assert t3 == 1.0

    def test_k3_mass_critical_product(self):
        # T1 T2 = sqrt(2) * (60/44)^(3/4) at the k = 3 endpoint
        t1, t2, _, _ = sc.criterion_terms(3, 1.0)
        expected = math.sqrt(2.0) * (60.0 / 44.0) ** 0.75
        assert t1 * t2 == pytest.approx(expected, rel=1e-12)
        assert t1 * t2 == pytest.approx(1.7846, rel=1e-4)

    def test_t4_value(self):
        _, _, _, t4 = sc.criterion_terms(2, 4.0 / 3.0)
        assert t4 == pytest.approx(0.75, rel=1e-14)

    def test_terms_positive(self):
        for k in (2, 3, 5, 9):
            for a in sc.alpha_grid(k, 0.1):
                assert all(t > 0.0 for t in sc.criterion_terms(k, a))

    def test_window_enforced(self):
        with pytest.raises(DomainError):
            sc.criterion_terms(3, 0.9)
        with pytest.raises(DomainError):
            sc.criterion_terms(3, 2.0)


class TestExact:
    def test_k7_all_true(self):
        lo, hi = sc.alpha_window(7)
        for a in np.linspace(lo, hi - 1e-6, 50):
            assert sc.sphere_exact(7, float(a))

    def test_k2_false(self):
        assert not sc.sphere_exact(2, 4.0 / 3.0)

    def test_k3_mass_critical_true(self):
        assert sc.sphere_exact(3, 1.0)


class TestMassCritical:
    def test_k3(self):
        assert sc.sphere_mass_critical(3)

    def test_k2(self):
        assert not sc.sphere_mass_critical(2)

    def test_k12(self):
        assert sc.sphere_mass_critical(12)

    def test_matches_exact_at_endpoint(self):
        for k in range(2, 13):
            lo, _ = sc.alpha_window(k)
            assert sc.sphere_mass_critical(k) == sc.sphere_exact(k, lo)


class TestRoughBounds:
    def test_coarse_boundary(self):
        assert sc.rough_bound_coarse(11)
        assert not sc.rough_bound_coarse(10)

    def test_coarse_large_k(self):
        assert sc.rough_bound_coarse(30)

    def test_refined_boundary(self):
        assert sc.rough_bound_refined(9)
        assert sc.rough_bound_refined(10)
        assert not sc.rough_bound_refined(8)


class TestTermBounds:
    """Each closed-form bound dominates the exact term across the window."""

    @pytest.mark.parametrize("k", range(2, 31))
    def test_bounds_hold(self, k):
        lo, hi = sc.alpha_window(k)
        min_xx = math.exp(-1.0 / math.e)
        for a in np.linspace(lo, hi - 1e-6, 25):
            t1, t2, t3, t4 = sc.criterion_terms(k, float(a))
            assert t1 <= (0.5 * (k + 1)) ** (2.0 / (k - 1)) * (1.0 + 1e-12)
            assert t2 <= k ** (0.25 * (4.0 - a)) * (1.0 + 1e-12)
            assert t3 >= min_xx * (1.0 - 1e-12)
            assert t4 >= 0.25 * (k - 1) ** 2 * (1.0 - 1e-12)


class TestImplicationChain:
    @pytest.mark.parametrize("k", range(2, 31))
    def test_verdict_implications(self, k):
        coarse = sc.rough_bound_coarse(k)
        refined = sc.rough_bound_refined(k)
        if coarse:
            assert refined
        if refined:
            lo, hi = sc.alpha_window(k)
            for a in np.linspace(lo, hi - 1e-6, 20):
                assert sc.sphere_exact(k, float(a))


class TestContinuity:
    def test_exact_approaches_mass_critical_verdict(self):
        for k in (3, 5, 8):
            verdict = sc.sphere_mass_critical(k)
            lo, _ = sc.alpha_window(k)
            for eps in (1e-3, 1e-5, 1e-7):
                assert sc.sphere_exact(k, lo + eps) == verdict


class TestScan:
    def test_k4_improved_all_true(self):
        rows = sc.sphere_scan([4], alpha_step=0.01)
        assert rows and all(r.improved_holds for r in rows)

    def test_k3_structure(self):
        rows = sc.sphere_scan([3], alpha_step=0.01)
        assert rows[0].alpha == pytest.approx(1.0)
        assert rows[0].improved_holds  # mass-critical edge certifies
        assert not rows[-1].improved_holds  # large alpha fails
        # once it fails it stays failed on this grid
        flags = [r.improved_holds for r in rows]
        first_false = flags.index(False)
        assert not any(flags[first_false:])

    def test_row_consistency(self):
        rows = sc.sphere_scan([2, 3], alpha_step=0.1)
        for r in rows:
            assert r.exact_holds == (r.T1 * r.T2 < r.T3 * r.T4)
            if r.mass_critical_holds is not None:
                assert r.mass_critical_holds == sc.sphere_mass_critical(r.k)

    def test_mass_critical_flag_only_on_endpoint(self):
        rows = sc.sphere_scan([3], alpha_step=0.1)
        flags = [r.mass_critical_holds is not None for r in rows]
        assert flags[0] and not any(flags[1:])

    def test_two_code_paths_agree(self):
        for k in (2, 3, 4, 5, 6):
            for a in sc.alpha_grid(k, 0.07):
                assert sc.sphere_exact(k, a) == sc.sphere_criterion_basic(k, a)
