import math

import numpy as np
import pytest

from pofbounds import (
    CaseTag,
    InvalidN,
    bft_mmf_bound_equal,
    construct_mmf_worstcase,
    construct_pf_worstcase_equal,
    construct_pf_worstcase_unequal,
    mmf_bound_unequal,
    pf_bound_equal,
    solve_mmf,
    solve_pf_closed_form,
    verify_tightness,
)
from pofbounds.allocation import solve_pf
from pofbounds.experiments import sample_limits

from conftest import random_limits

SQ3 = math.sqrt(3.0)


class TestPFEqual:
    def test_n2(self):
        inst = construct_pf_worstcase_equal(2)
        assert inst.costs == (SQ3 - 1, 1.0)

    def test_n4(self):
        assert construct_pf_worstcase_equal(4).costs == (0.5, 0.5, 1.0, 1.0)

    def test_n6_tie_low(self):
        assert construct_pf_worstcase_equal(6).costs == (0.5, 0.5, 1.0, 1.0, 1.0, 1.0)

    @pytest.mark.parametrize("n", range(2, 40))
    def test_matches_unequal_construction(self, n):
        a = construct_pf_worstcase_equal(n)
        b = construct_pf_worstcase_unequal([1.0] * n)
        assert np.allclose(sorted(a.costs), sorted(b.costs), atol=1e-15)

    def test_invalid(self):
        with pytest.raises(InvalidN):
            construct_pf_worstcase_equal(1)


class TestPFUnequal:
    def test_two_players(self):
        inst = construct_pf_worstcase_unequal((1, 0.25))
        assert inst.costs == (1.0, 4.0)
        r = verify_tightness((1, 0.25), "PF", 1e-12)
        assert r.achieved_pof == pytest.approx(0.375, abs=1e-15)

    def test_three_equal(self):
        inst = construct_pf_worstcase_unequal((1, 1, 1))
        assert inst.costs == (0.5, 0.5, 1.0)
        assert verify_tightness((1, 1, 1), "PF").achieved_pof == pytest.approx(1 / 6, abs=1e-15)

    def test_original_player_order_kept(self):
        inst = construct_pf_worstcase_unequal((0.25, 1))
        assert inst.limits.values == (0.25, 1.0)
        assert inst.costs == (4.0, 1.0)

    def test_closed_form_applies(self, rng):
        for draw in range(300):
            L = random_limits(rng, int(rng.integers(2, 13)), draw)
            inst = construct_pf_worstcase_unequal(L)
            u = solve_pf_closed_form(inst)
            assert u is not None
            assert np.all(inst.c * inst.L >= 1 / inst.n - 1e-12)
            assert np.allclose(u.as_array(), 1 / (inst.n * inst.c), rtol=1e-12)

    def test_ytilde_case_exercised(self, rng):
        tags = {verify_tightness(random_limits(rng, 3, d), "PF").bound_report.case_tag for d in range(200)}
        assert CaseTag.PF_UNEQUAL_CASE1 in tags
        assert CaseTag.PF_UNEQUAL_CASE2_YTILDE in tags or CaseTag.PF_UNEQUAL_CASE2_H in tags


class TestMMF:
    def test_two_players_s2(self):
        inst = construct_mmf_worstcase((1, 0.25))
        assert inst.costs == (1.0, 4.0)

    def test_n9_equal(self):
        inst = construct_mmf_worstcase([1.0] * 9)
        assert inst.costs == pytest.approx((0.2,) * 5 + (1.0,) * 4, abs=1e-15)
        assert verify_tightness([1.0] * 9, "MMF").achieved_pof == pytest.approx(0.64, abs=1e-12)

    def test_n2_equal(self):
        r = mmf_bound_unequal((1, 1))
        assert r.l_star == 1 and r.aux["Y"] == 0.5
        assert construct_mmf_worstcase((1, 1)).costs == (0.5, 1.0)
        assert verify_tightness((1, 1), "MMF").achieved_pof == pytest.approx(bft_mmf_bound_equal(2), abs=1e-15)

    def test_mmf_allocation_shape(self, rng):
        for draw in range(300):
            L = random_limits(rng, int(rng.integers(2, 13)), draw)
            inst = construct_mmf_worstcase(L)
            r = mmf_bound_unequal(L)
            Y, l_star = r.aux["Y"], r.l_star
            assert 0 < Y <= 1
            expected = inst.L / (Y + inst.n - l_star)
            assert np.max(np.abs(solve_mmf(inst).as_array() - expected)) <= 1e-10


class TestVerify:
    def test_pf_n2(self):
        r = verify_tightness((1, 1), "PF", 1e-9)
        assert r.passed
        assert r.bound == pytest.approx((2 - SQ3) / 4, abs=1e-15)

    def test_mmf_two_players(self):
        r = verify_tightness((1, 0.25), "MMF", 1e-9)
        assert r.passed and r.bound == r.achieved_pof == 0.375

    def test_truncated_normal_n9(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            L = sample_limits(rng, 9, 0.5)
            assert verify_tightness(L, "PF", 1e-8).passed

    @pytest.mark.parametrize("crit", ["PF", "MMF"])
    def test_constructed_instances_valid(self, crit, rng):
        for draw in range(200):
            L = random_limits(rng, int(rng.integers(2, 13)), draw)
            inst = verify_tightness(L, crit).instance
            assert np.all(inst.c >= 0) and np.all(inst.c * inst.L <= 1.0)

    def test_failure_diagnostics(self):
        r = verify_tightness((1, 0.3, 0.2), "PF", 1e-300)
        d = r.to_dict()
        assert set(d) >= {"bound", "achieved_pof", "gap", "pass", "instance"}
        assert d["pass"] == (r.gap <= 1e-300)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            verify_tightness((1, 1), "PF", 0.0)
