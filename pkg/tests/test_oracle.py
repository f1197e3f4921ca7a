import numpy as np
import pytest

from pofbounds import (
    bft_mmf_bound_equal,
    mmf_bound_unequal,
    pf_bound_equal,
    pf_bound_unequal,
    solve_mmf,
    solve_utilitarian,
    validate_instance,
)
from pofbounds.oracle import (
    UnsupportedN,
    grid_min_mmf_bound,
    grid_min_pf_bound,
    lex_dominance_check,
    random_feasible_array,
    random_feasible_points,
)

from conftest import random_instance


class TestGrid:
    def test_pf_three_equal(self):
        assert grid_min_pf_bound((1, 1, 1)) == pytest.approx(pf_bound_equal(3).bound, abs=1e-3)

    def test_pf_two_equal(self):
        assert grid_min_pf_bound((1, 1)) == pytest.approx(pf_bound_equal(2).bound, abs=1e-4)

    def test_pf_two_unequal(self):
        assert grid_min_pf_bound((1, 0.25)) == pytest.approx(0.375, abs=1e-3)

    def test_mmf_values(self):
        assert grid_min_mmf_bound((1, 1, 1)) == pytest.approx(bft_mmf_bound_equal(3), abs=1e-3)
        assert grid_min_mmf_bound((1, 0.25)) == pytest.approx(0.375, abs=1e-3)
        assert grid_min_mmf_bound((1, 1)) == pytest.approx(1 / 9, abs=1e-3)

    def test_never_beats_formula(self):
        rng = np.random.default_rng(5)
        for _ in range(4):
            for n in (2, 3):
                L = np.exp(rng.normal(0, 1, n))
                assert grid_min_pf_bound(L, refine_rounds=1) <= pf_bound_unequal(L).bound + 1e-9
                assert grid_min_mmf_bound(L, refine_rounds=1) <= mmf_bound_unequal(L).bound + 1e-9

    def test_unsupported(self):
        with pytest.raises(UnsupportedN):
            grid_min_pf_bound((1, 1, 1, 1))
        with pytest.raises(ValueError):
            grid_min_mmf_bound((1, 1), coarse_steps=10)


class TestSampling:
    def test_feasible_and_reproducible(self, rng):
        inst = random_instance(rng, 5, zero_costs=True)
        pts = random_feasible_points(inst, 100, 7)
        assert len(pts) == 100
        assert all(inst.contains(p.utilities, tol=0.0) for p in pts)
        again = random_feasible_points(inst, 100, 7)
        assert [p.utilities for p in pts] == [p.utilities for p in again]

    def test_budget_respected(self):
        inst = validate_instance((1, 1), (1, 1))
        pts = random_feasible_array(inst, 10_000, 1)
        assert np.max(pts.sum(axis=1)) <= 1 + 1e-12

    def test_boundary_coverage(self):
        inst = validate_instance((1, 1, 1), (0.5, 0.5, 0.5))
        pts = random_feasible_array(inst, 10_000, 2)
        binding = np.abs(pts @ inst.c - 1.0) <= 1e-12
        assert binding.mean() >= 0.2

    def test_bad_count(self, rng):
        with pytest.raises(ValueError):
            random_feasible_array(random_instance(rng, 2), 0, 1)


class TestLexCheck:
    def test_mmf_passes(self, rng):
        for seed in range(10):
            inst = random_instance(rng, int(rng.integers(2, 7)), zero_costs=seed % 2 == 1)
            assert lex_dominance_check(inst, solve_mmf(inst), 10_000, seed)

    def test_utilitarian_fails(self):
        inst = validate_instance((1, 0.25), (1, 4))
        u, _ = solve_utilitarian(inst)
        assert u.utilities == (1.0, 0.0)
        assert not lex_dominance_check(inst, u, 10_000, 0)

    def test_full_box(self):
        inst = validate_instance((1, 2), (0.4, 0.1))
        assert lex_dominance_check(inst, solve_mmf(inst), 1000, 0)
        assert solve_mmf(inst).utilities == (1.0, 2.0)
