import numpy as np
import pytest

from kgraph_toolkit.core.errors import ContinuationStallError, DomainError
from kgraph_toolkit.continuation import (
    HomotopyOptions,
    continuity_solve,
    random_guess,
    uniqueness_probe,
)
from kgraph_toolkit.geometry import make_field
from kgraph_toolkit.mce import Grid, NewtonOptions, manufactured_H, newton_solve


class TestHomotopyOptions:

    def test_defaults(self):
        opts = HomotopyOptions()
        assert (opts.dsigma, opts.dsigma_max, opts.dsigma_min) == (0.1, 0.25, 1e-4)

    def test_step_ordering(self):
        with pytest.raises(ValueError):
            HomotopyOptions(dsigma=0.5, dsigma_max=0.25)


class TestContinuitySolve:

    def test_trivial_problem_takes_one_step(self, warped, unit_disc):
        grid = Grid.radial(warped, unit_disc, 16)
        state = continuity_solve(warped, grid, 0.0)
        assert state.complete
        assert len(state.history) == 1
        assert state.history[0].sigma == 1.0
        assert state.history[0].iterations == 0
        assert state.u.max_abs() == 0.0

    def test_hemisphere(self, euclidean, cap_disc):
        grid = Grid.radial(euclidean, cap_disc, 32)
        state = continuity_solve(euclidean, grid, -1.0)
        assert state.sigma == 1.0
        sigmas = [step.sigma for step in state.accepted_steps]
        assert sigmas == sorted(sigmas)
        assert sigmas[-1] == 1.0
        center = state.u.values[0]
        boundary = state.u.boundary_values[0]
        assert center - boundary == pytest.approx(0.4, abs=5e-3)

    def test_step_bounds(self, euclidean, cap_disc):
        grid = Grid.radial(euclidean, cap_disc, 16)
        state = continuity_solve(euclidean, grid, -0.5)
        steps = np.diff([0.0] + [s.sigma for s in state.accepted_steps])
        assert steps[0] == pytest.approx(0.1)
        assert max(steps) <= 0.25 + 1e-12
        assert state.dsigma <= 0.25

    def test_boundary_data_is_scaled(self, hyperbolic, unit_disc):
        grid = Grid.radial(hyperbolic, unit_disc, 16)
        state = continuity_solve(hyperbolic, grid, 0.0, make_field("constant", value=0.2))
        assert state.u.values == pytest.approx(0.2, abs=1e-9)

    def test_nonexistence_stalls(self, euclidean, unit_disc):
        grid = Grid.radial(euclidean, unit_disc, 32)
        opts = HomotopyOptions(newton=NewtonOptions(max_iter=30))
        with pytest.raises(ContinuationStallError) as info:
            continuity_solve(euclidean, grid, -2.0, opts=opts)
        err = info.value
        assert err.last_sigma < 1.0
        assert any(not step.accepted for step in err.history)
        accepted = [step.sigma for step in err.history if step.accepted]
        assert accepted and accepted[-1] == pytest.approx(err.last_sigma)
        # a spherical cap exists only while 2σ ≤ 1/r0
        assert err.last_sigma < 0.6

    def test_model_mismatch(self, euclidean, hyperbolic, unit_disc):
        grid = Grid.radial(euclidean, unit_disc, 16)
        with pytest.raises(DomainError):
            continuity_solve(hyperbolic, grid, 0.0)

    def test_final_step_lands_on_one(self, euclidean, cap_disc):
        grid = Grid.radial(euclidean, cap_disc, 32)
        state = continuity_solve(euclidean, grid, -1.0)
        sigmas = [step.sigma for step in state.accepted_steps]
        assert len(set(sigmas)) == len(sigmas)
        assert sigmas.count(1.0) == 1
        assert state.history[-1].sigma == 1.0

    def test_endpoint_matches_a_direct_solve(self, euclidean, cap_disc):
        grid = Grid.radial(euclidean, cap_disc, 32)
        state = continuity_solve(euclidean, grid, -1.0)
        direct = newton_solve(euclidean, grid, -1.0).u
        assert np.max(np.abs(state.u.values - direct.values)) <= 1e-10

    def test_warm_starts_converge_quickly(self, euclidean, cap_disc):
        grid = Grid.radial(euclidean, cap_disc, 32)
        state = continuity_solve(euclidean, grid, -1.0)
        assert max(step.iterations for step in state.accepted_steps) <= 8


class TestUniqueness:

    def test_hemisphere_from_several_guesses(self, euclidean, cap_disc):
        grid = Grid.radial(euclidean, cap_disc, 32)
        outcome = uniqueness_probe(euclidean, grid, -1.0, None, [0.0, 0.2, 0.4])
        assert outcome.unique
        assert len(outcome.solutions) == 3

    def test_needs_two_guesses(self, euclidean, cap_disc):
        grid = Grid.radial(euclidean, cap_disc, 16)
        with pytest.raises(DomainError):
            uniqueness_probe(euclidean, grid, -1.0, None, [0.0])

    def test_comparison_of_boundary_data(self, euclidean, cap_disc):
        """Raising φ by a constant lifts the solution by the same constant"""
        grid = Grid.radial(euclidean, cap_disc, 32)
        low = continuity_solve(euclidean, grid, -1.0).u
        high = continuity_solve(euclidean, grid, -1.0, make_field("constant", value=0.1)).u
        difference = high.values - low.values
        assert np.all(difference >= 0.0)
        assert difference == pytest.approx(0.1, abs=1e-8)

    def test_comparison_for_minimal_graphs(self, euclidean, unit_disc):
        grid = Grid.radial(euclidean, unit_disc, 32)
        low = continuity_solve(euclidean, grid, 0.0).u
        high = continuity_solve(euclidean, grid, 0.0, make_field("constant", value=0.1)).u
        assert low.max_abs() == pytest.approx(0.0, abs=1e-12)
        assert high.values == pytest.approx(0.1, abs=1e-10)

    def test_minimal_graph_from_a_random_guess(self, euclidean, unit_disc):
        grid = Grid.radial(euclidean, unit_disc, 64)
        outcome = uniqueness_probe(euclidean, grid, 0.0, None, [0.0, random_guess(grid, 0.1, seed=1)])
        assert outcome.max_difference <= 1e-8

    @pytest.mark.parametrize("m", [16, 32])
    def test_random_guess_on_polar_grids(self, euclidean, unit_disc, m):
        grid = Grid.polar(euclidean, unit_disc, m, m)
        outcome = uniqueness_probe(euclidean, grid, 0.0, None, [0.0, random_guess(grid, 0.1, seed=1)])
        assert outcome.max_difference <= 1e-8

    def test_manufactured_battery_case(self, warped, unit_disc):
        bump = make_field("exp_bump", amplitude=0.3, width=1.0)
        grid = Grid.radial(warped, unit_disc.with_phi(bump), 32)
        guesses = [0.0, random_guess(grid, 0.1, seed=2)]
        outcome = uniqueness_probe(warped, grid, manufactured_H(warped, bump), None, guesses)
        assert outcome.unique

    @pytest.mark.parametrize("model_name", ["warped", "hyperbolic"])
    def test_comparison_on_curved_models(self, request, unit_disc, model_name):
        """Boundary data ordered on Γ give solutions ordered in Ω"""
        model = request.getfixturevalue(model_name)
        grid = Grid.polar(model, unit_disc, 16, 16)
        low = continuity_solve(model, grid, 0.3).u
        high = continuity_solve(model, grid, 0.3, make_field("plane", slope_x=0.05, value=0.1)).u
        assert np.all(high.values - low.values >= -1e-10)
        assert np.max(high.values - low.values) > 0.0


class TestRandomGuess:

    def test_reproducible(self, euclidean, unit_disc):
        grid = Grid.polar(euclidean, unit_disc, 8, 8)
        a = random_guess(grid, 0.1, seed=7)
        b = random_guess(grid, 0.1, seed=7)
        assert np.array_equal(a.values, b.values)
        assert a.max_abs() <= 0.1
