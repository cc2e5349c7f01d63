"""Partition-sum oracles, the exact Cantor-measure evaluator, and the
identity checkers built on them."""

import numpy as np
import pytest

from reglab.oracles import (
    Partition,
    c1_stability_check,
    cantor_measure_curve,
    chain_rule_check,
    full_partition,
    integration_by_parts_check,
    ito_formula_residual_c1,
    ito_formula_residual_c2,
    ito_sum,
    qv_partition,
    stieltjes_sum,
    stratonovich_sum,
    strided_partition,
)
from reglab.paths import (
    SamplePath,
    cantor_function,
    cantor_support_indicator,
    make_grid,
    path_from_function,
    sample_bm,
    sample_fbm,
    sample_sde_euler,
)
from reglab.regularize import cov_eps, eps_ladder, forward_eps
from conftest import max_abs


class TestPartition:
    def test_full(self, grid256):
        pi = full_partition(grid256)
        assert pi.mesh == grid256.dt
        assert len(pi.idx) == grid256.n + 1

    def test_strided(self, grid256):
        pi = strided_partition(grid256, 8)
        assert pi.mesh == 8 * grid256.dt
        assert pi.idx[0] == 0 and pi.idx[-1] == grid256.n

    def test_invalid(self, grid256):
        with pytest.raises(ValueError):
            strided_partition(grid256, 7)  # does not divide 256
        with pytest.raises(ValueError):
            Partition(grid256, np.array([0, 5, 5, grid256.n]))
        with pytest.raises(ValueError):
            Partition(grid256, np.array([1, grid256.n]))


class TestItoSum:
    def test_unit_integrand_telescopes(self, bm_pair):
        w, _ = bm_pair
        for stride in (1, 4, 16):
            pi = strided_partition(w.grid, stride)
            got = ito_sum(1.0, w, pi)
            assert max_abs(got, w.values - w.values[0]) < 1e-13

    def test_left_point_window_integrand(self, bm_pair):
        # H = c 1_[a,b) on cell-aligned windows gives c (X_{b^t} - X_{a^t})
        w, _ = bm_pair
        g = w.grid
        a, b = 0.25, 0.75
        H = lambda t: 5.0 * ((np.asarray(t) >= a) & (np.asarray(t) < b))
        got = ito_sum(H, w, full_partition(g))
        expected = 5.0 * (w.at(np.minimum(g.times, b)) - w.at(np.minimum(g.times, a)))
        assert max_abs(got, expected) < 1e-12

    def test_off_partition_times_use_partial_increment(self, bm_pair):
        w, _ = bm_pair
        g = w.grid
        pi = strided_partition(g, 16)
        got = ito_sum(w, w, pi).values
        # naive reference
        idx = pi.idx
        for node in (3, 37, 255, 256):
            l = np.searchsorted(idx, node, side="right") - 1
            l = min(l, len(idx) - 2)
            acc = sum(
                w.values[idx[i]] * (w.values[idx[i + 1]] - w.values[idx[i]])
                for i in range(l)
            )
            acc += w.values[idx[l]] * (w.values[node] - w.values[idx[l]])
            assert got[node] == pytest.approx(acc, abs=1e-12)

    def test_square_rule_refinement(self):
        # sum W dW over refining partitions tends to (W_t^2 - t) / 2
        g = make_grid(1.0, 4096)
        errs = []
        for i in range(40):
            w = sample_bm(g, 201, i)
            got = ito_sum(w, w, full_partition(g)).values
            target = 0.5 * (w.values**2 - g.times)
            errs.append(np.max(np.abs(got - target)))
        assert np.median(errs) < 0.05


class TestStratonovich:
    def test_first_order_rule_for_square(self):
        # integral of W against itself, symmetric correction included,
        # recovers W_t^2 / 2 without the clock term
        g = make_grid(1.0, 4096)
        errs = []
        for i in range(40):
            w = sample_bm(g, 202, i)
            got = stratonovich_sum(w, w).values
            errs.append(np.max(np.abs(got - 0.5 * (w.values**2 - w.values[0] ** 2))))
        assert np.median(errs) < 0.06

    def test_unit_integrand(self, bm_pair):
        w, _ = bm_pair
        got = stratonovich_sum(SamplePath(w.grid, np.ones(w.grid.n + 1)), w)
        assert max_abs(got, w.values - w.values[0]) < 1e-13

    def test_smooth_integrator_matches_midpoint(self):
        g = make_grid(1.0, 2048)
        x = path_from_function(g, lambda t: np.sin(2 * t))
        h = path_from_function(g, np.cos)
        got = stratonovich_sum(h, x).values
        t = g.times
        mid = np.concatenate(
            [[0.0], np.cumsum(np.cos((t[:-1] + t[1:]) / 2) * np.diff(np.sin(2 * t)))]
        )
        assert np.max(np.abs(got - mid)) < 5e-3


class TestStieltjes:
    def test_constant_integrand(self, bm_pair):
        w, _ = bm_pair
        got = stieltjes_sum(2.5, w)
        assert max_abs(got, 2.5 * (w.values - w.values[0])) < 1e-13

    def test_identity_against_identity(self):
        g = make_grid(1.0, 1024)
        v = path_from_function(g, lambda t: t)
        got = stieltjes_sum(lambda t: t, v)
        assert abs(got.values[-1] - 0.5) < 2 * g.dt

    def test_cantor_indicator_full_mass(self):
        g = make_grid(1.0, 256)
        depth = 14
        h = lambda t: cantor_support_indicator(t, depth)
        got = cantor_measure_curve(h, g, depth)
        psi = cantor_function(g.times, depth)
        assert np.max(np.abs(got.values - psi)) < 1e-12
        assert got.values[-1] == 1.0

    def test_cantor_complement_zero_mass(self):
        g = make_grid(1.0, 256)
        depth = 14
        hc = lambda t: 1.0 - cantor_support_indicator(t, depth)
        assert np.all(cantor_measure_curve(hc, g, depth).values == 0.0)

    def test_cantor_mean_value(self):
        # the singular measure is symmetric about 1/2
        g = make_grid(1.0, 64)
        got = cantor_measure_curve(lambda a: a, g, 16)
        assert got.values[-1] == pytest.approx(0.5, abs=1e-4)

    def test_depth_guard(self):
        g = make_grid(1.0, 64)
        with pytest.raises(ValueError):
            cantor_measure_curve(lambda a: a, g, 25)


class TestQvPartition:
    def test_linear_path_vanishes(self):
        g = make_grid(1.0, 1024)
        lin = path_from_function(g, lambda t: t)
        assert qv_partition(lin).values[-1] == pytest.approx(g.dt, abs=1e-12)
        coarse = qv_partition(lin, strided_partition(g, 256))
        assert coarse.values[-1] == pytest.approx(0.25, abs=1e-12)

    def test_brownian_unit_clock(self):
        g = make_grid(1.0, 4096)
        vals = [qv_partition(sample_bm(g, 203, i)).values[-1] for i in range(200)]
        assert np.median(np.abs(np.asarray(vals) - 1.0)) < 0.1

    def test_nonnegative_nondecreasing_on_partition(self, bm_pair):
        w, _ = bm_pair
        pi = strided_partition(w.grid, 8)
        curve = qv_partition(w, pi).values
        assert np.all(curve >= 0)
        assert np.all(np.diff(curve[pi.idx]) >= 0)

    def test_cross_check_against_regularized_bracket(self):
        g = make_grid(1.0, 4096)
        diffs = []
        for i in range(30):
            w = sample_bm(g, 204, i)
            diffs.append(
                abs(qv_partition(w).values[-1] - cov_eps(w, w, 4 * g.dt).values[-1])
            )
        assert np.median(diffs) < 0.1


class TestSecondOrderFormula:
    def test_linear_map_residual_is_decaying_boundary(self):
        # with a vanishing second derivative only the eps-window boundary of
        # the telescoped first term remains, decaying like the path modulus
        g = make_grid(1.0, 1024)
        paths = [sample_bm(g, 205, i) for i in range(32)]
        rep = ito_formula_residual_c2(
            lambda x: 3 * x - 1, lambda x: 3 * np.ones_like(x),
            lambda x: np.zeros_like(x), paths, eps_ladder(g, (16, 8, 4)), delta=1.0,
        )
        assert rep.median[0] > rep.median[-1]
        assert rep.slope > 0.3

    def test_square_recovers_bracket_identity(self):
        # W_t^2 - 2 int W dW - t -> 0: same content, independent route
        g = make_grid(1.0, 4096)
        errs = []
        for i in range(40):
            w = sample_bm(g, 206, i)
            fwd = forward_eps(w, w, 4 * g.dt).values
            c = cov_eps(w, w, 4 * g.dt).values
            errs.append(np.max(np.abs(w.values**2 - 2 * fwd - c)))
        assert np.median(errs) < 0.15  # eps-window telescope boundary

    def test_residual_decays_along_ladder(self):
        g = make_grid(1.0, 2048)
        paths = [sample_bm(g, 207, i) for i in range(32)]
        rep = ito_formula_residual_c2(
            np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x),
            paths, eps_ladder(g, (64, 16, 4)), delta=1.0,
        )
        assert rep.median[0] > rep.median[-1]
        assert rep.slope > 0.25


class TestFirstOrderFormula:
    def test_c2_subsumption(self):
        g = make_grid(1.0, 2048)
        paths = [sample_bm(g, 208, i) for i in range(32)]
        ladder = eps_ladder(g, (16, 4))
        rep = ito_formula_residual_c1(
            lambda x: x**2, lambda x: 2 * x, paths, ladder, delta=0.1
        )
        assert rep.converges

    def test_absolute_value_derivative_on_bm(self):
        g = make_grid(1.0, 2048)
        paths = [sample_bm(g, 209, i) for i in range(40)]
        rep = ito_formula_residual_c1(
            lambda x: 0.5 * x * np.abs(x), np.abs, paths, eps_ladder(g, (64, 16, 4)),
            delta=0.1,
        )
        assert rep.converges
        assert rep.median[0] > rep.median[-1]

    def test_absolute_value_derivative_on_euler_path(self):
        g = make_grid(1.0, 2048)
        sig = lambda t, x: 1.0 + 0.5 * np.cos(x) ** 2
        drift = lambda t, x: -0.25 * x
        paths = [sample_sde_euler(g, sig, drift, 0.5, 210, i) for i in range(40)]
        rep = ito_formula_residual_c1(
            lambda x: 0.5 * x * np.abs(x), np.abs, paths, eps_ladder(g, (64, 16, 4)),
            delta=0.2,
        )
        assert rep.converges


class TestChainRule:
    def test_unit_outer_integrand_exact_on_common_grid(self):
        # sum 1 dN telescopes to N at every partition; the product sum
        # matches it identically once both live on N's own grid
        g = make_grid(1.0, 1024)
        paths = [sample_bm(g, 211, i) for i in range(32)]
        rep = chain_rule_check(paths[0], 1.0, paths, strides=(64, 16, 1), delta=1e-10)
        assert rep.converges
        assert rep.median[-1] < 1e-12

    def test_unit_inner_integrand_exact_at_every_mesh(self):
        g = make_grid(1.0, 1024)
        paths = [sample_bm(g, 212, i) for i in range(32)]
        K = paths[1]
        rep = chain_rule_check(1.0, K, paths, strides=(64, 16, 1), delta=1e-10)
        assert max(rep.median) < 1e-12

    def test_self_composition_refines_to_zero(self):
        g = make_grid(1.0, 2048)
        Ms = [sample_bm(g, 213, i) for i in range(32)]
        rep = chain_rule_check(Ms[0], Ms[0], Ms, strides=(256, 64, 16, 1), delta=1e-10)
        assert rep.median[0] > rep.median[-2] > rep.median[-1]
        assert rep.converges


class TestIntegrationByParts:
    def test_unit_second_factor_linear(self):
        g = make_grid(1.0, 1024)
        x = path_from_function(g, lambda t: t)
        one = SamplePath(g, np.ones(g.n + 1))
        resid = integration_by_parts_check(x, one, 8 * g.dt).values
        keep = g.times <= 1.0 - 8 * g.dt
        assert np.max(np.abs(resid[keep])) < 1e-12

    def test_brownian_pair_residual_decays(self):
        g = make_grid(1.0, 2048)
        meds = []
        for k in (64, 16, 4):
            sups = []
            for i in range(30):
                x = sample_bm(g, 214, 2 * i)
                y = sample_bm(g, 214, 2 * i + 1)
                sups.append(np.max(np.abs(integration_by_parts_check(x, y, k * g.dt).values)))
            meds.append(np.median(sups))
        assert meds[0] > meds[-1]
        assert meds[-1] < 0.15

    def test_bm_against_independent_fbm(self):
        g = make_grid(1.0, 2048)
        sups, covs = [], []
        for i in range(30):
            x = sample_bm(g, 215, i)
            y = sample_fbm(g, 0.7, 215, i)
            sups.append(np.max(np.abs(integration_by_parts_check(x, y, 4 * g.dt).values)))
            covs.append(np.max(np.abs(cov_eps(x, y, 4 * g.dt).values)))
        assert np.median(sups) < 0.15
        assert np.median(covs) < 0.05


class TestC1Stability:
    def test_identity_maps_tautology(self):
        g = make_grid(1.0, 1024)
        pairs = [(sample_bm(g, 216, i), sample_bm(g, 216, i)) for i in range(32)]
        rep = c1_stability_check(
            lambda x: x, lambda x: np.ones_like(x),
            lambda x: x, lambda x: np.ones_like(x),
            pairs, eps_ladder(g, (16, 4)), delta=1e-10,
        )
        assert rep.median[-1] < 1e-12

    def test_square_map_against_clock_weighted_bracket(self):
        # bracket of (W^2, W) tends to the 2W-weighted clock integral
        g = make_grid(1.0, 4096)
        errs = []
        for i in range(30):
            w = sample_bm(g, 217, i)
            lhs = cov_eps(SamplePath(g, w.values**2), w, 4 * g.dt).values
            quad = np.concatenate([[0.0], np.cumsum(2 * w.values[:-1] * g.dt)])
            errs.append(np.max(np.abs(lhs - quad)))
        assert np.median(errs) < 0.15

    def test_composed_maps_track_base_bracket(self):
        g = make_grid(1.0, 2048)
        pairs = [(sample_bm(g, 218, i), sample_bm(g, 218, i)) for i in range(32)]
        rep = c1_stability_check(
            lambda x: x**2, lambda x: 2 * x,
            np.sin, np.cos,
            pairs, eps_ladder(g, (64, 16, 4)), delta=0.25,
        )
        assert rep.converges

    def test_independent_pair_both_sides_vanish(self):
        g = make_grid(1.0, 2048)
        pairs = [
            (sample_bm(g, 219, 2 * i), sample_bm(g, 219, 2 * i + 1)) for i in range(30)
        ]
        rep = c1_stability_check(
            lambda x: x**2, lambda x: 2 * x,
            np.sin, np.cos,
            pairs, eps_ladder(g, (16, 4)), delta=0.2,
        )
        assert rep.converges


class TestBracketExistenceIdentity:
    def test_square_telescope_links_forward_and_bracket(self):
        # X_t^2 - X_0^2 = 2 int X d-X + [X, X] up to the eps-window boundary,
        # pathwise, at every finite eps
        g = make_grid(1.0, 2048)
        for i in range(5):
            x = sample_fbm(g, 0.55, 220, i)
            for k in (16, 4):
                eps = k * g.dt
                lhs = x.values**2 - x.values[0] ** 2
                rhs = 2 * forward_eps(x, x, eps).values + cov_eps(x, x, eps).values
                # window average of X^2 minus X^2 itself remains
                assert np.max(np.abs(lhs - rhs)) < 0.35
