import math

import numpy as np
import pytest

from drcw.design import (
    DesignFailure,
    design_bd,
    design_by_method,
    design_nm_drcw,
    design_ptm,
    design_uniform,
    recover_amplitudes,
    round_solution,
)
from drcw.nullspec import (
    NullSpec,
    annihilator_coeffs,
    constraint_basis,
    max_null_violation,
    quadratic_form,
)
from drcw.sdp import solve_partition_sdp
from drcw.sequences import window_template
from oracles import brute_force_partition_max


def make_form(m, k0, kind="hamming"):
    basis = constraint_basis(annihilator_coeffs(NullSpec(k0=k0)), m)
    return basis, quadratic_form(basis, window_template(kind, m))


class TestRoundSolution:
    def test_rank_one_shortcut(self):
        s_true = np.array([1.0, -1.0, 1.0, 1.0])
        shat = np.outer(s_true, s_true)
        at = np.eye(4)
        rounded = round_solution(shat, at, trials=10, seed=0)
        assert rounded.used_rank1_shortcut
        assert np.array_equal(rounded.s, s_true) or np.array_equal(rounded.s, -s_true)

    def test_identity_relaxation_finds_aligned_signs(self):
        at = np.ones((2, 2))
        rounded = round_solution(np.eye(2), at, trials=64, seed=1)
        assert not rounded.used_rank1_shortcut
        assert abs(rounded.s[0]) == 1 and rounded.s[0] == rounded.s[1]
        assert rounded.objective == pytest.approx(4.0)

    def test_matches_exhaustive_on_small_instances(self):
        rng = np.random.default_rng(23)
        hits = 0
        total = 20
        for _ in range(total):
            m = int(rng.integers(4, 13))
            _, form = make_form(m, int(rng.integers(1, m - 1)))
            sol = solve_partition_sdp(form)
            rounded = round_solution(sol, form, trials=1000, seed=int(rng.integers(0, 2**31)))
            best, _ = brute_force_partition_max(form.a_tilde)
            scale = max(1.0, abs(best))
            # bound sandwich: exhaustive and rounded both sit under the bound
            assert best <= sol.objective + 1e-6 * scale
            assert rounded.objective <= sol.objective + 1e-6 * scale
            assert rounded.objective >= 0.9 * best - 1e-12
            if rounded.objective >= best - 1e-9 * scale:
                hits += 1
        assert hits >= int(0.8 * total)

    def test_deterministic_given_seed(self):
        _, form = make_form(10, 3)
        sol = solve_partition_sdp(form)
        a = round_solution(sol, form, trials=200, seed=42)
        b = round_solution(sol, form, trials=200, seed=42)
        assert np.array_equal(a.s, b.s)
        assert a.objective == b.objective

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError, match="trials"):
            round_solution(np.eye(2), np.eye(2), trials=0, seed=0)

    def test_clamps_negative_eigenvalues(self):
        shat = np.array([[1.0, 0.999], [0.999, 1.0]])
        shat[0, 1] = shat[1, 0] = 1.001  # slightly indefinite
        rounded = round_solution(shat, np.ones((2, 2)), trials=16, seed=0)
        assert rounded.clamped_eigenvalues or rounded.used_rank1_shortcut


class TestRecoverAmplitudes:
    def test_identity_basis_reproduces_signs(self):
        basis = constraint_basis([1.0], 5)
        window = window_template("rectangular", 5)
        s = np.array([1, -1, 1, 1, -1])
        b_hat, y = recover_amplitudes(s, basis, window)
        assert np.allclose(y, s, atol=1e-12)
        assert np.allclose(b_hat, s, atol=1e-12)

    def test_energy_is_always_m(self):
        rng = np.random.default_rng(3)
        for m, k0 in ((6, 2), (20, 7), (50, 20)):
            basis = constraint_basis(annihilator_coeffs(NullSpec(k0=k0)), m)
            window = window_template("hamming", m)
            s = np.where(rng.standard_normal(m) >= 0, 1, -1)
            _, y = recover_amplitudes(s, basis, window)
            assert float(np.sum(y * y)) == pytest.approx(m, abs=1e-8 * m)

    def test_matches_least_squares_oracle(self):
        # project Diag(w) s onto span(A), renormalize: same y up to sign
        basis = constraint_basis([1.0, -1.0], 3)
        window = window_template("rectangular", 3)
        s = np.array([1, -1, 1])
        _, y = recover_amplitudes(s, basis, window)
        coeffs, *_ = np.linalg.lstsq(basis.A, window.values * s, rcond=None)
        y_ls = basis.A @ coeffs
        y_ls *= math.sqrt(3) / np.linalg.norm(y_ls)
        assert np.allclose(y, y_ls, atol=1e-10)

    def test_degenerate_window_fails(self):
        # span(A) for (1-z) over m=2 is the difference direction; a constant
        # sign vector under a rectangular window is orthogonal to it
        basis = constraint_basis([1.0, -1.0], 2)
        window = window_template("rectangular", 2)
        with pytest.raises(DesignFailure, match="orthogonal"):
            recover_amplitudes(np.array([1, 1]), basis, window)


class TestDesignNmDrcw:
    def test_result_invariants(self):
        spec = NullSpec(k0=6, nulls=((0.6 * math.pi, 2),))
        window = window_template("hamming", 24)
        result = design_nm_drcw(24, spec, window, trials=300, seed=9)
        y = result.y
        assert float(np.sum(y * y)) == pytest.approx(24, abs=1e-8 * 24)
        assert np.array_equal(result.transmit_order * result.weights, y)
        assert np.all(np.abs(result.transmit_order) == 1)
        assert np.all(result.weights >= 0)
        prov = result.provenance
        scale = max(1.0, abs(prov.sdp_bound))
        assert prov.rounded_objective <= prov.sdp_bound + 1e-6 * scale
        assert max_null_violation(y, spec) <= 1e-8 * 24

    def test_rect_nag_near_zero_at_k0_10(self):
        # with a rectangular template and a mild null the weights stay
        # nearly uniform, so the accumulation loss is a few hundredths of a dB
        result = design_nm_drcw(
            50, NullSpec(k0=10), window_template("rectangular", 50), trials=1000, seed=2020
        )
        w = result.weights
        gain = 10 * math.log10(np.sum(w) ** 2 / (50 * np.sum(w * w)))
        assert gain == pytest.approx(-0.05, abs=0.5)

    def test_full_order_collapses_to_binomial_shape(self):
        # K = m-1 leaves one basis column: |y| must follow binomial weights
        m = 12
        result = design_nm_drcw(
            m, NullSpec(k0=m - 1), window_template("rectangular", m), trials=50, seed=0
        )
        bd = design_bd(m)
        assert np.allclose(result.weights, bd.weights, atol=1e-9)
        signs = result.transmit_order * result.transmit_order[0]
        assert np.array_equal(signs, bd.transmit_order)

    def test_seed_determinism(self):
        spec = NullSpec(k0=4)
        window = window_template("hanning", 16)
        a = design_nm_drcw(16, spec, window, trials=100, seed=77)
        b = design_nm_drcw(16, spec, window, trials=100, seed=77)
        assert np.array_equal(a.y, b.y)
        assert a.provenance == b.provenance

    def test_rejects_budget_violation(self):
        with pytest.raises(ValueError, match="K <= M-1"):
            design_nm_drcw(10, NullSpec(k0=10), window_template("rectangular", 10))

    def test_rejects_window_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            design_nm_drcw(10, NullSpec(k0=2), window_template("hamming", 9))


class TestBaselines:
    def test_bd_is_binomial_expansion(self):
        result = design_bd(4)
        ratios = result.y / result.y[0]
        assert np.allclose(ratios, [1.0, -3.0, 3.0, -1.0], rtol=1e-13)

    @pytest.mark.parametrize("m", [4, 8, 16, 50])
    def test_bd_integer_coefficients_after_rescale(self, m):
        result = design_bd(m)
        rescaled = result.y / result.y[0]
        expected = np.array([(-1) ** j * math.comb(m - 1, j) for j in range(m)], dtype=float)
        assert np.array_equal(np.round(rescaled), expected)
        assert np.max(np.abs(rescaled - expected)) <= 1e-9 * np.max(np.abs(expected))

    def test_ptm_moment_conditions(self):
        result = design_ptm(4)
        s = result.y
        assert np.sum(s) == 0
        assert np.sum(np.arange(4) * s) == 0
        # order 8: moments up to p=2 vanish
        s8 = design_ptm(8).y
        for p in range(3):
            assert np.sum(np.arange(8.0) ** p * s8) == 0

    def test_ptm_rejects_non_power_of_two(self):
        with pytest.raises(ValueError, match="power of two"):
            design_ptm(48)

    def test_uniform_gain_is_exactly_zero(self):
        result = design_uniform(17)
        w = result.weights
        assert 10 * math.log10(np.sum(w) ** 2 / (17 * np.sum(w * w))) == 0.0

    def test_alternating_standard_order(self):
        assert design_uniform(4).transmit_order.tolist() == [1, -1, 1, -1]
        assert design_bd(5).transmit_order.tolist() == [1, -1, 1, -1, 1]

    def test_dispatch(self):
        assert design_by_method("ptm", 8).method == "ptm"
        assert design_by_method("bd", 8).method == "bd"
        assert design_by_method("uniform", 8).method == "uniform"
        result = design_by_method(
            "nm_drcw", 12, spec=NullSpec(k0=2), window=window_template("hamming", 12),
            trials=50, seed=0,
        )
        assert result.method == "nm_drcw"
        with pytest.raises(ValueError, match="unknown method"):
            design_by_method("magic", 8)
        with pytest.raises(ValueError, match="null specification"):
            design_by_method("nm_drcw", 8)
