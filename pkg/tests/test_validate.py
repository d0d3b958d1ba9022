"""Tests for the grid certification sweeps."""

import math
from fractions import Fraction as F

import mpmath
import pytest

from binotail.validate import (
    GridSpec,
    K_RULES,
    RATIO_CAP_GLOBAL,
    RATIO_CAP_INTERIOR,
    SUITE_IDS,
    ViolationReport,
    WIDTH_CAP,
    conjecture_scan,
    conjecture_slice,
    convergence_suite,
    monotonicity_suite,
    run_suite,
    _WeightTable,
    _cmp_surd_pair,
    _escalate,
    _sign_surd,
    _sign_two_surds,
    _tail_sum,
)

SMALL_GRID = GridSpec(n_values=tuple(range(1, 26)),
                      p_values=(F(1, 4), F(1, 2), F(7, 10)))


@pytest.fixture(scope="module")
def small_runs():
    """One pass of every suite over a small grid, shared across tests."""
    return {suite: run_suite(suite, SMALL_GRID, x_max=3.0, x_step=F(1, 20))
            for suite in SUITE_IDS}


class TestGridSpec:
    def test_default_shape(self):
        grid = GridSpec.default()
        assert grid.n_values == tuple(range(1, 301))
        assert grid.p_values == tuple(F(j, 20) for j in range(1, 20))
        assert grid.k_rule == "all-k"

    def test_normalizes_sorts_and_dedupes(self):
        grid = GridSpec(n_values=(5, 2, 5, 3), p_values=("1/2", F(1, 4), 0.25))
        assert grid.n_values == (2, 3, 5)
        assert grid.p_values == (F(1, 4), F(1, 2))

    def test_k_range_rules(self):
        grid = GridSpec(n_values=(10,), p_values=(F(1, 4),))
        assert grid.k_range(10, F(1, 4)) == range(0, 11)
        lo = GridSpec(n_values=(10,), p_values=(F(1, 4),), k_rule="lower-tail-k")
        assert lo.k_range(10, F(1, 4)) == range(0, 3)
        hi = GridSpec(n_values=(10,), p_values=(F(1, 4),), k_rule="upper-tail-k")
        assert hi.k_range(10, F(1, 4)) == range(3, 11)

    def test_k_range_integral_pn_keeps_boundary_in_both_tails(self):
        lo = GridSpec(n_values=(8,), p_values=(F(1, 4),), k_rule="lower-tail-k")
        hi = GridSpec(n_values=(8,), p_values=(F(1, 4),), k_rule="upper-tail-k")
        assert lo.k_range(8, F(1, 4))[-1] == 2
        assert hi.k_range(8, F(1, 4))[0] == 2

    def test_points_iteration(self):
        grid = GridSpec(n_values=(2, 3), p_values=(F(1, 2),))
        assert list(grid.points()) == [
            (2, 0, F(1, 2)), (2, 1, F(1, 2)), (2, 2, F(1, 2)),
            (3, 0, F(1, 2)), (3, 1, F(1, 2)), (3, 2, F(1, 2)),
            (3, 3, F(1, 2)),
        ]

    def test_describe_compresses_contiguous_runs(self):
        text = SMALL_GRID.describe()
        assert "1..25" in text and "1/4" in text and "all-k" in text

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError, match="n >= 1"):
            GridSpec(n_values=(), p_values=(F(1, 2),))
        with pytest.raises(ValueError, match="n >= 1"):
            GridSpec(n_values=(0, 3), p_values=(F(1, 2),))
        with pytest.raises(ValueError, match="rational p"):
            GridSpec(n_values=(3,), p_values=(F(0, 1), F(1, 2)))
        with pytest.raises(ValueError, match="rational p"):
            GridSpec(n_values=(3,), p_values=(F(1, 2), 1))
        with pytest.raises(ValueError, match="k_rule"):
            GridSpec(n_values=(3,), p_values=(F(1, 2),), k_rule="middle")
        with pytest.raises(ValueError, match="strictly increasing"):
            GridSpec(n_values=(3,), p_values=(F(1, 2),), limits=(10, 10))

    def test_limits_normalized(self):
        grid = GridSpec(n_values=(3,), p_values=(F(1, 2),), limits=(10, 100))
        assert grid.limits == (10, 100)


class TestViolationReport:
    def test_csv_fields_three_part_point(self):
        v = ViolationReport("theorem1", (12, 3, F(1, 4)), 1.0, 2.0, 1.0)
        assert v.csv_fields() == (12, 3, F(1, 4))

    def test_csv_fields_two_part_point_blank_p(self):
        v = ViolationReport("phi_band", (12, 3), 1.0, 2.0, 1.0)
        assert v.csv_fields() == (12, 3, "")

    def test_csv_fields_scalar_point_maps_to_p_slot(self):
        v = ViolationReport("gaussian", (F(5, 2),), 1.0, 2.0, 1.0)
        assert v.csv_fields() == ("", "", F(5, 2))

    def test_as_dict_stringifies_fractions(self):
        v = ViolationReport("theorem1", (12, 3, F(1, 4)), 1.0, 2.0, 1.0,
                            check="U<2L")
        d = v.as_dict()
        assert d["point"] == [12, 3, "1/4"]
        assert d["check"] == "U<2L"
        assert d["precision_escalated"] is True


class TestSurdComparators:
    def test_sign_surd_basic(self):
        assert _sign_surd(-2, 1, 4) == 0
        assert _sign_surd(-2, 1, 5) > 0
        assert _sign_surd(-2, 1, 3) < 0
        assert _sign_surd(2, -1, 5) < 0
        assert _sign_surd(2, -1, 3) > 0
        assert _sign_surd(0, 0, 7) == 0

    def test_sign_two_surds_exact_tie(self):
        # 2 sqrt(2) - sqrt(8) = 0.
        assert _sign_two_surds(F(0), F(2), F(2), F(-1), F(8)) == 0

    def test_sign_two_surds_any_sign_weights(self):
        cases = [
            (F(-3), F(1), F(2), F(1), F(2)),
            (F(-3), F(1), F(2), F(1), F(3)),
            (F(1), F(-2), F(2), F(1), F(5)),
            (F(-1), F(-1), F(7), F(-1), F(11)),
            (F(10), F(-3), F(5), F(-2), F(3)),
        ]
        for A, B, d1, C, d2 in cases:
            want = A + B * math.sqrt(d1) + C * math.sqrt(d2)
            got = _sign_two_surds(A, B, d1, C, d2)
            assert got == (want > 0) - (want < 0)

    def test_cmp_surd_pair_matches_floats(self):
        vals = [F(0), F(1, 2), F(-3, 2), F(2)]
        rads = [F(2), F(3), F(17, 4)]
        for a1 in vals:
            for b1 in vals:
                for d1 in rads:
                    for d2 in rads:
                        lhs = a1 + b1 * math.sqrt(d1)
                        rhs = F(1, 3) + math.sqrt(d2)
                        want = (lhs > rhs) - (lhs < rhs)
                        got = _cmp_surd_pair(a1, b1, d1, F(1, 3), F(1), d2)
                        assert got == want

    def test_cmp_surd_pair_equality(self):
        # 1 + 2 sqrt(1) = 3 + 0 sqrt(7).
        assert _cmp_surd_pair(F(1), F(2), F(1), F(3), F(0), F(7)) == 0


class TestTailSum:
    def test_matches_weight_table(self):
        for n, a, c in ((7, 1, 4), (20, 1, 2), (33, 7, 10)):
            table = _WeightTable(n, a, c, n)
            for k in (0, 1, n // 2, n):
                S, w = _tail_sum(n, a, c, k)
                assert S == table.Ss[k]
                assert w == table.ws[k]

    def test_full_sum_is_c_power_n(self):
        S, _ = _tail_sum(12, 3, 10, 12)
        assert S == 10 ** 12


class TestEscalate:
    def test_resolves_at_sixty_digits(self):
        ok, lhs, rhs, margin = _escalate(
            lambda dps: (mpmath.mpf(1), mpmath.mpf(1) + mpmath.mpf(10) ** -20))
        assert ok and margin == pytest.approx(1e-20, rel=1e-6)

    def test_escalates_to_two_hundred_digits(self):
        ok, _, _, margin = _escalate(
            lambda dps: (mpmath.mpf(1) + mpmath.mpf(10) ** -60, mpmath.mpf(1)))
        assert not ok
        assert margin == pytest.approx(-1e-60, rel=1e-6)

    def test_unresolved_tie_raises(self):
        with pytest.raises(ArithmeticError, match="unresolved"):
            _escalate(lambda dps: (mpmath.mpf(1), mpmath.mpf(1)))


class TestRunSuiteSmallGrid:
    def test_every_suite_passes(self, small_runs):
        for suite, summary in small_runs.items():
            assert summary.suite in (suite, "upper_tail", "conjecture")
            assert summary.passed, f"{suite}: {summary.violations[:3]}"
            assert summary.points_checked > 0
            assert summary.violations == ()

    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError, match="unknown suite"):
            run_suite("theorem3")

    def test_theorem2_width_below_cap(self, small_runs):
        witness = small_runs["theorem2"].extremal_witness
        assert witness["value"] < float(WIDTH_CAP)
        assert witness["cap"] == float(WIDTH_CAP)

    def test_upper_tail_reuses_reflected_chain(self, small_runs):
        witness = small_runs["upper_tail"].extremal_witness
        assert witness["value"] < float(WIDTH_CAP)

    def test_phi_band_witness_is_n2_k1(self, small_runs):
        witness = small_runs["phi_band"].extremal_witness
        assert witness["point"] == [2, 1]
        assert witness["log_gap_exact"] == "29/2600"
        assert witness["value"] == pytest.approx(math.exp(29 / 2600), rel=1e-15)

    def test_gaussian_ratio_strictly_decreasing(self, small_runs):
        witness = small_runs["gaussian"].extremal_witness
        assert witness["value"] > 0

    def test_as_dict_round_trip(self, small_runs):
        d = small_runs["theorem1"].as_dict()
        assert d["suite"] == "theorem1"
        assert d["passed"] is True
        assert d["violations"] == []
        assert "quantity" in d["extremal_witness"]

    def test_single_point_grid(self):
        grid = GridSpec(n_values=(2,), p_values=(F(1, 2),))
        summary = run_suite("theorem1", grid)
        assert summary.passed and summary.points_checked == 2


class TestThreadedDeterminism:
    def test_thread_pool_reproduces_serial_run(self, monkeypatch):
        serial = run_suite("theorem2", SMALL_GRID)
        monkeypatch.setenv("BINOTAIL_THREADS", "4")
        threaded = run_suite("theorem2", SMALL_GRID)
        assert threaded.as_dict() == serial.as_dict()

    def test_bad_thread_setting_falls_back_to_serial(self, monkeypatch):
        monkeypatch.setenv("BINOTAIL_THREADS", "many")
        summary = run_suite("theorem1", GridSpec(n_values=(4,),
                                                 p_values=(F(1, 2),)))
        assert summary.passed


class TestConjectureScan:
    def test_small_grid_caps_and_monotonicity(self):
        summary = conjecture_scan(SMALL_GRID)
        assert summary.passed
        witness = summary.extremal_witness
        assert witness["value"] < float(RATIO_CAP_GLOBAL)
        assert witness["interior_max"] < RATIO_CAP_INTERIOR
        assert "grid evidence" in witness["quantity"]
        checks = witness["monotonicity_checks"]
        assert all(checks[key] > 0 for key in ("k", "n", "p", "p-refined"))

    def test_slice_increases_toward_cap(self):
        trace = conjecture_slice(12, (25, 50, 100, 200))
        assert trace["strictly_increasing"] and trace["below_cap"]
        ratios = [row["ratio"] for row in trace["rows"]]
        assert ratios == sorted(ratios)
        assert all(row["gap"] > 0 for row in trace["rows"])
        assert trace["cap_exact"] == "180451625/143327232"

    def test_slice_validation(self):
        with pytest.raises(ValueError, match="k >= 1"):
            conjecture_slice(0, (25,))
        with pytest.raises(ValueError, match="n > k"):
            conjecture_slice(12, (12, 25))


class TestMonotonicitySuite:
    def test_small_grid_passes(self):
        summary = monotonicity_suite(SMALL_GRID, f_values=(F(1, 5), F(1, 2)))
        assert summary.passed and summary.points_checked > 0
        assert summary.extremal_witness["value"] > 0

    def test_rejects_f_outside_unit_interval(self):
        with pytest.raises(ValueError, match="f slices"):
            monotonicity_suite(SMALL_GRID, f_values=(F(1, 2), F(3, 2)))


class TestConvergenceSuite:
    def test_large_dev_track_increases(self):
        summary = convergence_suite(F(3, 10), F(1, 2), (10, 100, 1000),
                                    moderate_tol=1.0, clt_tol=1.0)
        assert summary.passed
        track = summary.extremal_witness["tracks"]["large_dev"]
        values = [row["value"] for row in track["rows"]]
        assert values == sorted(values)
        assert all(v < track["limit"] for v in values)

    def test_moderate_tolerance_enforced_at_schedule_end(self):
        summary = convergence_suite(F(3, 10), F(1, 2), (10, 100, 1000))
        checks = {v.check for v in summary.violations}
        assert "moderate-final-gap" in checks
        assert checks <= {"moderate-final-gap", "clt-final-gap"}

    def test_bracket_route_beyond_rational_limit(self):
        summary = convergence_suite(F(3, 10), F(1, 2), (10000, 100000))
        assert summary.passed
        track = summary.extremal_witness["tracks"]["large_dev"]
        assert track["final_relative_gap"] < 1e-4

    def test_moderate_gap_shrinks(self):
        summary = convergence_suite(F(3, 10), F(1, 2), (100, 1000, 10000),
                                    moderate_tol=1.0, clt_tol=1.0)
        gaps = [row["gap"]
                for row in summary.extremal_witness["tracks"]["moderate"]["rows"]]
        assert gaps == sorted(gaps, reverse=True)

    def test_clt_track_compares_against_exact_offset(self):
        summary = convergence_suite(F(3, 10), F(1, 2), (100, 1000),
                                    moderate_tol=1.0, clt_tol=1.0)
        for row in summary.extremal_witness["tracks"]["clt"]["rows"]:
            assert row["x_eff"] == pytest.approx(1.0, abs=0.2)
            assert row["value"] > 0

    def test_validation(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            convergence_suite(F(3, 10), F(1, 2), (100, 100))
        with pytest.raises(ValueError, match="p must lie"):
            convergence_suite(F(3, 10), F(3, 2), (10, 100))
