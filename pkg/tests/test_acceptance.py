"""Acceptance gate: every primary criterion at its stated tolerance.

``pytest -v tests/test_acceptance.py`` lists one pass/fail line per
criterion; each test also prints its measured quantities, so adding -s
turns the run into the acceptance report.
"""

import math
import time
from fractions import Fraction as F

import mpmath
import pytest

from binotail import cli
from binotail.exact import (
    gaussian_upper_tail,
    median_deficit,
    ramanujan_theta,
)
from binotail.gauss import tail_coeff_lower
from binotail.mckay import crossover_f_star, mckay_ratio_bounds
from binotail.bounds import upper_tail_ratio_bounds
from binotail.exact import BinomialParams
from binotail.validate import (
    GridSpec,
    RATIO_CAP_GLOBAL,
    RATIO_CAP_INTERIOR,
    WIDTH_CAP,
    conjecture_scan,
    conjecture_slice,
    convergence_suite,
    run_suite,
)


def test_criterion_01_ratio_chain_default_grid():
    """1 <= L <= B/b <= U < 2L on the default grid, exact, <= 2 min."""
    start = time.perf_counter()
    summary = run_suite("theorem1")
    elapsed = time.perf_counter() - start
    assert summary.violations == ()
    assert summary.points_checked == 432165
    assert elapsed < 120
    print(f"criterion 1 PASS: ratio chain, {summary.points_checked} points, "
          f"0 violations, {elapsed:.1f}s")


def test_criterion_02_tail_bracket_width():
    """b_down < B < b_up with max observed width below 89/44."""
    summary = run_suite("theorem2")
    assert summary.violations == ()
    width = summary.extremal_witness["value"]
    assert width < float(WIDTH_CAP) == pytest.approx(2.022727, abs=5e-7)
    print(f"criterion 2 PASS: two-sided tail bounds, 0 violations, "
          f"max width {width:.9f} < 89/44 at "
          f"{summary.extremal_witness['point']}")


def test_criterion_03_entropy_chains_and_upper_tail():
    """Entropy-normalized chains and the reflected upper-tail chains."""
    chains = run_suite("theorem5_2")
    reflected = run_suite("upper_tail")
    assert chains.violations == ()
    assert reflected.violations == ()
    print(f"criterion 3 PASS: entropy chains {chains.points_checked} points "
          f"and reflected chains {reflected.points_checked} points, "
          f"0 violations")


def test_criterion_04_ratio_cap_evidence():
    """Grid max of B/(bL) under both caps, approached on the k=12 slice."""
    summary = conjecture_scan()
    assert summary.violations == (), "cap or monotonicity violated"
    witness = summary.extremal_witness
    assert witness["value"] < 1.2590146
    assert witness["value"] < float(RATIO_CAP_GLOBAL)
    assert witness["interior_max"] < RATIO_CAP_INTERIOR
    trace = conjecture_slice(12)
    assert trace["strictly_increasing"] and trace["below_cap"]
    gaps = [row["gap"] for row in trace["rows"]]
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[-1] < 1e-3
    print(f"criterion 4 PASS: grid max {witness['value']:.9f} < 1.2590146 "
          f"at {witness['argmax']}, interior {witness['interior_max']:.9f} "
          f"< sqrt(pi/2); k=12 slice reaches cap gap {gaps[-1]:.2e}")


def test_criterion_05_large_deviation_limit():
    """sqrt(n) B e^{nD} increasing, within 0.5% of 1.523482 at n=1e4."""
    start = time.perf_counter()
    summary = convergence_suite(F(3, 10), F(1, 2), (10, 100, 1000, 10000),
                                large_dev_tol=0.005, moderate_tol=1.0,
                                clt_tol=1.0)
    elapsed = time.perf_counter() - start
    assert summary.violations == ()
    rows = summary.extremal_witness["tracks"]["large_dev"]["rows"]
    values = [row["value"] for row in rows]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert abs(values[-1] / 1.523482 - 1) < 0.005
    assert elapsed < 60
    print(f"criterion 5 PASS: strictly increasing {values}, final within "
          f"{abs(values[-1] / 1.523482 - 1):.2%} of 1.523482, {elapsed:.1f}s")


def test_criterion_06_moderate_deviation_limit():
    """B e^{nD} alpha/sqrt(n) within 5% of 0.199471 at n=1e6."""
    start = time.perf_counter()
    summary = convergence_suite(F(3, 10), F(1, 2),
                                (1000, 10000, 100000, 1000000),
                                moderate_tol=0.05)
    elapsed = time.perf_counter() - start
    moderate = [v for v in summary.violations if v.check.startswith("moderate")]
    assert moderate == []
    rows = summary.extremal_witness["tracks"]["moderate"]["rows"]
    gaps = [row["gap"] for row in rows]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    final = rows[-1]["value"]
    assert abs(final / 0.199471 - 1) < 0.05
    assert elapsed < 300
    print(f"criterion 6 PASS: gaps {['%.4f' % g for g in gaps]} shrink "
          f"monotonically, final {final:.6f} within "
          f"{abs(final / 0.199471 - 1):.2%} of 0.199471, {elapsed:.1f}s")


def test_criterion_07_gaussian_suite():
    """Tail bracket and companion bound on [0, 10] step 0.01; R(0) exact."""
    summary = run_suite("gaussian", x_max=10.0, x_step=F(1, 100))
    assert summary.violations == ()
    assert summary.points_checked == 1001
    r_zero = (float(gaussian_upper_tail(0, F(1, 10**30)).value)
              / tail_coeff_lower(0.0))
    assert r_zero == math.sqrt(math.pi / 2)
    print(f"criterion 7 PASS: 1001 abscissas, 0 violations, ratio strictly "
          f"decreasing (min step {summary.extremal_witness['value']:.3e}), "
          f"R(0) == sqrt(pi/2) bitwise")


def test_criterion_08_normal_comparison_suite():
    """Integral-free bracket holds; E <= 3/2; width ranking flips at f*."""
    summary = run_suite("mckay")
    assert summary.violations == ()
    n, p = 10000, F(1, 2)
    f_star = crossover_f_star(p).f_star
    assert f_star == pytest.approx(0.640388, abs=5e-7)

    def tighter(k):
        params = BinomialParams(n, k, p)
        ours = upper_tail_ratio_bounds(params)
        other = mckay_ratio_bounds(params)
        return "ours" if ours.upper / ours.lower <= other.hi / other.lo \
            else "mckay"

    labels = [(k / n, tighter(k)) for k in range(6200, 6601, 50)]
    assert labels[0][1] == "mckay" and labels[-1][1] == "ours"
    flips = [(lo, hi) for (lo, a), (hi, b) in zip(labels, labels[1:])
             if a != b]
    assert len(flips) == 1
    assert flips[0][0] < f_star < flips[0][1]
    print(f"criterion 8 PASS: bracket suite 0 violations over "
          f"{summary.points_checked} points; ranking flips inside "
          f"({flips[0][0]:.4f}, {flips[0][1]:.4f}) around f* = {f_star:.6f}")


def test_criterion_09_stirling_band():
    """phi_minus < phi < phi_plus to n = 2000; extreme gap at (2, 1)."""
    summary = run_suite("phi_band", GridSpec.default(n_max=2000))
    assert summary.violations == ()
    witness = summary.extremal_witness
    assert witness["point"] == [2, 1]
    assert witness["log_gap_exact"] == "29/2600"
    assert witness["value"] == pytest.approx(math.exp(29 / 2600), rel=1e-15)
    assert witness["value"] == pytest.approx(1.011216, abs=5e-7)
    print(f"criterion 9 PASS: {summary.points_checked} points to n=2000, "
          f"0 violations, max band ratio e^(29/2600) = "
          f"{witness['value']:.10f} at (2, 1)")


def test_criterion_10_correction_constants():
    """theta_k trend and enclosure residual; zeta branch bounds to n=300."""
    thetas = [ramanujan_theta(k) for k in range(1, 501)]
    for a, b in zip(thetas, thetas[1:]):
        assert b.definitely_lt(a)
    theta1_exact = (math.e - 2) / 2
    assert abs(float(thetas[0].value) / theta1_exact - 1) < 5e-13
    third = F(1, 3)
    for theta in thetas:
        assert theta.definitely_gt(third)
        assert theta.value - theta.err <= thetas[0].value + thetas[0].err
    # Independent residual check: the defining equation's remainder must
    # land inside each tracked enclosure.  The enclosures are as tight as
    # 1e-85, so the reference needs well over 100 digits to discriminate.
    for k in (1, 17, 123, 499):
        theta = thetas[k - 1]
        with mpmath.workdps(200):
            partial = sum(mpmath.mpf(k) ** i / mpmath.factorial(i)
                          for i in range(k))
            ref = ((mpmath.e ** k / 2 - partial)
                   * mpmath.factorial(k) / mpmath.mpf(k) ** k)
            lo = mpmath.mpf(theta.lower.numerator) / theta.lower.denominator
            hi = mpmath.mpf(theta.upper.numerator) / theta.upper.denominator
            assert lo <= ref <= hi

    half = F(1, 2)
    for n in range(2, 301):
        for k in range(1, n):
            zeta = median_deficit(n, k).value
            if n >= 2 * k:
                assert F(1, 3) < zeta <= half
            if n <= 2 * k:
                assert half <= zeta < F(2, 3)
            if n == 2 * k:
                assert zeta == half
    print(f"criterion 10 PASS: theta_1..theta_500 strictly decreasing in "
          f"(1/3, (e-2)/2], theta_1 = {float(thetas[0].value):.13f} "
          f"(12+ digits), residuals inside enclosures; zeta branch bounds "
          f"hold for n <= 300 with zeta(2k, k) = 1/2 exactly")


def test_criterion_11_byte_identical_artifacts(tmp_path):
    """Repeated sweep and verify runs write identical CSV and JSON bytes."""
    recipes = {
        "sweep.csv": ["sweep", "--n", "10,30,100", "--p", "1/4,1/2"],
        "sweep.json": ["sweep", "--n", "10,30,100", "--p", "1/4,1/2",
                       "--format", "json"],
        "verify.csv": ["verify", "--suite", "theorem1", "--n-max", "50"],
        "verify.json": ["verify", "--suite", "mckay", "--n-max", "50",
                        "--format", "json"],
    }
    for name, argv in recipes.items():
        outputs = []
        for attempt in ("a", "b"):
            path = tmp_path / attempt / name
            code = cli.main(argv + ["--out", str(path), "--no-figure"])
            assert code == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1], f"{name} differs between runs"
    print("criterion 11 PASS: sweep and verify artifacts byte-identical "
          "across reruns (CSV and JSON)")
