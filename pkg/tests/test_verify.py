import math
import random
from fractions import Fraction

import pytest

from eqkit import (
    CapExceededError,
    IntMatrix,
    bounds_report,
    build_crt,
    construct_eq,
    crt_residue_check,
    det_bareiss,
    is_eq_q,
    is_mds,
    is_rmds,
    matvec,
    truncate_columns,
)
from oracles import brute_collision, brute_kernel, det_cofactor


def _random_matrix(rng, m, n, lo=-1, hi=1):
    return IntMatrix.from_rows(
        [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]
    )


def test_fixtures_pass_both_modes(eq_4x8, crt_4x8):
    for a in (eq_4x8, crt_4x8):
        assert is_eq_q(a, 2, mode="kernel") is None
        assert is_eq_q(a, 2, mode="injectivity") is None


def test_repeated_column_witness():
    a = IntMatrix.from_rows([[1, 1]])
    assert is_eq_q(a, 2, mode="kernel").x == (1, -1)
    assert is_eq_q(a, 2, mode="injectivity").x == (1, -1)


def test_witnesses_match_brute_force():
    rng = random.Random(23)
    for _ in range(30):
        a = _random_matrix(rng, rng.randint(1, 3), rng.randint(2, 5))
        expected = brute_kernel(a.entries, 2)
        got = is_eq_q(a, 2, mode="kernel")
        assert (got.x if got else None) == expected
        expected_inj = brute_collision(a.entries, 2)
        got_inj = is_eq_q(a, 2, mode="injectivity")
        assert (got_inj.x if got_inj else None) == expected_inj


def test_modes_agree_on_random_4x8():
    rng = random.Random(99)
    for _ in range(200):
        a = _random_matrix(rng, 4, 8)
        kernel = is_eq_q(a, 2, mode="kernel")
        injective = is_eq_q(a, 2, mode="injectivity")
        assert (kernel is None) == (injective is None)


def test_mode_agreement_for_q3():
    rng = random.Random(41)
    for _ in range(40):
        a = _random_matrix(rng, 2, 4)
        kernel = is_eq_q(a, 3, mode="kernel")
        injective = is_eq_q(a, 3, mode="injectivity")
        assert (kernel is None) == (injective is None)


def test_threads_do_not_change_the_witness():
    rng = random.Random(4)
    for _ in range(20):
        a = _random_matrix(rng, 2, 6)
        single = is_eq_q(a, 2, mode="kernel", threads=1)
        multi = is_eq_q(a, 2, mode="kernel", threads=4)
        assert (single.x if single else None) == (multi.x if multi else None)


def test_unknown_mode_rejected(eq_4x8):
    with pytest.raises(ValueError):
        is_eq_q(eq_4x8, 2, mode="guess")


def test_cap_exceeded_reports_work(eq_4x8):
    with pytest.raises(CapExceededError) as info:
        is_eq_q(eq_4x8, 2, mode="kernel", cap=100)
    assert info.value.required == 3**8
    assert info.value.allowed == 100


def test_truncation_monotonicity(eq_4x8):
    rng = random.Random(17)
    for _ in range(25):
        keep = rng.sample(range(8), rng.randint(1, 8))
        assert is_eq_q(truncate_columns(eq_4x8, keep), 2) is None


def test_identity_is_mds():
    assert is_mds(IntMatrix.identity(4)) is None


def test_residue_5x8_is_not_mds(crt_5x8):
    assert is_mds(crt_5x8) == (0, 1, 2, 3, 4)
    square = [row[:5] for row in crt_5x8.entries]
    assert det_cofactor(square) == 0


def test_small_wide_matrix_is_mds():
    a = IntMatrix.from_rows([[1, 1, 1], [1, -1, 0]])
    # the three 2x2 minors: -2, -1, 1
    assert is_mds(a) is None


def test_is_mds_requires_wide_matrix():
    with pytest.raises(ValueError):
        is_mds(IntMatrix.from_rows([[1], [2]]))


def test_bareiss_matches_cofactor_expansion():
    rng = random.Random(31)
    for _ in range(120):
        size = rng.randint(1, 5)
        rows = [[rng.randint(-6, 6) for _ in range(size)] for _ in range(size)]
        assert det_bareiss(rows) == det_cofactor(rows)


def test_is_mds_matches_cofactor_on_small_matrices():
    rng = random.Random(13)
    for _ in range(40):
        m = rng.randint(1, 4)
        n = rng.randint(m, m + 2)
        a = _random_matrix(rng, m, n, lo=-3, hi=3)
        witness = is_mds(a)
        import itertools

        naive = None
        for cols in itertools.combinations(range(n), m):
            if det_cofactor([[a[i, j] for j in cols] for i in range(m)]) == 0:
                naive = cols
                break
        assert witness == naive


def test_rmds_residue_fixture(crt_5x8):
    assert is_rmds(crt_5x8, 4, 2) is None


def test_rmds_degenerate_whole_matrix(eq_4x8):
    assert is_rmds(eq_4x8, 4, 2) is None


def test_rmds_witness_on_all_ones():
    a = IntMatrix.from_rows([[1, 1, 1, 1], [1, 1, 1, 1]])
    witness = is_rmds(a, 1, 2)
    assert witness.rows == (0,)
    assert witness.kernel.x == (1, -1, 0, 0)


def test_rmds_validation(eq_4x8):
    with pytest.raises(ValueError):
        is_rmds(eq_4x8, 5, 2)
    with pytest.raises(ValueError):
        is_rmds(eq_4x8, 0, 2)


def test_bounds_report_fixture_values():
    report = bounds_report(8, m=4, weight=1, alphabet_size=3, k_iter=2)
    assert report.lemma2_rate_bound == 2.5
    assert report.theorem3_mds_bound == 81
    assert report.r_constr == Fraction(2)
    assert report.r_upper == 2.5
    assert report.ratio == 1.25


def test_bounds_report_siegel_term():
    report = bounds_report(2, m=1, weight=1)
    assert report.siegel_norm_bound == pytest.approx(math.sqrt(2))
    absent = bounds_report(4, m=4, weight=1)
    assert absent.siegel_norm_bound is None


def test_bounds_report_validation():
    with pytest.raises(ValueError):
        bounds_report(0)
    with pytest.raises(ValueError):
        bounds_report(4, alphabet_size=0)
    with pytest.raises(ValueError):
        bounds_report(4, k_iter=-1)


def test_rate_bound_consistency_through_k6():
    for k in range(7):
        a, _ = construct_eq(k)
        rate = Fraction(a.n, a.m)
        assert float(rate) <= bounds_report(a.n).lemma2_rate_bound + 1e-12


def test_rate_ratio_shrinks_toward_one():
    ratios = {
        k: bounds_report(8, k_iter=k).ratio for k in range(2, 21)
    }
    assert ratios[2] <= 1.26
    for k in range(4, 20):
        assert ratios[k + 1] < ratios[k]
    assert ratios[20] < ratios[4]


def test_residue_check_worked_example(crt_4x8):
    x = (2, 1, 1, 3, 0, 1, -1, 0)
    assert matvec(crt_4x8, x) == (12, 15, 14, 33)
    assert crt_residue_check((3, 5, 7, 11), crt_4x8, x) is None


def test_residue_check_zero_vector(crt_4x8):
    assert crt_residue_check((3, 5, 7, 11), crt_4x8, (0,) * 8) is None


def test_residue_check_small_kernel_vector(crt_4x8):
    x = (-2, 1, 0, 0, 0, 0, 0, 0)
    assert crt_residue_check((3, 5, 7, 11), crt_4x8, x) is None


def test_residue_check_precondition(crt_4x8):
    with pytest.raises(ValueError):
        crt_residue_check((3, 5, 7, 11), crt_4x8, (1,) + (0,) * 7)
    with pytest.raises(ValueError):
        crt_residue_check((3, 5), crt_4x8, (0,) * 8)


def test_residue_check_reports_failing_row(crt_4x8):
    rows = [list(r) for r in crt_4x8.entries]
    rows[2][0] += 1  # breaks the congruence structure of row 2 only
    broken = IntMatrix.from_rows(rows)
    assert crt_residue_check((3, 5, 7, 11), broken, (-2, 1, 0, 0, 0, 0, 0, 0)) == 2
