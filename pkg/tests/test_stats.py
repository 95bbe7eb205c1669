import itertools
import math

import pytest
import scipy.integrate
import scipy.special
import scipy.stats

from deixis.errors import DegenerateTable, InvalidCounts
from deixis.stats import (ContingencyTable, chi_squared_test,
                          chi_squared_upper_tail, fisher_exact_2x2, gamma_q,
                          norm_cdf, tost_equivalence)


def table(*rows):
    return ContingencyTable(tuple(tuple(r) for r in rows))


class TestContingencyTable:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            table((1, 2))
        with pytest.raises(ValueError):
            table((1,), (2,))
        with pytest.raises(ValueError):
            table((1, 2), (3,))
        with pytest.raises(ValueError):
            table((1, -2), (3, 4))
        with pytest.raises(ValueError):
            table((1.5, 2), (3, 4))

    def test_margins(self):
        t = table((1, 2, 3), (4, 5, 6))
        assert t.row_sums == (6, 15)
        assert t.col_sums == (5, 7, 9)
        assert t.total == 21


class TestGammaQ:
    def test_against_scipy_grid(self):
        for s in (0.5, 1.0, 2.5, 7.5, 20.0, 100.0):
            for x in (0.0, 0.3, 1.0, 5.0, 25.0, 150.0):
                assert abs(gamma_q(s, x) - scipy.special.gammaincc(s, x)) < 1e-12

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            gamma_q(0.0, 1.0)
        with pytest.raises(ValueError):
            gamma_q(1.0, -1.0)


class TestChiSquared:
    def test_known_example(self):
        res = chi_squared_test(table((10, 20), (20, 10)))
        assert res.statistic == pytest.approx(6.6667, abs=1e-4)
        assert res.dof == 1
        assert res.p_value == pytest.approx(0.009823, abs=1e-6)

    def test_tail_matches_integral_oracle(self):
        for dof in (1, 2, 5, 15):
            for stat in (0.5, 3.0, 10.0, 30.0):
                def pdf(t, k=dof):
                    return (t ** (k / 2.0 - 1.0) * math.exp(-t / 2.0)
                            / (2.0 ** (k / 2.0) * math.gamma(k / 2.0)))
                oracle, err = scipy.integrate.quad(pdf, stat, math.inf)
                assert abs(chi_squared_upper_tail(stat, dof) - oracle) < 1e-9 + err

    def test_proportional_table(self):
        res = chi_squared_test(table((10, 20), (20, 40)))
        assert res.statistic == pytest.approx(0.0, abs=1e-12)
        assert res.p_value == pytest.approx(1.0)

    def test_permutation_invariance(self):
        base = chi_squared_test(table((3, 9, 5), (7, 2, 8)))
        swapped_rows = chi_squared_test(table((7, 2, 8), (3, 9, 5)))
        swapped_cols = chi_squared_test(table((5, 9, 3), (8, 2, 7)))
        assert base.statistic == pytest.approx(swapped_rows.statistic)
        assert base.statistic == pytest.approx(swapped_cols.statistic)

    @pytest.mark.parametrize("k", [2, 3])
    def test_pearson_scaling_identity(self, k):
        t1 = table((10, 20), (20, 10))
        tk = table((10 * k, 20 * k), (20 * k, 10 * k))
        assert (chi_squared_test(tk).statistic
                == pytest.approx(k * chi_squared_test(t1).statistic))

    def test_zero_marginal(self):
        with pytest.raises(DegenerateTable):
            chi_squared_test(table((0, 0), (3, 4)))

    def test_matches_scipy(self):
        for rows in [((10, 20), (20, 10)), ((26, 3, 1), (12, 9, 9)),
                     ((5, 7, 3), (2, 9, 4), (8, 1, 6))]:
            got = chi_squared_test(table(*rows))
            ref = scipy.stats.chi2_contingency(rows, correction=False)
            assert got.statistic == pytest.approx(ref.statistic, rel=1e-12)
            assert got.p_value == pytest.approx(ref.pvalue, abs=1e-12)


def fisher_enum_oracle(a, b, c, d):
    """Two-sided p by brute-force hypergeometric enumeration (exact rationals
    via floats of lgamma are avoided: use math.comb)."""
    r1, r2, c1 = a + b, c + d, a + c
    n = r1 + r2
    denom = math.comb(n, c1)
    lo, hi = max(0, c1 - r2), min(r1, c1)
    p_obs = math.comb(r1, a) * math.comb(r2, c1 - a) / denom
    total = 0.0
    for k in range(lo, hi + 1):
        pk = math.comb(r1, k) * math.comb(r2, c1 - k) / denom
        if pk <= p_obs * (1.0 + 1e-12):
            total += pk
    return p_obs, min(1.0, total)


class TestFisher:
    def test_known_examples(self):
        assert fisher_exact_2x2(table((3, 1), (1, 3))).p_value == pytest.approx(
            0.485714, abs=1e-6)
        assert fisher_exact_2x2(table((5, 0), (0, 5))).p_value == pytest.approx(
            2.0 / 252.0, abs=1e-6)

    def test_row_swap_symmetry(self):
        a = fisher_exact_2x2(table((7, 2), (2, 7)))
        b = fisher_exact_2x2(table((2, 7), (7, 2)))
        assert a.p_value == pytest.approx(b.p_value)

    def test_matches_scipy(self):
        for rows in [((3, 1), (1, 3)), ((12, 18), (9, 21)), ((1, 9), (11, 3)),
                     ((26, 4), (12, 18))]:
            got = fisher_exact_2x2(table(*rows))
            _, ref = scipy.stats.fisher_exact(rows, alternative="two-sided")
            assert got.p_value == pytest.approx(ref, abs=1e-9)

    def test_enumeration_sample(self):
        for a, b, c, d in itertools.product(range(0, 7, 2), repeat=4):
            if 0 in (a + b, c + d, a + c, b + d):
                continue
            got = fisher_exact_2x2(table((a, b), (c, d)))
            p_obs, p = fisher_enum_oracle(a, b, c, d)
            assert got.statistic == pytest.approx(p_obs, abs=1e-12)
            assert got.p_value == pytest.approx(p, abs=1e-10)

    def test_shape_and_marginals(self):
        with pytest.raises(DegenerateTable):
            fisher_exact_2x2(table((1, 2, 3), (4, 5, 6)))
        with pytest.raises(DegenerateTable):
            fisher_exact_2x2(table((0, 0), (1, 2)))


class TestNormCdf:
    def test_against_scipy(self):
        for z in (-5.0, -1.96, 0.0, 1.0, 3.3):
            assert norm_cdf(z) == pytest.approx(scipy.stats.norm.cdf(z), abs=1e-14)


class TestTost:
    def test_identical_proportions_equivalent(self):
        res = tost_equivalence(500, 1000, 500, 1000, margin=0.05)
        assert res.equivalent
        assert res.p_lower == pytest.approx(res.p_upper, abs=1e-12)
        # z oracle: margin / pooled SE
        se = math.sqrt(0.5 * 0.5 * (2.0 / 1000.0))
        assert res.z_lower == pytest.approx(0.05 / se)
        assert res.p_lower == pytest.approx(1.0 - norm_cdf(0.05 / se))

    def test_large_difference_not_equivalent(self):
        res = tost_equivalence(60, 100, 40, 100, margin=0.05)
        assert not res.equivalent
        assert max(res.p_lower, res.p_upper) >= 0.5

    def test_underpowered_not_equivalent(self):
        assert not tost_equivalence(3, 10, 3, 10, margin=0.05).equivalent

    def test_monotone_in_margin(self):
        margins = [0.02, 0.05, 0.1, 0.2]
        flags = [tost_equivalence(495, 1000, 505, 1000, m).equivalent
                 for m in margins]
        assert flags == sorted(flags)

    def test_invalid_counts(self):
        with pytest.raises(InvalidCounts):
            tost_equivalence(5, 0, 1, 10, 0.05)
        with pytest.raises(InvalidCounts):
            tost_equivalence(11, 10, 1, 10, 0.05)
        with pytest.raises(ValueError):
            tost_equivalence(5, 10, 5, 10, 0.0)

    def test_degenerate_pooled_se(self):
        res = tost_equivalence(10, 10, 10, 10, margin=0.05)
        assert res.equivalent
        assert res.p_lower == 0.0 and res.p_upper == 0.0
