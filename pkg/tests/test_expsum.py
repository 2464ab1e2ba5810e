import numpy as np
import pytest

from ffspectra import (IrrationalSumError, SizeLimitError, VerificationError,
                       expsum, family, field_for)


def ref_trace_counts(F, d1, u, v):
    # scalar reference: one field op per x
    counts = [0] * F.p
    for x in F.elements():
        e = F.sub(F.mul(u, F.pow(x, d1)), F.mul(v, x))
        counts[F.trace(e)] += 1
    return tuple(counts)


class TestTraceCounts:
    def test_zero_pair(self, F16):
        assert expsum.trace_counts(F16, 6, 0, 0).counts == (16, 0)

    def test_balanced_linear_part(self, F81):
        for v in (1, F81.psi, F81.element(50)):
            assert expsum.trace_counts(F81, 21, 0, v).counts == (27, 27, 27)

    def test_unit_pair(self, F16):
        assert expsum.trace_counts(F16, 6, 1, 1).counts == (12, 4)

    def test_matches_scalar_reference(self, F16, F625):
        for F, d1 in ((F16, 6), (F625, 105)):
            for u in (0, 1, F.psi):
                for v in (0, 1, F.element(7)):
                    assert (expsum.trace_counts(F, d1, u, v).counts
                            == ref_trace_counts(F, d1, u, v))


class TestExpSum:
    def test_full_sum(self, F16):
        assert expsum.exp_sum(F16, 6, 0, 0).value == 16

    def test_balanced_sum(self, F16):
        assert expsum.exp_sum(F16, 6, 0, F16.psi).value == 0

    def test_cube_of_pl(self, F16):
        assert expsum.exp_sum(F16, 6, 1, 1).value == 8

    def test_irrational_sum_detected(self):
        # quadratic Gauss sum over F_3 is 1 + 2*zeta, not rational
        F3 = field_for(3, 1)
        with pytest.raises(IrrationalSumError):
            expsum.exp_sum(F3, 2, 1, 0)


class TestSubgroupCharacterSum:
    def test_values(self, F16):
        assert expsum.power_character_sum(F16, 0) == 16
        assert expsum.power_character_sum(F16, F16.element(3)) == -8
        assert expsum.power_character_sum(F16, F16.psi) == 4

    def test_exhaustive_consistency(self, F16, F625):
        for F in (F16, F625):
            for a in F.elements():
                expsum.power_character_sum(F, a)  # raises on any mismatch


class TestCosetCounts:
    def test_instance(self, F16):
        t = expsum.coset_counts(F16, 6, 1, 1)
        assert (t.zeros, t.residues, t.nonresidues) == (1, 0, 2)

    def test_zero_hit_criterion(self, F625):
        # exactly one index hits zero iff v/u is a (p^l+1)-th root of unity
        for u in (1, F625.psi):
            for v in F625.units():
                t = expsum.coset_counts(F625, 105, u, v)
                expect = int(F625.is_root_of_unity(F625.div(v, u), 6))
                assert t.zeros == expect

    def test_special_u_one(self, F625):
        # with u = 1 and a zero hit, residues vanish exactly on cube roots of 1
        mu3 = {1, F625.element(624 // 3), F625.element(2 * 624 // 3)}
        for v in F625.units():
            if not F625.is_root_of_unity(v, 6):
                continue
            t = expsum.coset_counts(F625, 105, 1, v)
            assert t.residues == (0 if v in mu3 else 1)

    def test_special_u_psi(self, F625):
        for v in F625.units():
            if not F625.is_root_of_unity(F625.div(v, F625.psi), 6):
                continue
            t = expsum.coset_counts(F625, 105, F625.psi, v)
            assert t.zeros == 1 and t.residues == 1

    def test_u_zero_rejected(self, F16):
        with pytest.raises(ValueError):
            expsum.coset_counts(F16, 6, 0, 1)

    def test_outside_family_rejected(self, F81):
        with pytest.raises(ValueError):
            expsum.coset_counts(F81, 21, 1, 1)


class TestCrossMethod:
    def test_formula_simplifications(self, F16):
        # (zeros, residues, nonresidues) = (1, 0, p^l) gives p^{3l}
        assert expsum.exp_sum_via_cosets(F16, 6, 1, 1) == 8

    @pytest.mark.parametrize("fixture,d1", [("F16", 6), ("F625", 105)])
    def test_exhaustive_equality(self, fixture, d1, request):
        # direct trace sweep == coset route for every pair with u != 0
        F = request.getfixturevalue(fixture)
        for u_log in range(F.group_order):
            direct = expsum.sum_values_for_u(F, d1, u_log)
            via = expsum.sum_values_via_cosets(F, d1, u_log)
            assert np.array_equal(direct, via)

    def test_exhaustive_equality_char2_large(self, F4096):
        # same exhaustive check at 2^12 through the all-pairs fast path
        table = expsum.sum_table_char2(F4096, 456)
        sample = expsum.sum_values_for_u(F4096, 456, 17)
        assert np.array_equal(table[17], sample)
        for u_log in range(F4096.group_order):
            assert np.array_equal(table[u_log],
                                  expsum.sum_values_via_cosets(F4096, 456, u_log))

    def test_scalar_and_bulk_agree(self, F625):
        vals = expsum.sum_values_for_u(F625, 105, 5)
        u = F625.element(5)
        assert vals[17] == expsum.exp_sum(F625, 105, u, F625.element(17)).value
        assert vals[F625.group_order] == expsum.exp_sum(F625, 105, u, 0).value


class TestDistributions:
    def test_closed_pre_merge_values(self):
        # p^l = 2 merges the p^{2l} and p^{3l}-p^{2l} rows: 70 + 30
        dist = expsum.distribution_closed(2, 1)
        assert dist.values == {-8: 5, -4: 60, 0: 60, 4: 100, 8: 15}

    def test_closed_largest_value_count(self):
        dist = expsum.distribution_closed(5, 1)
        assert dist.values[125] == 5**4 - 1 == 624

    def test_totals(self):
        for p, l in ((2, 1), (5, 1), (2, 3), (11, 1)):
            dist = expsum.distribution_closed(p, l)
            size = p ** (4 * l)
            assert sum(dist.values.values()) == size * (size - 1)

    def test_requires_cube_condition(self):
        with pytest.raises(ValueError):
            expsum.distribution_closed(3, 1)

    @pytest.mark.parametrize("fixture,p,l,d1", [("F16", 2, 1, 6),
                                                ("F625", 5, 1, 105)])
    def test_oracle_equals_reduced_equals_closed(self, fixture, p, l, d1, request):
        F = request.getfixturevalue(fixture)
        oracle = expsum.distribution_oracle(F, d1)
        reduced = expsum.distribution_reduced(F, d1)
        closed = expsum.distribution_closed(p, l)
        assert oracle.values == reduced.values == closed.values

    def test_reduced_equals_closed_large(self, F4096):
        assert (expsum.distribution_reduced(F4096, 456).values
                == expsum.distribution_closed(2, 3).values)

    def test_values_stay_in_sixvalue_set(self, F625):
        allowed = {-50, -25, 0, 25, 100, 125}
        assert set(expsum.distribution_oracle(F625, 105).values) <= allowed

    def test_budget_guard(self, F625):
        with pytest.raises(SizeLimitError):
            expsum.distribution_oracle(F625, 105, budget=1000)

    def test_reduced_needs_gcd_three(self, F81):
        with pytest.raises(ValueError):
            expsum.distribution_reduced(F81, 21)


class TestMoments:
    def test_small_field_values(self, F16):
        rep = expsum.moment_identities(F16, 6)
        assert (rep.first, rep.second, rep.third) == (256, 4096, 11776)

    def test_larger_field_values(self, F625):
        rep = expsum.moment_identities(F625, 105)
        assert (rep.first, rep.second, rep.third) == (
            5**8, 5**12, 5**13 + 5**12 - 5**9)

    def test_zero_u_row_sums_to_field_size(self, F625):
        row = expsum.sum_values_for_u(F625, 105, None)
        assert int(row.sum()) == 625

    def test_mismatch_raises(self, F16):
        # a non-family exponent breaks the third identity
        with pytest.raises(VerificationError):
            expsum.moment_identities(F16, 7)
