from math import gcd

import pytest

from ffspectra import VerificationError, diffspec, family


def ref_delta(F, d, c, b):
    # scalar reference: literal enumeration with field ops only
    return sum(
        F.sub(F.pow(F.add(x, 1), d), F.mul(c, F.pow(x, d))) == b
        for x in F.elements()
    )


class TestFamilyHelpers:
    @pytest.mark.parametrize("p,l,d,d1", [(2, 1, 3, 6), (3, 1, 7, 21),
                                          (5, 1, 21, 105), (2, 2, 13, 52),
                                          (2, 3, 57, 456), (11, 1, 111, 1221)])
    def test_exponent_pair(self, p, l, d, d1):
        assert family.exponents(p, l) == (d, d1)
        assert d1 == p**l * d

    def test_cube_condition(self):
        assert family.cube_condition(2, 1)
        assert family.cube_condition(5, 1)
        assert family.cube_condition(2, 3)
        assert not family.cube_condition(3, 1)  # p = 3
        assert not family.cube_condition(2, 2)  # even l with p = 2

    def test_shifted_gcd_is_three_under_cube_condition(self):
        assert family.shifted_gcd(2, 1) == 3
        assert family.shifted_gcd(5, 1) == 3
        assert family.shifted_gcd(11, 1) == 3
        assert family.shifted_gcd(3, 1) == 1


class TestDelta:
    def test_delta_at_one_is_pl(self, F16):
        assert diffspec.delta(F16, 6, 1) == 2

    def test_delta_on_unity_root(self, F81):
        b = F81.element(20)  # fourth root of unity, not 1
        assert F81.is_root_of_unity(b, 4) and b != 1
        assert diffspec.delta(F81, 21, b) == 6

    def test_outside_unity_roots_delta_in_0_2(self, F81):
        for b in F81.elements():
            if b != 0 and F81.is_root_of_unity(b, 4):
                continue
            assert diffspec.delta(F81, 21, b) in (0, 2)

    def test_matches_scalar_reference(self, F16, F81):
        for F, d in ((F16, 6), (F81, 21)):
            for b in F.elements():
                assert diffspec.delta(F, d, b) == ref_delta(F, d, 1, b)

    def test_classification_report(self, F625):
        rep = diffspec.classify_counts(F625, 1)
        assert rep == {"delta_at_one": 5, "unity_roots": [20] * 5,
                       "others_in_0_2": True}


class TestSpectrum:
    # expected histograms frozen from the brute-force oracle
    CASES = [
        (2, 1, {0: 8, 2: 8}),
        (3, 1, {0: 47, 2: 30, 3: 1, 6: 3}),
        (2, 2, {0: 149, 2: 102, 4: 1, 12: 4}),
        (5, 1, {0: 359, 2: 260, 5: 1, 20: 5}),
    ]

    @pytest.mark.parametrize("p,l,expected", CASES)
    def test_closed_formula(self, p, l, expected):
        spec = diffspec.spectrum_closed(p, l)
        assert spec.counts == expected
        spec.validate()

    @pytest.mark.parametrize("p,l,expected", CASES)
    def test_oracle_equals_closed_for_both_exponents(self, p, l, expected, request):
        F = request.getfixturevalue({16: "F16", 81: "F81", 256: "F256",
                                     625: "F625"}[p ** (4 * l)])
        d, d1 = family.exponents(p, l)
        assert diffspec.spectrum_oracle(F, d).counts == expected
        assert diffspec.spectrum_oracle(F, d1).counts == expected

    def test_identities_hold(self, F256):
        spec = diffspec.spectrum_oracle(F256, 13)
        assert sum(spec.counts.values()) == 256
        assert sum(i * c for i, c in spec.counts.items()) == 256
        assert spec.delta == 12

    def test_frobenius_invariance(self, F81):
        N = F81.group_order
        for d in (7, 21, 11, 53):
            twisted = (3 * d) % N
            assert (diffspec.spectrum_oracle(F81, d).counts
                    == diffspec.spectrum_oracle(F81, twisted).counts)

    def test_a_sweep_audit(self, F16):
        assert diffspec.spectrum_oracle(F16, 6, sweep_a=True).counts == {0: 8, 2: 8}

    def test_bin_merge_at_pl_two(self):
        # 2 = p^l = p^{2l}-p^l: three symbolic bins fold into one
        spec = diffspec.spectrum_closed(2, 1)
        assert spec.counts[2] == 5 + 1 + 2


class TestCDifferential:
    def test_c_one_reduces_to_delta(self, F16):
        for b in F16.elements():
            assert diffspec.c_delta(F16, 6, 1, b) == diffspec.delta(F16, 6, b)

    def test_c_zero_counts_preimages(self, F16):
        # x -> (x+1)^6 covers each nonzero cube three times
        for b in F16.elements():
            expect = 3 if (b != 0 and F16.coset_class(b, 3) == 0) else (b == 0)
            assert diffspec.c_delta(F16, 6, 0, b) == expect

    def test_matches_scalar_reference(self, F81):
        for c in (0, F81.element(2), F81.element(33)):
            for b in (0, 1, F81.element(11)):
                assert diffspec.c_delta(F81, 21, c, b) == ref_delta(F81, 21, c, b)

    def test_c_zero_uniformity(self, F16):
        rep = diffspec.c_uniformity(F16, 6, 0)
        assert rep.uniformity == 3
        assert rep.gcd_term == 3

    def test_gcd_term(self, F625):
        rep = diffspec.c_uniformity(F625, 105, 0)
        assert rep.gcd_term == gcd(105, 624) == 3

    def test_bound_for_all_c_outside_subgroup(self, F16):
        for c in F16.elements():
            if c != 0 and F16.is_root_of_unity(c, 3):
                continue
            rep = diffspec.c_uniformity(F16, 6, c)
            assert rep.uniformity <= 9
            assert rep.bound == 9 and rep.bound_holds

    def test_sweep_summary(self, F81):
        rep = diffspec.bound_sweep(F81, 1)
        assert rep["max_uniformity"] <= rep["bound"] == 16
        assert rep["gcd"] == 1
        assert rep["c_swept"] == 81 - 4

    def test_no_bound_inside_subgroup(self, F625):
        c = F625.element(624 // 6)  # a sixth root of unity other than 1
        rep = diffspec.c_uniformity(F625, 105, c)
        assert rep.bound is None


class TestValidation:
    def test_bad_spectrum_rejected(self):
        with pytest.raises(VerificationError):
            diffspec.Spectrum({0: 372, 2: 250, 5: 1, 20: 5}, 625).validate()

    def test_nonpositive_exponent(self, F16):
        with pytest.raises(ValueError):
            diffspec.delta(F16, 0, 1)
