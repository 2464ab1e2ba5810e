import numpy as np
import pytest

from ffspectra import (FieldParams, SizeLimitError, build_field, field_for,
                       find_primitive_polynomial)
from ffspectra.field import add_logs, neg_logs


def poly_add(F, a, b):
    # independent reference: coefficient-wise addition of the digit vectors
    p = F.p
    out = 0
    for i in range(F.n):
        da, db = (a // p**i) % p, (b // p**i) % p
        out += ((da + db) % p) * p**i
    return out


class TestPrimitivePolynomials:
    def test_degree_two_binary(self):
        # only irreducible quadratic over F_2
        assert find_primitive_polynomial(2, 2) == (1, 1, 1)

    def test_degree_one_ternary(self):
        # x + 1 has root 2, the smallest primitive root mod 3
        assert find_primitive_polynomial(3, 1) == (1, 1)

    def test_degree_four_binary_is_first_in_scan(self):
        found = find_primitive_polynomial(2, 4)
        assert found == (1, 0, 0, 1, 1)
        # nothing lexicographically smaller builds a field: the only smaller
        # candidate with nonzero constant term is x^4 + 1 = (x+1)^4
        with pytest.raises(ValueError):
            build_field(FieldParams(2, 4, (1, 0, 0, 0, 1)))

    def test_non_primitive_is_rejected(self):
        # x^4+x^3+x^2+x+1 is irreducible but divides x^5-1, so x has order 5
        with pytest.raises(ValueError):
            build_field(FieldParams(2, 4, (1, 1, 1, 1, 1)))

    def test_cap(self):
        with pytest.raises(SizeLimitError):
            find_primitive_polynomial(2, 23)
        with pytest.raises(SizeLimitError):
            field_for(2, 11, cap=1 << 10)


class TestContext:
    def test_cardinalities(self, F16):
        assert F16.order == 16
        assert F16.group_order == 15
        assert F16.psi == 2

    def test_beta_trivial_in_char_two(self, F16):
        assert F16.beta == 1

    def test_beta_generates_prime_field(self, F625):
        assert F625.log(F625.beta) == 156
        seen = set()
        b = 1
        for _ in range(F625.p - 1):
            b = F625.mul(b, F625.beta)
            seen.add(b)
        assert b == 1 and len(seen) == F625.p - 1
        assert F625.beta < F625.p  # lies in the prime subfield

    def test_cube_roots_of_unity_sum(self, F16):
        # the two primitive cube roots sum to 1
        assert F16.add(F16.element(5), F16.element(10)) == 1

    def test_inverse_and_lagrange(self, F81):
        for x in F81.units():
            assert F81.mul(x, F81.inv(x)) == 1
            assert F81.pow(x, F81.group_order) == 1

    def test_inverse_of_zero(self, F16):
        with pytest.raises(ValueError):
            F16.inv(0)
        with pytest.raises(ValueError):
            F16.log(0)

    def test_log_is_homomorphism(self, F81):
        N = F81.group_order
        for x in F81.units():
            for y in (1, 2, F81.psi, F81.element(7), F81.element(39)):
                lhs = F81.log(F81.mul(x, y))
                assert lhs == (F81.log(x) + F81.log(y)) % N

    def test_zech_addition_matches_digit_addition(self, F16, F81):
        for F in (F16, F81):
            for x in F.elements():
                for y in F.elements():
                    assert F.add(x, y) == poly_add(F, x, y)

    def test_sub_neg_div(self, F81):
        for x in (0, 1, 5, F81.element(17)):
            for y in (1, 3, F81.element(42)):
                assert F81.add(F81.sub(x, y), y) == x
                assert F81.mul(F81.div(x, y), y) == x
            assert F81.add(x, F81.neg(x)) == 0

    def test_pow_conventions(self, F16):
        assert F16.pow(0, 0) == 1
        assert F16.pow(0, 5) == 0
        assert F16.pow(F16.psi, -1) == F16.inv(F16.psi)
        assert F16.pow(F16.psi, 16) == F16.pow(F16.psi, 16 % 15)
        with pytest.raises(ValueError):
            F16.pow(0, -2)


class TestTrace:
    def test_trace_zero_and_one(self, F16):
        assert F16.trace(0) == 0
        assert F16.trace(1) == 0  # n = 4 is even in characteristic 2

    def test_trace_psi_in_f4(self, F4):
        # with modulus x^2+x+1: psi + psi^2 = 1
        assert F4.trace(F4.psi) == 1

    def test_trace_matches_power_sum(self, F81):
        for x in F81.elements():
            acc = 0
            for i in range(F81.n):
                acc = F81.add(acc, F81.pow(x, F81.p**i))
            assert acc == F81.trace(x)

    def test_trace_fibers_and_additivity(self, F16, F81):
        for F in (F16, F81):
            fibers = np.bincount(F.trace_table, minlength=F.p)
            assert list(fibers) == [F.order // F.p] * F.p
            for x in range(0, F.order, 7):
                for y in range(0, F.order, 11):
                    s = F.trace(F.add(x, y))
                    assert s == (F.trace(x) + F.trace(y)) % F.p

    def test_frobenius_is_linear_bijection_of_order_n(self, F81):
        imgs = {F81.pow(x, F81.p) for x in F81.elements()}
        assert len(imgs) == F81.order
        for x in F81.elements():
            assert F81.trace(F81.pow(x, F81.p)) == F81.trace(x)
            y = x
            for _ in range(F81.n):
                y = F81.pow(y, F81.p)
            assert y == x

    def test_subfield_trace(self, F16):
        # psi^5 lies in F_4 and has absolute trace psi^5 + psi^10 = 1
        assert F16.subfield_trace(F16.element(5), 2) == 1
        with pytest.raises(ValueError):
            F16.subfield_trace(F16.psi, 2)


class TestCosets:
    def test_class_of_one(self, F16):
        for m in (1, 3, 5, 15):
            assert F16.coset_class(1, m) == 0

    def test_class_is_log_mod_m(self, F16):
        assert F16.coset_class(F16.element(5), 3) == 2

    def test_root_of_unity_predicate(self, F16):
        assert F16.is_root_of_unity(F16.element(5), 3)
        assert not F16.is_root_of_unity(F16.psi, 3)
        assert not F16.is_root_of_unity(0, 3)

    def test_zero_has_no_class(self, F16):
        with pytest.raises(ValueError):
            F16.coset_class(0, 3)

    def test_divisibility_required(self, F16):
        with pytest.raises(ValueError):
            F16.coset_class(1, 4)


class TestBulkHelpers:
    def test_add_logs_matches_scalar(self, F81):
        N = F81.group_order
        codes = np.arange(N + 1)
        for la in (0, 1, 7, N):
            summed = add_logs(F81, np.full(N + 1, la), codes)
            for lb, code in zip(codes, summed):
                x = 0 if la == N else F81.element(la)
                y = 0 if lb == N else F81.element(int(lb))
                expect = F81.add(x, y)
                got = 0 if code == N else F81.element(int(code))
                assert got == expect

    def test_neg_logs(self, F81):
        N = F81.group_order
        out = neg_logs(F81, np.arange(N + 1))
        for lb, code in zip(range(N + 1), out):
            y = 0 if lb == N else F81.element(lb)
            got = 0 if code == N else F81.element(int(code))
            assert got == F81.neg(y)


class TestSerialization:
    def test_descriptor_roundtrip(self, F16):
        desc = F16.descriptor()
        assert desc == {"p": 2, "n": 4, "modulus": [1, 0, 0, 1, 1]}
        rebuilt = build_field(FieldParams(desc["p"], desc["n"], tuple(desc["modulus"])))
        assert np.array_equal(rebuilt.exp_table, F16.exp_table)

    def test_cache_roundtrip(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FFSPECTRA_CACHE_DIR", str(tmp_path))
        a = field_for(3, 2)
        files = list(tmp_path.iterdir())
        assert len(files) == 1
        b = field_for(3, 2)
        assert np.array_equal(a.exp_table, b.exp_table)
        assert np.array_equal(a.trace_table, b.trace_table)

    def test_tables_are_immutable(self, F16):
        with pytest.raises(ValueError):
            F16.exp_table[0] = 5
