"""Field arithmetic and exact linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nlie.fields import PrimeField, QQ
from nlie.linalg import (
    EchelonAccumulator,
    Matrix,
    SubspaceBasis,
    determinant,
    kernel,
    quotient_complement,
    span,
    unit_vector,
)

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


class TestFields:
    def test_rational_parse_fmt(self):
        assert QQ.parse("3/4") == Fraction(3, 4)
        assert QQ.parse("-2") == Fraction(-2)
        assert QQ.fmt(Fraction(-1, 3)) == "-1/3"
        assert QQ.fmt(Fraction(5)) == "5"

    def test_prime_field_ops(self):
        assert F5.add(3, 4) == 2
        assert F5.mul(3, 4) == 2
        assert F5.neg(2) == 3
        assert F5.inv(3) == 2  # 3*2 = 6 = 1 mod 5
        assert F5.parse("-1") == 4
        assert F5.fmt(4) == "4"

    def test_prime_field_rejects_composites(self):
        with pytest.raises(ValueError):
            PrimeField(6)
        with pytest.raises(ValueError):
            PrimeField(1)

    def test_inv_zero(self):
        with pytest.raises(ZeroDivisionError):
            F3.inv(0)

    @given(st.integers(1, 4), st.integers(1, 4))
    @settings(max_examples=20)
    def test_fp_inverse_property(self, a, b):
        assert F5.mul(a % 5 or 1, F5.inv(a % 5 or 1)) == 1


class TestMatrix:
    def test_rref_rank(self):
        m = Matrix(QQ, [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
        _, rank = m.rref()
        assert rank == 1

    def test_kernel_oracle(self):
        # x + 2y = 0 over Q: kernel spanned by (-2, 1), canonical (1, -1/2)
        m = Matrix(QQ, [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(0)]])
        k = kernel(m)
        assert k.dim == 1
        (row,) = k.rows
        assert m.matvec(row) == (Fraction(0), Fraction(0))

    def test_matvec_identity(self):
        m = Matrix.identity(F3, 3)
        assert m.matvec((1, 2, 0)) == (1, 2, 0)

    def test_determinant(self):
        assert determinant(QQ, [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]) == Fraction(-2)
        assert determinant(F5, [[2, 0], [0, 3]]) == 1  # 6 mod 5

    @given(
        st.lists(
            st.lists(st.integers(0, 4), min_size=3, max_size=3),
            min_size=3,
            max_size=3,
        )
    )
    @settings(max_examples=30)
    def test_rank_nullity(self, rows):
        m = Matrix(F5, rows)
        _, rank = m.rref()
        assert rank + kernel(m).dim == 3


class TestSubspaces:
    def test_canonical_equality(self):
        a = span(QQ, 3, [(Fraction(1), Fraction(1), Fraction(0)), (Fraction(0), Fraction(2), Fraction(0))])
        b = span(QQ, 3, [(Fraction(3), Fraction(0), Fraction(0)), (Fraction(1), Fraction(1), Fraction(0))])
        assert a == b
        assert hash(a) == hash(b)

    def test_trusted_freezes_containers(self):
        # equality must not depend on whether the caller handed in lists
        a = SubspaceBasis._trusted(F3, 2, [[1, 0]], [0])
        b = span(F3, 2, [(1, 0)])
        assert a == b
        assert hash(a) == hash(b)

    def test_contains_and_coordinates(self):
        S = span(F3, 3, [(1, 0, 2), (0, 1, 1)])
        v = (1, 1, 0)  # = row0 + row1
        assert S.contains(v)
        coords = S.coordinates_of(v)
        assert coords == (1, 1)
        assert not S.contains((0, 0, 1))
        assert S.coordinates_of((0, 0, 1)) is None

    def test_sum_intersect_dims(self):
        a = span(F3, 4, [unit_vector(F3, 4, 0), unit_vector(F3, 4, 1)])
        b = span(F3, 4, [unit_vector(F3, 4, 1), unit_vector(F3, 4, 2)])
        assert a.sum(b).dim == 3
        assert a.intersect(b).dim == 1
        assert a.intersect(b).contains(unit_vector(F3, 4, 1))

    @given(
        st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), max_size=3),
        st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), max_size=3),
    )
    @settings(max_examples=40)
    def test_dim_formula(self, va, vb):
        a = span(F3, 4, va)
        b = span(F3, 4, vb)
        assert a.sum(b).dim + a.intersect(b).dim == a.dim + b.dim

    def test_accumulator_matches_span(self):
        vecs = [(1, 2, 0), (2, 1, 1), (0, 0, 2), (1, 1, 1)]
        acc = EchelonAccumulator(F3, 3)
        for v in vecs:
            acc.add(v)
        assert acc.to_subspace() == span(F3, 3, vecs)

    def test_quotient_complement(self):
        S = span(QQ, 3, [(Fraction(1), Fraction(0), Fraction(0))])
        reps = quotient_complement(SubspaceBasis.full(QQ, 3), S)
        assert len(reps) == 2

    def test_zero_and_full(self):
        z = SubspaceBasis.zero(F2, 3)
        f = SubspaceBasis.full(F2, 3)
        assert z.is_zero() and not z.is_full()
        assert f.is_full() and f.contains_subspace(z)
