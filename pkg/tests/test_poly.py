"""Exact polynomial arithmetic and the symbolic bracket layer."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nlie.guards import GuardExceeded
from nlie.poly import (
    Poly,
    PolyParseError,
    default_var_names,
    jac_bracket,
    monomials_up_to,
    parse_poly,
    truncated_center,
    truncated_derived_span,
    verify_identity_truncated,
    w_bracket,
)

XY = ("x", "y")


def P(src: str, names=XY) -> Poly:
    return parse_poly(src, names)


class TestPolyArithmetic:
    def test_basic_ops(self):
        assert P("x + y") * P("x - y") == P("x^2 - y^2")
        assert P("(x + y)^2") == P("x^2 + 2*x*y + y^2")
        assert P("x") - P("x") == Poly.zero(2)
        assert P("3/2*x").scale(Fraction(2, 3)) == P("x")

    def test_degree(self):
        assert Poly.zero(2).degree() == -1
        assert P("5").degree() == 0
        assert P("x^2*y + x").degree() == 3

    def test_partial(self):
        assert P("x^3*y").partial(0) == P("3*x^2*y")
        assert P("x^3*y").partial(1) == P("x^3")
        assert P("7").partial(0) == Poly.zero(2)

    def test_pow_negative(self):
        with pytest.raises(ValueError):
            P("x") ** -1

    @given(
        st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2)
    )
    @settings(max_examples=30)
    def test_distributivity(self, ca, cb, ea, eb):
        a = Poly.monomial((ea, 0), ca)
        b = Poly.monomial((0, eb), cb)
        c = P("x + 2*y")
        assert (a + b) * c == a * c + b * c

    def test_second_derivative_of_square(self):
        # d^2(b^2)/dx^2 = 2 (db/dx)^2 + 2 b d^2b/dx^2, the iterated Leibniz
        # consequence any derivation satisfies
        b = P("x^2*y + 3*x - y^2")
        lhs = (b * b).partial(0).partial(0)
        db = b.partial(0)
        rhs = (db * db).scale(2) + (b * b.partial(0).partial(0)).scale(2)
        assert lhs == rhs


class TestParser:
    def test_roundtrip(self):
        for src in ("x^2 - 3*y", "1/2*x*y + y^4", "-x", "0", "(x + y)^3"):
            p = P(src)
            assert P(p.render(XY)) == p

    def test_render_orders_terms(self):
        assert P("y^3 + x^3").render(XY) == "x^3 + y^3"
        assert P("y + x^2").render(XY) == "x^2 + y"

    def test_error_positions(self):
        with pytest.raises(PolyParseError, match="unknown variable 'z'"):
            P("z")
        with pytest.raises(PolyParseError, match="negative exponent"):
            P("x^-1")
        with pytest.raises(PolyParseError, match="zero denominator"):
            P("1/0")
        with pytest.raises(PolyParseError, match="unexpected 'y'"):
            P("x y")
        with pytest.raises(PolyParseError, match="end of input"):
            P("")


class TestBrackets:
    def test_jac_frozen_value(self):
        # det [[2x, y^2], [0, 2xy]] = 4 x^2 y
        out = jac_bracket([P("x^2"), P("x*y^2")])
        assert out == P("4*x^2*y")

    def test_jac_antisymmetry_and_leibniz_spot(self):
        a, b, c = P("x^2 + y"), P("x*y"), P("y^2 - x")
        assert jac_bracket([a, b]) == -jac_bracket([b, a])
        assert jac_bracket([a * b, c]) == a * jac_bracket([b, c]) + jac_bracket([a, c]) * b

    def test_w_frozen_values(self):
        x = ("x",)
        assert w_bracket([P("1", x), P("x", x)]) == P("1", x)
        assert w_bracket([P("x", x), P("x^2", x)]) == P("x^2", x)

    def test_ternary_jac(self):
        xyz = ("x", "y", "z")
        out = jac_bracket([P("x", xyz), P("y", xyz), P("z", xyz)])
        assert out == P("1", xyz)

    def test_argument_counts(self):
        with pytest.raises(ValueError):
            jac_bracket([P("x")])
        with pytest.raises(ValueError):
            w_bracket([P("x", ("x",))])


class TestTruncatedVerification:
    @pytest.mark.parametrize("identity", ["jacobi", "leibniz", "shift"])
    def test_jac_satisfies_all(self, identity):
        v = verify_identity_truncated(identity, "jac", 2, 2)
        assert v.ok

    def test_w_satisfies_jacobi(self):
        assert verify_identity_truncated("jacobi", "w", 2, 2).ok

    def test_w_fails_leibniz_frozen_witness(self):
        v = verify_identity_truncated("leibniz", "w", 2, 2)
        assert not v.ok
        data = v.witness.data
        assert data["args"] == ((0,), (0,), (1,))
        assert data["lhs"] == "1"
        assert data["rhs"] == "2"

    def test_witness_replays_symbolically(self):
        one = Poly.monomial((0,))
        x = Poly.monomial((1,))
        lhs = w_bracket([one * one, x])
        rhs = one * w_bracket([one, x]) + w_bracket([one, x]) * one
        assert lhs != rhs

    def test_unknown_identity(self):
        with pytest.raises(ValueError):
            verify_identity_truncated("cocycle", "jac", 2, 2)

    def test_instance_guard(self):
        with pytest.raises(GuardExceeded):
            verify_identity_truncated("jacobi", "jac", 2, 4, max_instances=10)


class TestTruncatedSubspaces:
    def test_monomials_up_to(self):
        assert len(monomials_up_to(2, 4)) == 15
        assert monomials_up_to(2, 1) == [(0, 0), (1, 0), (0, 1)]

    def test_derived_span_full_jac(self):
        spanned = truncated_derived_span("jac", 2, 2)
        assert spanned.is_full()
        assert spanned.dim == 6

    def test_derived_span_full_w(self):
        spanned = truncated_derived_span("w", 2, 2)
        assert spanned.is_full()

    def test_center_is_constants_jac(self):
        cen = truncated_center("jac", 2, 2)
        assert cen.basis.dim == 1
        (row,) = cen.basis.rows
        assert row[0] == 1 and all(c == 0 for c in row[1:])

    def test_default_var_names(self):
        assert default_var_names(2) == ("x", "y")
        assert default_var_names(4) == ("x1", "x2", "x3", "x4")
