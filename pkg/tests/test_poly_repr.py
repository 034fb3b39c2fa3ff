import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bentforge.finite_field import DomainTooLarge, InnerProduct, default_field
from bentforge.fixtures import golden_poly, load_golden, run_example
from bentforge.functions import FpFunction, linear_function, trace_form
from bentforge.poly_repr import (
    UnivariatePoly,
    algebraic_degree,
    digit_sum,
    evaluate,
    evaluate_all,
    interpolate,
    to_function,
)

FIELDS = [(2, 6), (3, 3), (3, 4), (5, 3), (7, 2)]


def lagrange_coeff(f, j):
    """c_j by the textbook formula, element by element."""
    c = f.ctx
    if j == 0:
        return c.from_int(f(0))
    acc = 0
    for x in range(1, c.q):
        acc = c.add(acc, c.scale(f(x), c.pow(c.inv(x), j)))
    if j == c.q - 1:
        acc = c.add(acc, c.from_int(f(0)))
    return c.neg(acc)


def test_constant(gf27):
    P = interpolate(FpFunction(gf27, np.full(27, 2)))
    assert P.coeffs == {0: 2}
    assert algebraic_degree(P) == 0


def test_zero_polynomial(gf27):
    P = UnivariatePoly(gf27, {})
    assert all(evaluate(P, x) == 0 for x in range(27))
    assert interpolate(FpFunction.zero(gf27)).coeffs == {}
    assert P.render() == "0"


@pytest.mark.parametrize("p,n", FIELDS)
def test_round_trip(p, n, rng):
    c = default_field(p, n)
    for _ in range(3):
        f = FpFunction(c, rng.integers(0, p, size=c.q))
        P = interpolate(f)
        assert len(P) <= c.q
        assert to_function(P) == f
        assert np.array_equal(evaluate_all(P), f.values)
        for x in range(0, c.q, max(1, c.q // 20)):
            assert evaluate(P, x) == f(x)


@given(st.sampled_from(FIELDS), st.data())
def test_round_trip_property(pn, data):
    c = default_field(*pn)
    f = FpFunction(c, np.array(data.draw(st.lists(st.integers(0, c.p - 1), min_size=c.q, max_size=c.q))))
    P = interpolate(f)
    assert to_function(P) == f
    assert interpolate(to_function(P)).coeffs == P.coeffs


def test_matches_textbook_formula(gf27, rng):
    f = FpFunction(gf27, rng.integers(0, 3, size=27))
    P = interpolate(f)
    for j in range(27):
        assert P.coeffs.get(j, 0) == lagrange_coeff(f, j)


def test_frobenius_consistency(gf81, rng):
    # an F_p-valued function has c_{pj mod (q-1)} = c_j^p
    f = FpFunction(gf81, rng.integers(0, 3, size=81))
    P = interpolate(f)
    for j in range(1, 80):
        assert P.coeffs.get(3 * j % 80, 0) == gf81.pow(P.coeffs.get(j, 0), 3)


def test_ex1_polynomial():
    r = run_example("ex1")
    P = interpolate(r.F)
    assert P.coeffs == golden_poly(r.F.ctx, load_golden("ex1")).coeffs
    assert len(P) == 38
    assert algebraic_degree(P) == 3
    assert P.render().startswith("g^51*x^56 + g^27*x^52 + g^12*x^50")
    assert P.render().endswith("g^28*x^2 + g^14*x")


def test_ex2_round_trip():
    F = run_example("ex2").F
    assert to_function(interpolate(F)) == F


def test_ex3b_degree_and_frobenius_consistency():
    F = run_example("ex3b").F
    P = interpolate(F)
    assert algebraic_degree(P) == 4
    c = F.ctx
    assert algebraic_degree(P) <= (c.p - 1) * c.n // 2 + 1
    for j in range(1, 26):
        assert P.coeffs.get(3 * j % 26, 0) == c.pow(P.coeffs.get(j, 0), 3)


def test_printed_ex3b_polynomial_is_not_fp_valued():
    c = default_field(3, 3)
    from bentforge.finite_field import named_field

    c = named_field("gf3_3")
    P = golden_poly(c, load_golden("ex3b"))
    assert len(P) == 22
    vals = evaluate_all(P)
    assert np.count_nonzero(vals < 3) < 27
    with pytest.raises(ValueError):
        to_function(P)


def test_degree_bound_on_pipeline_outputs():
    for name in ("ex1", "ex2", "ex3a", "ex3b"):
        F = run_example(name).F
        c = F.ctx
        assert algebraic_degree(interpolate(F)) <= (c.p - 1) * c.n // 2 + 1


def test_linear_and_quadratic_degrees(gf81):
    f = linear_function(InnerProduct(gf81, 1), gf81.elem(5))
    assert algebraic_degree(interpolate(f)) == 1
    q = trace_form(gf81, [(gf81.elem(4), 28), (gf81.elem(9), 2)])
    assert algebraic_degree(interpolate(q)) == 2


def test_digit_sum():
    assert digit_sum(56, 2) == 3
    assert digit_sum(24, 3) == 4
    assert digit_sum(0, 5) == 0


def test_json_and_render(gf27):
    P = UnivariatePoly(gf27, {12: 2, 10: 2, 2: gf27.elem(9), 6: gf27.elem(1), 0: 1})
    assert P.to_json()["terms"][0] == {"coef_log": 13, "exp": 12}
    assert P.render() == "2x^12 + 2x^10 + g*x^6 + g^9*x^2 + 1"


def test_interpolation_guard():
    c = default_field(2, 17)
    f = FpFunction.zero(c)
    with pytest.raises(DomainTooLarge):
        interpolate(f)
