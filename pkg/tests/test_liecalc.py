import random

from hypothesis import given

from omegadef.algebra import Poly
from omegadef.exterior import DiffOp, Form, commutator, d_operator
from omegadef.liecalc import (VectorField, bracket, divergence, lie_derivative, monomial_family,
                              monomial_field, random_field)

from conftest import ENV2, ENV3, fields, forms, polys


def x(env, i):
    return Poly.x(env, i)


def contraction(v: VectorField) -> DiffOp:
    """Interior product as ``sum X^i dxi_i``."""
    out = DiffOp.zero(v.env)
    for i, c in enumerate(v.components):
        out = out + DiffOp.mult(c) @ DiffOp.dxi(v.env, i)
    return out


def test_bracket_values():
    a = monomial_field(ENV2, (1, 0), 0)
    b = monomial_field(ENV2, (2, 0), 0)
    assert bracket(a, b) == monomial_field(ENV2, (2, 0), 0)
    u = VectorField([x(ENV2, 1), Poly.zero(ENV2)])
    v = VectorField([Poly.zero(ENV2), x(ENV2, 0)])
    # [x2 d1, x1 d2] = x2 d2 - x1 d1
    assert bracket(u, v) == VectorField([-x(ENV2, 0), x(ENV2, 1)])


def test_divergence_value():
    v = VectorField([x(ENV2, 0) ** 2, x(ENV2, 0) * x(ENV2, 1)])
    assert divergence(v) == x(ENV2, 0) * 3


def test_lie_derivative_on_a_coordinate_form():
    v = VectorField([x(ENV2, 1), Poly.zero(ENV2)])
    assert lie_derivative(v)(Form.monomial(ENV2, (0,))) == Form.monomial(ENV2, (1,))


def test_monomial_family_labels():
    fam = monomial_family(ENV2, 1)
    assert [f.label for f in fam] == ["1*d1", "1*d2", "x1*d1", "x1*d2", "x2*d1", "x2*d2"]


def test_random_fields_are_seeded():
    a = [random_field(ENV3, random.Random(7)) for _ in range(2)]
    assert a[0] == a[1]


@given(fields(ENV2), polys(ENV2))
def test_lie_derivative_on_functions(v, f):
    assert lie_derivative(v)(Form.function(f)) == Form.function(v.derive(f))


@given(fields(ENV2), forms(ENV2))
def test_cartan_formula(v, w):
    d, i = d_operator(ENV2), contraction(v)
    assert lie_derivative(v)(w) == d(i(w)) + i(d(w))


@given(fields(ENV2))
def test_lie_derivative_commutes_with_d(v):
    assert not commutator(lie_derivative(v), d_operator(ENV2))


@given(fields(ENV2), fields(ENV2))
def test_representation(u, v):
    assert commutator(lie_derivative(u), lie_derivative(v)) == lie_derivative(bracket(u, v))


@given(fields(ENV3, 2), fields(ENV3, 2))
def test_representation_n3(u, v):
    assert commutator(lie_derivative(u), lie_derivative(v)) == lie_derivative(bracket(u, v))


@given(fields(ENV2, 2), fields(ENV2, 2), fields(ENV2, 2))
def test_jacobi(u, v, w):
    total = bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v))
    assert not total


@given(fields(ENV2), fields(ENV2))
def test_divergence_is_a_cocycle(u, v):
    assert divergence(bracket(u, v)) == u.derive(divergence(v)) - v.derive(divergence(u))
