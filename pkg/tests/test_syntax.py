import json
from fractions import Fraction

import pytest
from hypothesis import given

from omegadef.algebra import Poly, VarEnv
from omegadef.deformation import ParamAssignment, examples_for
from omegadef.exterior import Form
from omegadef.syntax import (ParseError, format_field, format_params_document, parse_field,
                             parse_form, parse_params_document, parse_poly, params_from_mapping)

from conftest import ENV2, ENV2P, ENV3, fields, forms, polys


def doc(**over):
    base = {"n": 2, "t0": ["0", "0", "0"], "t1": ["0", "0"], "t1tilde": ["0", "0"], "t2": ["0"]}
    base.update(over)
    return json.dumps(base)


def test_grammar_examples():
    s, t = Poly.var(ENV2P, "s"), Poly.var(ENV2P, "t")
    x1 = Poly.x(ENV2P, 0)
    assert parse_poly("-3/2*x1^2*t + s", ENV2P) == x1 ** 2 * t * Fraction(-3, 2) + s
    assert parse_poly("(x1 - s)^2", ENV2P) == x1 * x1 - x1 * s * 2 + s * s
    assert parse_poly("0", ENV2P) == 0
    assert parse_poly("2*3/4", ENV2P) == Poly.const(ENV2P, Fraction(3, 2))


def test_form_grammar():
    w = parse_form("(x1)*xi[2,1] + 2*xi[]", ENV2)
    assert w == Form.monomial(ENV2, (0, 1), -Poly.x(ENV2, 0)) + Form.function(Poly.const(ENV2, 2))
    assert str(w) == "(2)*xi[] + (-x1)*xi[1,2]"
    assert not parse_form("xi[1]*xi[1]", ENV2)


def test_field_grammar():
    v = parse_field("[x1^2, x1*x2]", ENV2)
    assert format_field(v) == "[x1^2, x1*x2]"


@pytest.mark.parametrize("text,col,msg", [
    ("x3 + 1", 1, "does not exist"),
    ("x1 +* 2", 5, "unexpected '\\*'"),
    ("u", 1, "unknown parameter"),
    ("(x1", 4, "expected '\\)'"),
    ("1/0", 3, "zero denominator"),
    ("x1 @ 2", 4, "unexpected character"),
    ("xi[3]", 4, "outside"),
    ("xi[1]^2", 6, "unexpected '\\^'"),
    ("(xi[1])^2", 1, "odd factors"),
])
def test_errors_carry_locations(text, col, msg):
    with pytest.raises(ParseError, match=msg) as info:
        parse_form(text, ENV2)
    assert info.value.pos + 1 == col
    assert f"column {col}" in str(info.value)


def test_poly_rejects_odd_variables():
    with pytest.raises(ParseError, match="odd variables"):
        parse_poly("xi[1]", ENV2)


def test_field_arity():
    with pytest.raises(ParseError, match="expected 3 components"):
        parse_field("[x1, x2]", ENV3)
    with pytest.raises(ParseError):
        parse_field("[x1, xi[1]]", ENV2)


def test_params_document_roundtrip():
    t = examples_for("planar", 2)[0].t
    back = parse_params_document(format_params_document(t))
    assert back == t


def test_params_arity_error():
    with pytest.raises(ValueError, match="t0 needs 3 entries for n=2"):
        parse_params_document(doc(t0=["0", "0"]))


def test_params_unknown_name():
    with pytest.raises(ParseError, match=r"t0\[2\]: unknown parameter name 'b'"):
        parse_params_document(doc(params=["a"], t0=["a", "0", "b"]))


def test_params_spatial_name():
    with pytest.raises(ParseError, match="spatial variable 'x1'"):
        parse_params_document(doc(t1=["x1", "0"]))


def test_params_parse_error_location():
    with pytest.raises(ParseError, match=r"t1tilde\[1\]") as info:
        parse_params_document(doc(t1tilde=["0", "a +"]))
    assert info.value.pos == 3


def test_params_bad_json_and_fields():
    with pytest.raises(ValueError, match="invalid JSON at line 1"):
        parse_params_document("{")
    with pytest.raises(ValueError, match="unknown fields"):
        parse_params_document(doc(t3=["0"]))
    with pytest.raises(ValueError, match="n must be"):
        params_from_mapping({"n": 1})


def test_params_names_in_order_of_appearance():
    t = parse_params_document(doc(t0=["b", "a", "0"]))
    assert t.env.params == ("b", "a")
    assert isinstance(t, ParamAssignment)


@given(polys(ENV2P, 4, 6))
def test_poly_roundtrip(p):
    assert parse_poly(str(p), ENV2P) == p


@given(forms(VarEnv(3, ("t",)), 2))
def test_form_roundtrip(w):
    assert parse_form(str(w), w.env) == w


@given(fields(ENV3))
def test_field_roundtrip(v):
    assert parse_field(format_field(v), ENV3) == v
