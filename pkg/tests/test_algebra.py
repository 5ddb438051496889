from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from omegadef.algebra import EnvMismatch, Poly, VarEnv

from conftest import ENV2, ENV2P, ENV3, polys


def x(env, i):
    return Poly.x(env, i)


def test_env_validation():
    with pytest.raises(ValueError):
        VarEnv(1)
    with pytest.raises(ValueError):
        VarEnv(2, ("x1",))
    with pytest.raises(ValueError):
        VarEnv(2, ("t", "t"))
    with pytest.raises(ValueError):
        VarEnv(2, ("xi",))
    assert VarEnv(3, ("a",)).names == ("x1", "x2", "x3", "a")


def test_binomial_square():
    p = (x(ENV2, 0) + 1) ** 2
    assert p == x(ENV2, 0) ** 2 + x(ENV2, 0) * 2 + 1
    assert str(p) == "x1^2 + 2*x1 + 1"


def test_printer_format():
    t = Poly.var(ENV2P, "t")
    p = x(ENV2P, 0) ** 2 * t * Fraction(3, 2) - x(ENV2P, 1)
    assert str(p) == "3/2*x1^2*t - x2"
    assert str(Poly.zero(ENV2)) == "0"
    assert str(Poly.const(ENV2, -1)) == "-1"


def test_derivatives():
    p = x(ENV2, 0) ** 3 * x(ENV2, 1) - x(ENV2, 1) ** 2
    assert p.diff(0) == x(ENV2, 0) ** 2 * x(ENV2, 1) * 3
    assert p.diff(1) == x(ENV2, 0) ** 3 - x(ENV2, 1) * 2
    assert p.diff_multi((2, 1)) == x(ENV2, 0) * 6
    with pytest.raises(ValueError):
        Poly.var(ENV2P, "t").diff("t")


def test_exact_rationals():
    half = Poly.const(ENV2, Fraction(1, 2))
    assert (half * 2) == 1
    assert (half + half).constant_term() == mpq(1)
    assert Poly.const(ENV2, mpq(1, 3)) * 3 == 1


def test_env_mismatch():
    with pytest.raises(EnvMismatch):
        x(ENV2, 0) + x(ENV3, 0)
    lifted = x(ENV2, 0).lift(ENV2P)
    assert lifted + Poly.var(ENV2P, "s") == Poly.var(ENV2P, "s") + x(ENV2P, 0)


def test_substitute_and_evaluate():
    s, t = Poly.var(ENV2P, "s"), Poly.var(ENV2P, "t")
    p = s * t + s ** 2
    # simultaneous: s -> t, t -> s
    assert p.substitute({"s": t, "t": s}) == s * t + t ** 2
    assert p.evaluate({"s": 2, "t": 3}) == 10
    assert (s * x(ENV2P, 0)).param_degree() == 1


def test_split_params():
    s = Poly.var(ENV2P, "s")
    p = s * x(ENV2P, 0) + s * s * 3 + x(ENV2P, 1)
    parts = p.homogeneous_param_parts()
    assert sorted(parts) == [0, 1, 2]
    assert parts[2] == s * s * 3


@given(polys(ENV2P), polys(ENV2P), polys(ENV2P))
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(polys(ENV2P), polys(ENV2P), st.integers(0, 1))
def test_leibniz(a, b, i):
    assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


@given(polys(ENV3, 4), st.integers(0, 2), st.integers(0, 2))
def test_partials_commute(a, i, j):
    assert a.diff(i).diff(j) == a.diff(j).diff(i)


@given(polys(ENV2P), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(-3, 3))
def test_evaluation_is_a_homomorphism(a, u, v, s, t):
    vals = {"x1": u, "x2": v, "s": s, "t": t}
    b = a * a + a
    assert b.evaluate(vals) == a.evaluate(vals) ** 2 + a.evaluate(vals)


@given(polys(ENV2P))
def test_split_params_reassembles(a):
    total = Poly.zero(ENV2P)
    for pm, q in a.split_params().items():
        mono = Poly(ENV2P, {pm: mpq(1)})
        total = total + q * mono
    assert total == a
