import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegadef.algebra import Poly
from omegadef.exterior import (DiffOp, Form, commutator, d_operator, graded_block, odd_reorder,
                               projector, xi_sort)

from conftest import ENV2, ENV3, forms, ops


def xi(env, *idx):
    return Form.monomial(env, idx)


def x(env, i):
    return Poly.x(env, i)


def test_xi_sort_signs():
    assert xi_sort((1, 0)) == (-1, (0, 1))
    assert xi_sort((2, 0, 1)) == (1, (0, 1, 2))
    assert xi_sort((0, 0))[0] == 0


def test_wedge_anticommutes():
    assert xi(ENV2, 0).wedge(xi(ENV2, 1)) == -xi(ENV2, 1).wedge(xi(ENV2, 0))
    assert not xi(ENV2, 0).wedge(xi(ENV2, 0))


def test_de_rham_of_product():
    f = Form.function(x(ENV2, 0) * x(ENV2, 1))
    assert f.d() == Form.monomial(ENV2, (0,), x(ENV2, 1)) + Form.monomial(ENV2, (1,), x(ENV2, 0))
    assert str(Form.monomial(ENV2, (1, 0), x(ENV2, 0))) == "(-x1)*xi[1,2]"


def test_canonical_anticommutation():
    one = DiffOp.identity(ENV2)
    a, b = DiffOp.dxi(ENV2, 0), DiffOp.xi(ENV2, 0)
    assert a @ b + b @ a == one
    c = DiffOp.dxi(ENV2, 1)
    assert c @ b + b @ c == DiffOp.zero(ENV2)


def test_heisenberg():
    one = DiffOp.identity(ENV2)
    assert commutator(DiffOp.dx(ENV2, 0), DiffOp.mult(x(ENV2, 0))) == one
    assert not commutator(DiffOp.dx(ENV2, 1), DiffOp.mult(x(ENV2, 0)))


def test_odd_reorder_single():
    # d_xi0 o xi0 = 1 - xi0 d_xi0
    assert set(odd_reorder((0,), (0,))) == {(1, (), ()), (-1, (0,), (0,))}


def test_d_squared_vanishes():
    for env in (ENV2, ENV3):
        d = d_operator(env)
        assert not d @ d


def test_projectors_partition_identity():
    for env in (ENV2, ENV3):
        pis = [projector(env, k) for k in range(env.n + 1)]
        total = DiffOp.zero(env)
        for p in pis:
            total = total + p
        assert total == DiffOp.identity(env)
        for i, p in enumerate(pis):
            for j, q in enumerate(pis):
                assert p @ q == (p if i == j else DiffOp.zero(env))


def test_graded_block_range():
    with pytest.raises(ValueError):
        graded_block(d_operator(ENV2), 0, 3)
    assert graded_block(d_operator(ENV2), 1, 2) @ projector(ENV2, 0) == DiffOp.zero(ENV2)


@given(forms(ENV3), st.integers(0, 3))
def test_projector_picks_component(w, k):
    assert projector(ENV3, k)(w) == w.component(k)


@given(forms(ENV2), forms(ENV2))
def test_d_is_an_antiderivation(a, b):
    a = a.component(1)
    assert a.wedge(b).d() == a.d().wedge(b) - a.wedge(b.d())


@given(forms(ENV3))
def test_d_operator_matches_d(w):
    assert d_operator(ENV3)(w) == w.d()
    assert not w.d().d()


@given(ops(ENV2), ops(ENV2), forms(ENV2))
def test_composition_is_action_composition(a, b, w):
    # apply() never uses compose(), so this checks normal ordering independently
    assert (a @ b)(w) == a(b(w))


@given(ops(ENV2, 1, 1), ops(ENV2, 1, 1), ops(ENV2, 1, 1))
def test_composition_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@given(ops(ENV2), forms(ENV2), st.integers(0, 2), st.integers(0, 2))
def test_graded_block_acts_on_one_degree(a, w, k, l):
    blk = graded_block(a, k, l)
    out = blk(w)
    assert out == out.component(l)
    assert out == a(w.component(k)).component(l)
