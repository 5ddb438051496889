import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from omegadef.algebra import Poly, VarEnv
from omegadef.cocycles import GAMMA1, GAMMA2, ce_delta1
from omegadef.deformation import (EXAMPLE_NAMES, NotQuadratic, ParamAssignment, build_l1,
                                  decompose_op, defect, examples_for, express_in,
                                  family_lengths, is_identity, is_signed_diagonal,
                                  mc2_decompose, relations, solve_uniform, verify_example)
from omegadef.exterior import commutator, d_operator, graded_block
from omegadef.liecalc import monomial_field, random_pairs

from conftest import ENV2, ENV3, fields

WITNESS_X = monomial_field(ENV2, (2, 0), 0)
WITNESS_Y = monomial_field(ENV2, (0, 2), 1)


def witness_assignment():
    return ParamAssignment.from_lists(ENV2, [0, 1, 0], [0, 0], [0, 1], [0])


@pytest.mark.parametrize("n", range(2, 7))
def test_arity(n):
    t = ParamAssignment.symbolic(n)
    assert t.arity == 4 * n == sum(family_lengths(n).values())
    assert len(relations(t)) == 4 * n - 4


def test_arity_is_validated():
    with pytest.raises(ValueError, match="t0 needs 3 entries"):
        ParamAssignment.from_lists(ENV2, [0, 0], [0, 0], [0, 0], [0])


def test_parameters_must_be_constant():
    with pytest.raises(ValueError, match="spatial"):
        ParamAssignment.from_lists(ENV2, [Poly.x(ENV2, 0), 0, 0], [0, 0], [0, 0], [0])


def test_zero_assignment():
    t = ParamAssignment.zero(ENV2)
    assert relations(t).is_zero()
    assert not defect(WITNESS_X, WITNESS_Y, t)


def test_necessity_witness():
    t = witness_assignment()
    rels = relations(t)
    assert rels.r1 == (0, 1)
    assert all(not r for name, k, r in rels.labelled() if (name, k) != ("R1", 1))
    d = defect(WITNESS_X, WITNESS_Y, t)
    assert str(d) == "(-4*x1)*xi[1,2]*dxi[1] + (-4*x2)*xi[1,2]*dxi[2]"
    assert d == graded_block(GAMMA1(WITNESS_X, WITNESS_Y), 1, 2)


def test_symbolic_defect_is_quadratic():
    t = ParamAssignment.symbolic(2)
    d = defect(WITNESS_X, WITNESS_Y, t)
    assert d and all(set(p.homogeneous_param_parts()) == {2} for p in d.terms.values())


def test_non_linear_assignment_skips_the_quadratic_check():
    env = VarEnv(2, ("s",))
    s = Poly.var(env, "s")
    t = ParamAssignment.from_lists(env, [s * s, s, 0], [0, 0], [0, 0], [0])
    assert not t.is_linear()
    defect(WITNESS_X, WITNESS_Y, t)


def test_not_quadratic_is_an_assertion_error():
    assert issubclass(NotQuadratic, AssertionError)


@given(fields(ENV2), fields(ENV2))
def test_defect_is_the_bracket_of_first_order_terms(u, v):
    # with L1 a cocycle, the defect of a linear assignment is [L1(X), L1(Y)]
    t = ParamAssignment.symbolic(2)
    l1 = build_l1(t)
    assert defect(u, v, t) == commutator(l1(u.lift(t.env)), l1(v.lift(t.env)))


@given(fields(ENV2, 2), fields(ENV2, 2))
def test_first_order_term_is_a_cocycle(u, v):
    t = ParamAssignment.symbolic(2)
    assert not ce_delta1(build_l1(t), u.lift(t.env), v.lift(t.env))


def test_express_in():
    env = VarEnv(2, ("a", "b"))
    a, b = Poly.var(env, "a"), Poly.var(env, "b")
    assert express_in(a * 2 - b, [a, b]) == [2, -1]
    assert express_in(a * b, [a, b]) is None


def test_decompose_op_flags_dependent_bases():
    op = GAMMA1(WITNESS_X, WITNESS_Y)
    cs, res, independent = decompose_op(op, [op, op * 2])
    assert not independent and not res


@pytest.mark.parametrize("n", [2, 3])
def test_mc2_transfer_table(n):
    # computed table: shift 1 and 3 blocks carry exactly R1, R3; the shift-2
    # block carries (R2~ - R2) on gamma2 and R2 on gamma2~
    t = ParamAssignment.symbolic(n)
    used = 0
    for x, y in random_pairs(VarEnv(n), 3, seed=11):
        dec = mc2_decompose(x, y, t)
        if not dec.conclusive:
            continue
        used += 1
        assert not dec.residual
        table = dec.sign_table()
        assert is_identity(table[1])
        assert table[2] == [[-1, 1], [1, 0]]
        assert not is_signed_diagonal(table[2])
        if n == 3:
            assert is_identity(table[3])
    assert used


@pytest.mark.parametrize("n", [2, 3])
def test_shift2_block_in_the_left_right_basis(n):
    # against (gamma1 o d, d o gamma1) the shift-2 coefficients are (R2~, R2)
    t = ParamAssignment.symbolic(n)
    rels = relations(t)
    for x, y in random_pairs(VarEnv(n), 2, seed=3):
        d = defect(x, y, t)
        for k in range(n - 1):
            basis = [graded_block(g, k, k + 2).lift(t.env)
                     for g in (GAMMA2(x, y), d_operator(x.env) @ GAMMA1(x, y))]
            cs, res, independent = decompose_op(graded_block(d, k, k + 2), basis)
            assert independent and not res
            assert cs[0] == rels.r2_tilde[k] and cs[1] == rels.r2[k]


def test_signed_diagonal_helpers():
    assert is_identity([[mpq(1)]])
    assert is_signed_diagonal([[1, 0], [0, -1]])
    assert not is_identity([[1, 0], [0, -1]])
    assert not is_signed_diagonal(None)


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
@pytest.mark.parametrize("n", [2, 3])
def test_examples_are_integrable(name, n):
    for ex in examples_for(name, n):
        v = verify_example(ex, max_degree=2, random_count=3)
        assert v.relations_zero and v.defect_zero, v.witness


def test_planar_example_is_two_dimensional():
    assert examples_for("planar", 3) == []
    with pytest.raises(ValueError):
        examples_for("nope", 2)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_planar_family_stays_integrable_at_points(s0, s1, s2):
    ex = examples_for("planar", 2)[0]
    pt = ex.t.substitute({"s0": s0, "s1": s1, "s2": s2})
    assert relations(pt).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_uniform_components(n):
    sol = solve_uniform(n)
    names = [c.name for c in sol.components]
    assert names == ["densities", "dCd", "mixed"]
    assert [c.name for c in sol.flagged] == ["mixed"]
    plain = [c for c in sol.components if not c.alphas[1] and not c.alphas[2]]
    assert {c.known_example for c in plain} == {"densities", "dCd"}
    assert sol.r3_present == (n >= 3)


def test_uniform_solutions_really_solve():
    sol = solve_uniform(3)
    names = ("alpha0", "alpha1", "alpha1tilde", "alpha2")
    for c in sol.components:
        for r in sol.reduced_system:
            assert not r.substitute(dict(zip(names, c.alphas)))


def test_uniform_non_solution_is_detected():
    sol = solve_uniform(3)
    env = sol.env
    one = Poly.const(env, 1)
    bind = {"alpha0": one, "alpha1": one, "alpha1tilde": one, "alpha2": one}
    assert any(r.substitute(bind) for r in sol.reduced_system)


def test_mixed_family_defect_vanishes_n3():
    ex = examples_for("mixed", 3)[0]
    v = verify_example(ex, max_degree=2, random_count=2)
    assert v.passed


def test_symbolic_names():
    t = ParamAssignment.symbolic(3)
    assert t.env.params[:5] == ("t0_0", "t0_1", "t0_2", "t0_3", "t1_0")
    assert ParamAssignment.symbolic(3).env == ENV3.with_params(t.env.params)
