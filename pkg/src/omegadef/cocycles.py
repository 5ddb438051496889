"""Cochains of vector fields with values in operators on forms.

The four 1-cocycles built from the divergence, the four obstruction
2-cocycles, their restrictions to a fixed source degree, the
Chevalley-Eilenberg differentials in degrees 1 and 2 and the cup product.
Cochains are small callables; nothing is tabulated.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .algebra import Poly
from .exterior import DiffOp, Form, commutator, d_operator, graded_block
from .liecalc import VectorField, bracket, divergence, lie_derivative


@dataclass(frozen=True)
class OneCochain:
    """Linear map ``Vect -> D(Omega)``; ``shift`` is its form-degree shift if pure."""

    name: str
    fn: Callable[[VectorField], DiffOp]
    shift: int | None = None

    def __call__(self, x: VectorField) -> DiffOp:
        return self.fn(x)

    def __add__(self, other: "OneCochain") -> "OneCochain":
        shift = self.shift if self.shift == other.shift else None
        return OneCochain(f"({self.name} + {other.name})", lambda x: self(x) + other(x), shift)

    def __sub__(self, other: "OneCochain") -> "OneCochain":
        return self + other.scale(-1)

    def scale(self, c) -> "OneCochain":
        """Multiply by a constant or a parameter polynomial."""
        def fn(x):
            if isinstance(c, Poly):
                return self(x).lift(c.env) * c
            return self(x) * c
        return OneCochain(f"{c}*{self.name}", fn, self.shift)

    def restrict(self, k: int) -> "OneCochain":
        return restrict(self, k)


@dataclass(frozen=True)
class TwoCochain:
    """Skew bilinear map ``Vect x Vect -> D(Omega)``."""

    name: str
    fn: Callable[[VectorField, VectorField], DiffOp]
    shift: int | None = None

    def __call__(self, x: VectorField, y: VectorField) -> DiffOp:
        return self.fn(x, y)

    def __add__(self, other: "TwoCochain") -> "TwoCochain":
        shift = self.shift if self.shift == other.shift else None
        return TwoCochain(f"({self.name} + {other.name})",
                          lambda x, y: self(x, y) + other(x, y), shift)

    def scale(self, c) -> "TwoCochain":
        return TwoCochain(f"{c}*{self.name}", lambda x, y: self(x, y) * c, self.shift)

    def restrict(self, k: int) -> "TwoCochain":
        return restrict(self, k)


# ---------------------------------------------------------------------------
# the 1-cocycles


def c0(x: VectorField) -> DiffOp:
    return DiffOp.mult(divergence(x))


def c1(x: VectorField) -> DiffOp:
    return d_operator(x.env) @ DiffOp.mult(divergence(x))


def c1_tilde(x: VectorField) -> DiffOp:
    return DiffOp.mult(divergence(x)) @ d_operator(x.env)


def c2(x: VectorField) -> DiffOp:
    d = d_operator(x.env)
    return d @ DiffOp.mult(divergence(x)) @ d


C0 = OneCochain("C0", c0, 0)
C1 = OneCochain("C1", c1, 1)
C1_TILDE = OneCochain("C1~", c1_tilde, 1)
C2 = OneCochain("C2", c2, 2)
ONE_COCYCLES = (C0, C1, C1_TILDE, C2)


# ---------------------------------------------------------------------------
# the obstruction 2-cocycles


def _div_one_form(x: VectorField, y: VectorField) -> Form:
    """``Div X d(Div Y) - Div Y d(Div X)``."""
    dx, dy = divergence(x), divergence(y)
    return Form.function(dy).d() * dx - Form.function(dx).d() * dy


def _div_two_form(x: VectorField, y: VectorField) -> Form:
    """``d Div X ^ d Div Y - d Div Y ^ d Div X``."""
    a = Form.function(divergence(x)).d()
    b = Form.function(divergence(y)).d()
    return a.wedge(b) - b.wedge(a)


def gamma1(x: VectorField, y: VectorField) -> DiffOp:
    return DiffOp.mult_form(_div_one_form(x, y))


def gamma2(x: VectorField, y: VectorField) -> DiffOp:
    return DiffOp.mult_form(_div_one_form(x, y)) @ d_operator(x.env)


def gamma2_tilde(x: VectorField, y: VectorField) -> DiffOp:
    return DiffOp.mult_form(_div_two_form(x, y))


def gamma3(x: VectorField, y: VectorField) -> DiffOp:
    return DiffOp.mult_form(_div_two_form(x, y)) @ d_operator(x.env)


GAMMA1 = TwoCochain("gamma1", gamma1, 1)
GAMMA2 = TwoCochain("gamma2", gamma2, 2)
GAMMA2_TILDE = TwoCochain("gamma2~", gamma2_tilde, 2)
GAMMA3 = TwoCochain("gamma3", gamma3, 3)
TWO_COCYCLES = (GAMMA1, GAMMA2, GAMMA2_TILDE, GAMMA3)


# ---------------------------------------------------------------------------
# restriction to a source degree


def valid_degrees(n: int, shift: int) -> range:
    """Source degrees ``k`` whose target ``k + shift`` is still a form degree."""
    return range(0, n - shift + 1)


def restrict(c, k: int):
    """Restrict a cochain of definite shift to ``Omega^k``.

    Accepts ``0 <= k <= n``; above ``n - shift`` the target degree does not
    exist and the zero cochain is returned.
    """
    if c.shift is None:
        raise ValueError(f"cochain {c.name} has no definite degree shift")
    shift = c.shift
    name = f"{c.name}^{k}"

    def check(env):
        if not 0 <= k <= env.n:
            raise ValueError(
                f"degree {k} out of range for {c.name} on R^{env.n}: "
                f"valid source degrees are {list(valid_degrees(env.n, shift))}")
        return k + shift <= env.n

    if isinstance(c, OneCochain):
        def fn1(x):
            if not check(x.env):
                return DiffOp.zero(x.env)
            return graded_block(c(x), k, k + shift)
        return OneCochain(name, fn1, shift)

    def fn2(x, y):
        if not check(x.env):
            return DiffOp.zero(x.env)
        return graded_block(c(x, y), k, k + shift)
    return TwoCochain(name, fn2, shift)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg differentials and the cup product


def ce_delta1(c: OneCochain, x: VectorField, y: VectorField) -> DiffOp:
    """``[L_X, c(Y)] - [L_Y, c(X)] - c([X,Y])``."""
    cx, cy = c(x), c(y)
    lx, ly = lie_derivative(x).lift(cy.env), lie_derivative(y).lift(cx.env)
    return commutator(lx, cy) - commutator(ly, cx) - c(bracket(x, y))


def ce_delta2(g: TwoCochain, x: VectorField, y: VectorField, z: VectorField) -> DiffOp:
    """``[L_X,g(Y,Z)] - [L_Y,g(X,Z)] + [L_Z,g(X,Y)]
    - g([X,Y],Z) + g([X,Z],Y) - g([Y,Z],X)``."""
    gyz, gxz, gxy = g(y, z), g(x, z), g(x, y)
    env = gyz.env
    lx, ly, lz = (lie_derivative(v).lift(env) for v in (x, y, z))
    return (commutator(lx, gyz) - commutator(ly, gxz) + commutator(lz, gxy)
            - g(bracket(x, y), z) + g(bracket(x, z), y) - g(bracket(y, z), x))


def coboundary(b: OneCochain) -> TwoCochain:
    """``delta b`` as a 2-cochain."""
    return TwoCochain(f"delta({b.name})", lambda x, y: ce_delta1(b, x, y),
                      b.shift)


def cup(a: OneCochain, b: OneCochain, x: VectorField, y: VectorField) -> DiffOp:
    """``[a(X), b(Y)] + [b(X), a(Y)]``."""
    return commutator(a(x), b(y)) + commutator(b(x), a(y))
