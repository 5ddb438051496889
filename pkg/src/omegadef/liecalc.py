"""Polynomial vector fields: bracket, divergence and the Lie derivative on forms."""
from __future__ import annotations

import random
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

from .algebra import EnvMismatch, Poly, VarEnv
from .exterior import DiffOp, Form


class VectorField:
    """``X = sum_i X^i d/dx^i`` with polynomial components free of parameters."""

    __slots__ = ("env", "components", "label")

    def __init__(self, components: Sequence[Poly], label: str | None = None):
        components = tuple(components)
        if not components:
            raise ValueError("a vector field needs components")
        env = components[0].env
        if len(components) != env.n:
            raise ValueError(f"expected {env.n} components, got {len(components)}")
        for c in components:
            if c.env != env:
                raise EnvMismatch("components from different environments")
            if c.has_params():
                raise ValueError("vector field components may not contain deformation parameters")
        self.env = env
        self.components = components
        self.label = label

    @classmethod
    def zero(cls, env: VarEnv) -> "VectorField":
        return cls([Poly.zero(env)] * env.n)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField([-a for a in self.components])

    def __mul__(self, c):
        return VectorField([a * c for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __bool__(self):
        return any(self.components)

    def lift(self, env: VarEnv) -> "VectorField":
        if env == self.env:
            return self
        return VectorField([c.lift(env) for c in self.components], self.label)

    def derive(self, f: Poly) -> Poly:
        """``X(f) = X^i d_i f``."""
        out = Poly.zero(self.env)
        for i, c in enumerate(self.components):
            if c:
                df = f.diff(i)
                if df:
                    out = out + c * df
        return out

    def degree(self) -> int:
        return max(c.total_degree() for c in self.components)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.components) + "]"

    def __repr__(self):
        return f"VectorField({self})"


def bracket(x: VectorField, y: VectorField) -> VectorField:
    """``[X,Y]^i = X(Y^i) - Y(X^i)``."""
    if x.env != y.env:
        raise EnvMismatch("vector fields from different environments")
    return VectorField([x.derive(yi) - y.derive(xi) for xi, yi in zip(x.components, y.components)])


def divergence(x: VectorField) -> Poly:
    out = Poly.zero(x.env)
    for i, c in enumerate(x.components):
        out = out + c.diff(i)
    return out


def lie_derivative(x: VectorField) -> DiffOp:
    """``L_X = X^i dx_i + (d_j X^i) xi^j dxi_i``."""
    env = x.env
    terms = {}
    for i, c in enumerate(x.components):
        if c:
            beta = tuple(1 if j == i else 0 for j in range(env.n))
            terms[((), beta, ())] = c
    zero = (0,) * env.n
    for i, c in enumerate(x.components):
        for j in range(env.n):
            dc = c.diff(j)
            if not dc:
                continue
            if i == j:
                # xi^i dxi_i is already normal ordered with A = B = (i,)
                key = ((i,), zero, (i,))
            else:
                key = ((j,), zero, (i,))
            terms[key] = terms[key] + dc if key in terms else dc
    return DiffOp(env, terms)


def divergence_form(x: VectorField) -> Form:
    return Form.function(divergence(x))


# ---------------------------------------------------------------------------
# test families


def _multi_indices(n: int, degree: int) -> Iterator[tuple[int, ...]]:
    for combo in combinations_with_replacement(range(n), degree):
        alpha = [0] * n
        for i in combo:
            alpha[i] += 1
        yield tuple(alpha)


def multi_indices(n: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree ``<= max_degree``, graded."""
    return [a for d in range(max_degree + 1) for a in _multi_indices(n, d)]


def monomial_field(env: VarEnv, alpha: Sequence[int], i: int,
                   center: Sequence[int] | None = None) -> VectorField:
    """``(x - center)^alpha d/dx^i``."""
    if len(alpha) != env.n:
        raise ValueError("multi-index has wrong length")
    f = Poly.const(env, 1)
    for j, a in enumerate(alpha):
        base = Poly.x(env, j)
        if center is not None and center[j]:
            base = base - center[j]
        f = f * base ** a
    comps = [Poly.zero(env)] * env.n
    comps[i] = f
    mono = "*".join(f"x{j + 1}^{a}" if a > 1 else f"x{j + 1}"
                    for j, a in enumerate(alpha) if a) or "1"
    return VectorField(comps, label=f"{mono}*d{i + 1}")


def monomial_family(env: VarEnv, max_degree: int,
                    center: Sequence[int] | None = None) -> list[VectorField]:
    """Every ``x^alpha d_i`` with ``|alpha| <= max_degree``, in graded order."""
    return [monomial_field(env, alpha, i, center)
            for alpha in multi_indices(env.n, max_degree) for i in range(env.n)]


def random_field(env: VarEnv, rng: random.Random, max_degree: int = 3,
                 n_terms: int = 3, coeff_range: int = 5) -> VectorField:
    """Seeded random field: a few integer-coefficient monomials per component."""
    pool = multi_indices(env.n, max_degree)
    comps = []
    for _ in range(env.n):
        data = {}
        for _ in range(n_terms):
            alpha = rng.choice(pool)
            c = rng.randint(-coeff_range, coeff_range)
            data[alpha + (0,) * len(env.params)] = c
        comps.append(Poly.from_dict(env, data))
    return VectorField(comps)


def random_pairs(env: VarEnv, count: int, seed: int, max_degree: int = 3):
    rng = random.Random(seed)
    return [(random_field(env, rng, max_degree), random_field(env, rng, max_degree))
            for _ in range(count)]
