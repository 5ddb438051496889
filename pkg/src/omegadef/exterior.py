"""Differential forms in odd variables and normal-ordered differential operators.

A form is a finite sum ``f * xi^A`` with ``A`` a strictly increasing tuple of
(0-based) indices.  An operator is a finite sum of terms

    f * xi^A * dx^beta * dxi^B

kept in exactly that order.  Every sign in the package comes from three
primitives defined here: the sorting sign of ``xi`` products, the left
contraction ``dxi_i (xi^A)``, and the odd Leibniz rule used in
:func:`odd_reorder`.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping

from .algebra import EnvMismatch, Poly, VarEnv, format_poly, mul_into

XiMonomial = tuple  # strictly increasing tuple of ints
OpKey = tuple  # (A, beta, B)


# ---------------------------------------------------------------------------
# odd monomial bookkeeping


def xi_sort(indices: Iterable[int]) -> tuple[int, XiMonomial]:
    """Sort an odd monomial, returning ``(sign, sorted)``; sign 0 on a repeat."""
    seq = list(indices)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    # bubble sort keeps the parity count honest and monomials are short
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


@lru_cache(maxsize=None)
def xi_product(a: XiMonomial, b: XiMonomial) -> tuple[int, XiMonomial]:
    """``xi^a * xi^b`` as ``(sign, monomial)``."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    return xi_sort(a + b)


@lru_cache(maxsize=None)
def xi_contract(i: int, a: XiMonomial) -> tuple[int, XiMonomial]:
    """``dxi_i (xi^a)``: remove ``i`` with sign ``(-1)^pos`` (0-based position)."""
    try:
        pos = a.index(i)
    except ValueError:
        return 0, ()
    return (-1 if pos % 2 else 1), a[:pos] + a[pos + 1:]


@lru_cache(maxsize=None)
def xi_derive(b: XiMonomial, a: XiMonomial) -> tuple[int, XiMonomial]:
    """Action of ``dxi^b = dxi_{b1} ... dxi_{bm}`` on ``xi^a`` (rightmost first)."""
    sign, cur = 1, a
    for i in reversed(b):
        s, cur = xi_contract(i, cur)
        if not s:
            return 0, ()
        sign *= s
    return sign, cur


@lru_cache(maxsize=None)
def odd_reorder(b: XiMonomial, c: XiMonomial) -> tuple[tuple[int, XiMonomial, XiMonomial], ...]:
    """Normal order ``dxi^b o xi^c`` as a sum of ``sign * xi^c' dxi^b'``.

    Built by peeling ``dxi_{b1}`` off the left and using
    ``dxi_i o xi^C = dxi_i(xi^C) + (-1)^|C| xi^C o dxi_i``.
    """
    if not b:
        return ((1, c, ()),)
    if not c:
        return ((1, (), b),)
    first, rest = b[0], b[1:]
    acc: dict[tuple[XiMonomial, XiMonomial], int] = {}
    for s, c2, b2 in odd_reorder(rest, c):
        sc, c3 = xi_contract(first, c2)
        if sc:
            key = (c3, b2)
            acc[key] = acc.get(key, 0) + s * sc
        # b is sorted and b2 is a subset of rest, so first < min(b2)
        key = (c2, (first,) + b2)
        acc[key] = acc.get(key, 0) + s * (-1 if len(c2) % 2 else 1)
    return tuple(sorted((s, c2, b2) for (c2, b2), s in acc.items() if s))


@lru_cache(maxsize=None)
def _leibniz(beta: tuple[int, ...]):
    """Terms of ``dx^beta o g = sum binom * (dx^delta g) dx^(beta-delta)``."""
    out = []
    for delta in product(*(range(b + 1) for b in beta)):
        mult = 1
        for b, d in zip(beta, delta):
            mult *= comb(b, d)
        out.append((delta, mult, tuple(b - d for b, d in zip(beta, delta))))
    return tuple(out)


def _fmt_xi(a: XiMonomial) -> str:
    return "xi[" + ",".join(str(i + 1) for i in a) + "]"


# ---------------------------------------------------------------------------
# forms


class Form:
    """A differential form ``sum_A f_A xi^A`` with polynomial coefficients."""

    __slots__ = ("env", "terms")

    def __init__(self, env: VarEnv, terms: dict[XiMonomial, Poly] | None = None):
        self.env = env
        self.terms = {a: p for a, p in (terms or {}).items() if p}

    @classmethod
    def zero(cls, env: VarEnv) -> "Form":
        return cls(env)

    @classmethod
    def function(cls, f: Poly) -> "Form":
        return cls(f.env, {(): f})

    @classmethod
    def monomial(cls, env: VarEnv, indices: Iterable[int], coeff: Poly | None = None) -> "Form":
        """``coeff * xi^{i1} ... xi^{ik}`` in the given (possibly unsorted) order."""
        sign, a = xi_sort(indices)
        if coeff is None:
            coeff = Poly.const(env, 1)
        if not sign:
            return cls(env)
        return cls(env, {a: coeff * sign})

    def _check(self, other):
        if other.env != self.env:
            raise EnvMismatch("forms from different environments")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        terms = dict(self.terms)
        for a, p in other.terms.items():
            terms[a] = terms[a] + p if a in terms else p
        return Form(self.env, terms)

    def __neg__(self):
        return Form(self.env, {a: -p for a, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        """Multiply by an even scalar (Poly or rational)."""
        return Form(self.env, {a: p * c for a, p in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Form) and self.env == other.env and self.terms == other.terms

    def __hash__(self):
        return hash((self.env, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        acc: dict[XiMonomial, dict] = {}
        carry = self.env._carry
        for a, f in self.terms.items():
            for b, g in other.terms.items():
                s, c = xi_product(a, b)
                if s:
                    mul_into(acc.setdefault(c, {}), f.terms, g.terms, carry, s)
        return Form(self.env, {c: Poly(self.env, t) for c, t in acc.items()})

    __xor__ = wedge

    def d(self) -> "Form":
        """De Rham differential: ``d(f xi^A) = sum_i (d_i f) xi^i xi^A``."""
        out = Form(self.env)
        for a, f in self.terms.items():
            for i in range(self.env.n):
                df = f.diff(i)
                if df:
                    out = out + Form.monomial(self.env, (i,)).wedge(Form(self.env, {a: df}))
        return out

    def component(self, k: int) -> "Form":
        return Form(self.env, {a: p for a, p in self.terms.items() if len(a) == k})

    def degrees(self) -> set[int]:
        return {len(a) for a in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def lift(self, env: VarEnv) -> "Form":
        return Form(env, {a: p.lift(env) for a, p in self.terms.items()})

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"Form({format_form(self)!r})"


def format_form(w: Form) -> str:
    if not w.terms:
        return "0"
    parts = [f"({format_poly(w.terms[a])})*{_fmt_xi(a)}"
             for a in sorted(w.terms, key=lambda a: (len(a), a))]
    return " + ".join(parts)


def wedge(a: Form, b: Form) -> Form:
    return a.wedge(b)


def de_rham(a: Form) -> Form:
    return a.d()


# ---------------------------------------------------------------------------
# operators


class DiffOp:
    """Normal-ordered differential operator on forms.

    ``terms`` maps ``(A, beta, B)`` to a nonzero coefficient polynomial; the
    term acts as ``coeff * xi^A * dx^beta * dxi^B``.
    """

    __slots__ = ("env", "terms", "_hash")

    def __init__(self, env: VarEnv, terms: dict[OpKey, Poly] | None = None):
        self.env = env
        self.terms = {k: p for k, p in (terms or {}).items() if p}
        self._hash = None

    # construction

    @classmethod
    def zero(cls, env: VarEnv) -> "DiffOp":
        return cls(env)

    @classmethod
    def identity(cls, env: VarEnv) -> "DiffOp":
        return cls.mult(Poly.const(env, 1))

    @classmethod
    def mult(cls, f: Poly) -> "DiffOp":
        """Multiplication by a function."""
        return cls(f.env, {((), (0,) * f.env.n, ()): f})

    @classmethod
    def mult_form(cls, w: Form) -> "DiffOp":
        """Left exterior multiplication ``w ^ (.)``."""
        zero = (0,) * w.env.n
        return cls(w.env, {(a, zero, ()): p for a, p in w.terms.items()})

    @classmethod
    def term(cls, env: VarEnv, xi=(), dx=None, dxi=(), coeff: Poly | None = None) -> "DiffOp":
        """A single term; ``xi``/``dxi`` may be unsorted (sign is absorbed)."""
        s1, a = xi_sort(xi)
        s2, b = xi_sort(dxi)
        if coeff is None:
            coeff = Poly.const(env, 1)
        if not s1 * s2:
            return cls(env)
        dx = tuple(dx) if dx is not None else (0,) * env.n
        if len(dx) != env.n:
            raise ValueError("dx multi-index has wrong length")
        return cls(env, {(a, dx, b): coeff * (s1 * s2)})

    @classmethod
    def dx(cls, env: VarEnv, i: int) -> "DiffOp":
        beta = tuple(1 if j == i else 0 for j in range(env.n))
        return cls.term(env, dx=beta)

    @classmethod
    def xi(cls, env: VarEnv, i: int) -> "DiffOp":
        return cls.term(env, xi=(i,))

    @classmethod
    def dxi(cls, env: VarEnv, i: int) -> "DiffOp":
        return cls.term(env, dxi=(i,))

    # linear structure

    def _check(self, other: "DiffOp"):
        if other.env != self.env:
            raise EnvMismatch(f"operators from different environments: {self.env} vs {other.env}")

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check(other)
        terms = dict(self.terms)
        for k, p in other.terms.items():
            terms[k] = terms[k] + p if k in terms else p
        return DiffOp(self.env, terms)

    def __neg__(self):
        return DiffOp(self.env, {k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        """Scale by an even coefficient (a Poly or a rational)."""
        if isinstance(c, Poly) and c.env != self.env:
            raise EnvMismatch("coefficient from a different environment")
        return DiffOp(self.env, {k: p * c for k, p in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.env == other.env and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.env, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # algebra

    def compose(self, other: "DiffOp") -> "DiffOp":
        return compose(self, other)

    __matmul__ = compose

    def apply(self, w: Form) -> Form:
        return apply(self, w)

    __call__ = apply

    # grading

    def shifts(self) -> set[int]:
        return {len(a) - len(b) for a, _, b in self.terms}

    def shift_part(self, i: int) -> "DiffOp":
        return DiffOp(self.env, {k: p for k, p in self.terms.items() if len(k[0]) - len(k[2]) == i})

    def graded_block(self, k: int, l: int) -> "DiffOp":
        return graded_block(self, k, l)

    # coefficients

    def lift(self, env: VarEnv) -> "DiffOp":
        if env == self.env:
            return self
        return DiffOp(env, {k: p.lift(env) for k, p in self.terms.items()})

    def substitute(self, bindings: Mapping[str, object]) -> "DiffOp":
        return DiffOp(self.env, {k: p.substitute(bindings) for k, p in self.terms.items()})

    def map_coefficients(self, fn) -> "DiffOp":
        return DiffOp(self.env, {k: fn(p) for k, p in self.terms.items()})

    def param_degree(self) -> int:
        return max((p.param_degree() for p in self.terms.values()), default=-1)

    def __str__(self):
        return format_op(self)

    def __repr__(self):
        return f"DiffOp({format_op(self)!r})"


def _key_order(key: OpKey):
    a, beta, b = key
    return (len(a) - len(b), a, sum(beta), beta, b)


def format_op(op: DiffOp) -> str:
    if not op.terms:
        return "0"
    env = op.env
    parts = []
    for key in sorted(op.terms, key=_key_order):
        a, beta, b = key
        factors = [f"({format_poly(op.terms[key])})"]
        if a:
            factors.append(_fmt_xi(a))
        for i, e in enumerate(beta):
            if e:
                factors.append(f"d{env.spatial_vars[i]}" + (f"^{e}" if e > 1 else ""))
        if b:
            factors.append("d" + _fmt_xi(b))
        parts.append("*".join(factors))
    return " + ".join(parts)


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Normal-ordered product ``a o b``."""
    a._check(b)
    env = a.env
    carry = env._carry
    acc: dict[OpKey, dict] = {}
    derivs: dict[tuple, Poly] = {}
    for (A, beta, B), f in a.terms.items():
        leib = _leibniz(beta)
        ft = f.terms
        for bkey, g in b.terms.items():
            C, gamma, D = bkey
            reorder = odd_reorder(B, C)
            for delta, mult, rest in leib:
                if any(delta):
                    dk = (bkey, delta)
                    gd = derivs.get(dk)
                    if gd is None:
                        gd = derivs[dk] = g.diff_multi(delta)
                else:
                    gd = g
                if not gd.terms:
                    continue
                dx = tuple(r + c for r, c in zip(rest, gamma))
                for s1, C2, B2 in reorder:
                    s2, A2 = xi_product(A, C2)
                    if not s2:
                        continue
                    s3, B3 = xi_product(B2, D)
                    if not s3:
                        continue
                    key = (A2, dx, B3)
                    t = acc.get(key)
                    if t is None:
                        t = acc[key] = {}
                    mul_into(t, ft, gd.terms, carry, s1 * s2 * s3 * mult)
    return DiffOp(env, {k: Poly(env, t) for k, t in acc.items() if t})


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    """Ordinary commutator ``a o b - b o a``."""
    return compose(a, b) - compose(b, a)


def apply(op: DiffOp, w: Form) -> Form:
    """Act on a form: odd derivatives first, then ``dx^beta``, then ``coeff * xi^A``."""
    if op.env != w.env:
        raise EnvMismatch("operator and form from different environments")
    env = op.env
    carry = env._carry
    acc: dict[XiMonomial, dict] = {}
    for (A, beta, B), f in op.terms.items():
        for C, g in w.terms.items():
            s1, C2 = xi_derive(B, C)
            if not s1:
                continue
            s2, A2 = xi_product(A, C2)
            if not s2:
                continue
            gd = g.diff_multi(beta)
            if gd:
                mul_into(acc.setdefault(A2, {}), f.terms, gd.terms, carry, s1 * s2)
    return Form(env, {a: Poly(env, t) for a, t in acc.items()})


@lru_cache(maxsize=None)
def d_operator(env: VarEnv) -> DiffOp:
    """``d = sum_i xi^i dx_i``."""
    out = DiffOp.zero(env)
    for i in range(env.n):
        out = out + DiffOp.xi(env, i) @ DiffOp.dx(env, i)
    return out


@lru_cache(maxsize=None)
def number_operator(env: VarEnv, i: int) -> DiffOp:
    return DiffOp.xi(env, i) @ DiffOp.dxi(env, i)


@lru_cache(maxsize=None)
def projector(env: VarEnv, k: int) -> DiffOp:
    """Projection onto ``Omega^k`` as an operator.

    With ``N_S`` the product of the number operators ``xi^s dxi_s`` over
    ``s in S``, ``pi_k = sum_{|S|>=k} (-1)^(|S|-k) binom(|S|,k) N_S``.
    """
    if not 0 <= k <= env.n:
        raise ValueError(f"degree {k} outside 0..{env.n}")
    out = DiffOp.zero(env)
    for size in range(k, env.n + 1):
        c = (-1) ** (size - k) * comb(size, k)
        for s in combinations(range(env.n), size):
            ns = DiffOp.identity(env)
            for i in s:
                ns = ns @ number_operator(env, i)
            out = out + ns * c
    return out


def graded_block(op: DiffOp, k: int, l: int) -> DiffOp:
    """The ``Omega^k -> Omega^l`` block of ``op``, extended by zero elsewhere.

    Keeps the terms of shift ``l - k`` and composes with the projector onto
    ``Omega^k``, so the result vanishes on every other homogeneous degree.
    """
    n = op.env.n
    if not (0 <= k <= n and 0 <= l <= n):
        raise ValueError(f"block ({k}, {l}) outside 0..{n}")
    part = op.shift_part(l - k)
    part = DiffOp(op.env, {key: p for key, p in part.terms.items() if len(key[2]) <= k})
    if not part:
        return part
    return compose(part, projector(op.env, k))


def basis_forms(env: VarEnv, k: int) -> list[Form]:
    return [Form.monomial(env, a) for a in combinations(range(env.n), k)]
