"""Exact rational scalars and sparse multivariate polynomials.

Variables come in two sorts: spatial coordinates ``x1..xn`` (which may be
differentiated) and formal deformation parameters (which never are).  A
polynomial lives in exactly one :class:`VarEnv`; arithmetic between
different environments is refused, use :meth:`Poly.lift` to move a value
into a larger environment explicitly.

Monomials are stored packed into a single Python int, ``_BITS`` bits per
variable, so that monomial multiplication is integer addition.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from gmpy2 import mpq

Scalar = type(mpq(0))

_BITS = 16
_MASK = (1 << _BITS) - 1
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_SPATIAL = re.compile(r"x[0-9]+\Z")


def scalar(value) -> Scalar:
    """Coerce ints, Fractions, mpq and ``'p/q'`` strings to a reduced rational."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, (int, str)):
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class EnvMismatch(ValueError):
    pass


@dataclass(frozen=True)
class VarEnv:
    """Spatial dimension plus the ordered names of deformation parameters."""

    n: int
    params: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"spatial dimension must be an integer >= 2, got {self.n!r}")
        params = tuple(self.params)
        object.__setattr__(self, "params", params)
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        for p in params:
            if not _IDENT.match(p) or _SPATIAL.match(p) or p == "xi":
                raise ValueError(f"invalid parameter name {p!r}")

    @cached_property
    def spatial_vars(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.n))

    @cached_property
    def names(self) -> tuple[str, ...]:
        return self.spatial_vars + self.params

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def _carry(self) -> int:
        # top bit of every field; set after a product means an exponent overflowed
        return sum(1 << (_BITS * j + _BITS - 1) for j in range(len(self.names)))

    @cached_property
    def _spatial_mask(self) -> int:
        return (1 << (_BITS * self.n)) - 1

    @cached_property
    def spatial(self) -> "VarEnv":
        return VarEnv(self.n)

    def with_params(self, extra: Iterable[str]) -> "VarEnv":
        new = [p for p in extra if p not in self.params]
        return VarEnv(self.n, self.params + tuple(new))

    def extends(self, other: "VarEnv") -> bool:
        return self.n == other.n and set(other.params) <= set(self.params)

    def pack(self, exps: Iterable[int]) -> int:
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise ValueError("exponent vector has wrong length")
        m = 0
        for j, e in enumerate(exps):
            if e < 0 or e >= 1 << (_BITS - 1):
                raise OverflowError(f"exponent {e} out of range")
            m |= e << (_BITS * j)
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        return tuple((m >> (_BITS * j)) & _MASK for j in range(len(self.names)))

    def unit(self, j: int) -> int:
        return 1 << (_BITS * j)


def _monomial_key(env: VarEnv, m: int):
    exps = env.unpack(m)
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial with exact rational coefficients.

    ``terms`` maps packed monomials to nonzero ``mpq`` coefficients.  The
    constructor trusts its input; use the classmethods to build values.
    """

    __slots__ = ("env", "terms", "_hash")

    def __init__(self, env: VarEnv, terms: dict[int, Scalar] | None = None):
        self.env = env
        self.terms = terms if terms is not None else {}
        self._hash = None

    # construction

    @classmethod
    def zero(cls, env: VarEnv) -> "Poly":
        return cls(env, {})

    @classmethod
    def const(cls, env: VarEnv, c) -> "Poly":
        c = scalar(c)
        return cls(env, {0: c} if c else {})

    @classmethod
    def var(cls, env: VarEnv, name: str) -> "Poly":
        try:
            j = env.index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r} in environment {env.names}") from None
        return cls(env, {env.unit(j): mpq(1)})

    @classmethod
    def x(cls, env: VarEnv, i: int) -> "Poly":
        """Spatial coordinate ``x_{i+1}`` (0-based index)."""
        return cls(env, {env.unit(i): mpq(1)})

    @classmethod
    def from_dict(cls, env: VarEnv, data: Mapping[tuple[int, ...], object]) -> "Poly":
        terms: dict[int, Scalar] = {}
        for exps, c in data.items():
            c = scalar(c)
            if c:
                m = env.pack(exps)
                v = terms.get(m, 0) + c
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        return cls(env, terms)

    # inspection

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get(0, mpq(0))

    def items(self):
        """``(exponent tuple, coefficient)`` pairs in canonical order."""
        env = self.env
        for m in sorted(self.terms, key=lambda m: _monomial_key(env, m), reverse=True):
            yield env.unpack(m), self.terms[m]

    def total_degree(self) -> int:
        return max((sum(self.env.unpack(m)) for m in self.terms), default=-1)

    def param_degree(self) -> int:
        """Largest total degree in the parameter variables (-1 for zero)."""
        n = self.env.n
        return max((sum(self.env.unpack(m)[n:]) for m in self.terms), default=-1)

    def spatial_degree(self) -> int:
        n = self.env.n
        return max((sum(self.env.unpack(m)[:n]) for m in self.terms), default=-1)

    def variables(self) -> set[str]:
        used = 0
        for m in self.terms:
            used |= m
        names = self.env.names
        return {names[j] for j in range(len(names)) if (used >> (_BITS * j)) & _MASK}

    def has_params(self) -> bool:
        mask = self.env._spatial_mask
        return any(m & ~mask for m in self.terms)

    def has_spatial(self) -> bool:
        mask = self.env._spatial_mask
        return any(m & mask for m in self.terms)

    def split_params(self) -> dict[int, "Poly"]:
        """Group terms by their parameter part: ``{packed param monomial: x-polynomial}``."""
        mask = self.env._spatial_mask
        out: dict[int, dict[int, Scalar]] = {}
        for m, c in self.terms.items():
            out.setdefault(m & ~mask, {})[m & mask] = c
        return {pm: Poly(self.env, t) for pm, t in out.items()}

    def split_spatial(self) -> dict[int, "Poly"]:
        """Group terms by spatial monomial: ``{packed x monomial: parameter polynomial}``."""
        mask = self.env._spatial_mask
        out: dict[int, dict[int, Scalar]] = {}
        for m, c in self.terms.items():
            out.setdefault(m & mask, {})[m & ~mask] = c
        return {xm: Poly(self.env, t) for xm, t in out.items()}

    def homogeneous_param_parts(self) -> dict[int, "Poly"]:
        n = self.env.n
        out: dict[int, dict[int, Scalar]] = {}
        for m, c in self.terms.items():
            out.setdefault(sum(self.env.unpack(m)[n:]), {})[m] = c
        return {d: Poly(self.env, t) for d, t in out.items()}

    # arithmetic

    def _check(self, other: "Poly"):
        if other.env != self.env:
            raise EnvMismatch(f"polynomials from different environments: {self.env} vs {other.env}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.env, other)

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            self, other = other, self
        terms = dict(self.terms)
        for m, c in other.terms.items():
            v = terms.get(m)
            if v is None:
                terms[m] = c
            else:
                v = v + c
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return Poly(self.env, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.env, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = scalar(other)
            if not c:
                return Poly(self.env, {})
            return Poly(self.env, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        terms: dict[int, Scalar] = {}
        mul_into(terms, self.terms, other.terms, self.env._carry)
        return Poly(self.env, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.env, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.env == other.env and self.terms == other.terms
        try:
            c = scalar(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({0: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.env, frozenset(self.terms.items())))
        return self._hash

    # calculus

    def diff(self, i) -> "Poly":
        """Partial derivative in a spatial variable (0-based index or name)."""
        env = self.env
        if isinstance(i, str):
            j = env.index.get(i)
            if j is None:
                raise ValueError(f"unknown variable {i!r}")
            if j >= env.n:
                raise ValueError(f"cannot differentiate with respect to parameter {i!r}")
            i = j
        if not 0 <= i < env.n:
            raise ValueError(f"spatial index {i} out of range for n={env.n}")
        shift = _BITS * i
        unit = 1 << shift
        terms = {}
        for m, c in self.terms.items():
            e = (m >> shift) & _MASK
            if e:
                terms[m - unit] = c * e
        return Poly(env, terms)

    def diff_multi(self, beta: tuple[int, ...]) -> "Poly":
        p = self
        for i, b in enumerate(beta):
            for _ in range(b):
                if not p.terms:
                    return p
                p = p.diff(i)
        return p

    def substitute(self, bindings: Mapping[str, object]) -> "Poly":
        """Simultaneous substitution ``{name: Poly | scalar}``."""
        env = self.env
        if not bindings:
            return self
        idx = []
        for name, value in bindings.items():
            j = env.index.get(name)
            if j is None:
                raise ValueError(f"unknown variable {name!r}")
            if isinstance(value, Poly):
                self._check(value)
                if name in value.variables():
                    raise ValueError(f"binding for {name!r} mentions {name!r} itself")
            else:
                value = Poly.const(env, value)
            idx.append((j, value))
        powers: dict[tuple[int, int], Poly] = {}
        keep_mask = (1 << (_BITS * len(env.names))) - 1
        for j, _ in idx:
            keep_mask &= ~(_MASK << (_BITS * j))
        out = Poly.zero(env)
        for m, c in self.terms.items():
            term = Poly(env, {m & keep_mask: c})
            for j, value in idx:
                e = (m >> (_BITS * j)) & _MASK
                if e:
                    key = (j, e)
                    if key not in powers:
                        powers[key] = value ** e
                    term = term * powers[key]
            out = out + term
        return out

    def lift(self, env: VarEnv) -> "Poly":
        """Re-express this polynomial in an environment that contains ours."""
        if env == self.env:
            return self
        if not env.extends(self.env):
            raise EnvMismatch(f"{env} does not extend {self.env}")
        src = self.env
        moves = [(_BITS * j, _BITS * env.index[name]) for j, name in enumerate(src.names)]
        terms = {}
        for m, c in self.terms.items():
            new = 0
            for s, t in moves:
                new |= ((m >> s) & _MASK) << t
            terms[new] = c
        return Poly(env, terms)

    def restrict_env(self, env: VarEnv) -> "Poly":
        """Inverse of :meth:`lift`; fails if a dropped variable occurs."""
        if env == self.env:
            return self
        if not self.env.extends(env):
            raise EnvMismatch(f"{self.env} does not extend {env}")
        missing = self.variables() - set(env.names)
        if missing:
            raise EnvMismatch(f"variables {sorted(missing)} do not exist in {env}")
        exps = {}
        for e, c in self.items():
            exps[tuple(e[self.env.index[name]] for name in env.names)] = c
        return Poly.from_dict(env, exps)

    def evaluate(self, values: Mapping[str, object]) -> Scalar:
        """Value at a point; only variables that occur need a value."""
        missing = self.variables() - set(values)
        if missing:
            raise KeyError(f"no value for {sorted(missing)}")
        total = mpq(0)
        vals = [scalar(values.get(name, 0)) for name in self.env.names]
        for exps, c in self.items():
            t = c
            for v, e in zip(vals, exps):
                if e:
                    t *= v ** e
            total += t
        return total

    # printing

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def mul_into(acc: dict[int, Scalar], a: Mapping[int, Scalar], b: Mapping[int, Scalar],
             carry: int, scale=1) -> None:
    """``acc += scale * a * b`` on raw term dictionaries."""
    for ma, ca in a.items():
        if scale != 1:
            ca = ca * scale
        for mb, cb in b.items():
            m = ma + mb
            if m & carry:
                raise OverflowError("monomial exponent overflow")
            v = acc.get(m)
            if v is None:
                acc[m] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    acc[m] = v
                else:
                    del acc[m]


def add_into(acc: dict[int, Scalar], a: Mapping[int, Scalar], scale=1) -> None:
    for m, c in a.items():
        if scale != 1:
            c = c * scale
        v = acc.get(m)
        if v is None:
            acc[m] = c
        else:
            v = v + c
            if v:
                acc[m] = v
            else:
                del acc[m]


def _format_monomial(names: tuple[str, ...], exps: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text form: graded-lex descending, ``3/2*x1^2*t - x2``."""
    if not p.terms:
        return "0"
    names = p.env.names
    pieces = []
    for exps, c in p.items():
        mono = _format_monomial(names, exps)
        if not mono:
            text = str(c)
        elif c == 1:
            text = mono
        elif c == -1:
            text = "-" + mono
        else:
            text = f"{c}*{mono}"
        if not pieces:
            pieces.append(text)
        elif text.startswith("-"):
            pieces.append(" - " + text[1:])
        else:
            pieces.append(" + " + text)
    return "".join(pieces)
