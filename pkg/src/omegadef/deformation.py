"""First-order deformations of the Lie derivative and their integrability.

The deformed action is ``L_X + sum t * C^k(X)`` over the 4n restricted
1-cocycles.  Its homomorphism defect is computed exactly, split into the
blocks ``Omega^k -> Omega^(k+i)``, and each block is matched against the
obstruction 2-cocycles and the quadratic relations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

from .algebra import Poly, VarEnv
from .cocycles import (OneCochain, c0, c1, c1_tilde, c2, gamma1, gamma2, gamma2_tilde,
                       gamma3)
from .exterior import DiffOp, commutator, graded_block
from .liecalc import (VectorField, bracket, lie_derivative, monomial_family,
                      random_pairs)
from .linsolve import SparseEliminator, integer_row

FAMILIES = ("t0", "t1", "t1tilde", "t2")


def family_lengths(n: int) -> dict[str, int]:
    return {"t0": n + 1, "t1": n, "t1tilde": n, "t2": n - 1}


@dataclass(frozen=True)
class ParamAssignment:
    """Values of the 4n deformation parameters, as parameter polynomials."""

    env: VarEnv
    t0: tuple[Poly, ...]
    t1: tuple[Poly, ...]
    t1_tilde: tuple[Poly, ...]
    t2: tuple[Poly, ...]

    def __post_init__(self):
        n = self.env.n
        for name, vals in zip(FAMILIES, self.families()):
            want = family_lengths(n)[name]
            if len(vals) != want:
                raise ValueError(f"{name} needs {want} entries for n={n}, got {len(vals)}")
            for k, v in enumerate(vals):
                if v.env != self.env:
                    raise ValueError(f"{name}[{k}] lives in a different environment")
                if v.has_spatial():
                    raise ValueError(f"{name}[{k}] = {v} depends on spatial variables")

    def families(self) -> tuple[tuple[Poly, ...], ...]:
        return (self.t0, self.t1, self.t1_tilde, self.t2)

    @property
    def arity(self) -> int:
        return sum(len(f) for f in self.families())

    def entries(self):
        for name, vals in zip(FAMILIES, self.families()):
            for k, v in enumerate(vals):
                yield name, k, v

    def as_dict(self) -> dict[str, list[str]]:
        return {name: [str(v) for v in vals] for name, vals in zip(FAMILIES, self.families())}

    def is_linear(self) -> bool:
        """Every entry is zero or homogeneous of degree one in the parameters."""
        return all(set(v.homogeneous_param_parts()) <= {1} for _, _, v in self.entries())

    def substitute(self, bindings) -> "ParamAssignment":
        return ParamAssignment(self.env, *(tuple(v.substitute(bindings) for v in f)
                                           for f in self.families()))

    @classmethod
    def from_lists(cls, env: VarEnv, t0, t1, t1_tilde, t2) -> "ParamAssignment":
        def conv(vals):
            return tuple(v if isinstance(v, Poly) else Poly.const(env, v) for v in vals)
        return cls(env, conv(t0), conv(t1), conv(t1_tilde), conv(t2))

    @classmethod
    def zero(cls, env: VarEnv) -> "ParamAssignment":
        lens = family_lengths(env.n)
        return cls.from_lists(env, *([0] * lens[f] for f in FAMILIES))

    @classmethod
    def symbolic(cls, n: int) -> "ParamAssignment":
        """All 4n entries independent: ``t0_k``, ``t1_k``, ``tt1_k``, ``t2_k``."""
        lens = family_lengths(n)
        prefixes = {"t0": "t0_", "t1": "t1_", "t1tilde": "tt1_", "t2": "t2_"}
        names = [f"{prefixes[f]}{k}" for f in FAMILIES for k in range(lens[f])]
        env = VarEnv(n, tuple(names))
        vals = [tuple(Poly.var(env, f"{prefixes[f]}{k}") for k in range(lens[f]))
                for f in FAMILIES]
        return cls(env, *vals)

    @classmethod
    def uniform(cls, env: VarEnv, a0, a1, a1t, a2) -> "ParamAssignment":
        """``t0^k = a0``, ``t1^k = a1``, ``t1~^k = a1t``, ``t2^k = a2`` for every k."""
        lens = family_lengths(env.n)
        return cls.from_lists(env, [a0] * lens["t0"], [a1] * lens["t1"],
                              [a1t] * lens["t1tilde"], [a2] * lens["t2"])


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class RelationSet:
    r1: tuple[Poly, ...]
    r2: tuple[Poly, ...]
    r2_tilde: tuple[Poly, ...]
    r3: tuple[Poly, ...]

    def labelled(self) -> list[tuple[str, int, Poly]]:
        out = []
        for name, vals in (("R1", self.r1), ("R2", self.r2), ("R2~", self.r2_tilde),
                           ("R3", self.r3)):
            out.extend((name, k, v) for k, v in enumerate(vals))
        return out

    def __len__(self):
        return len(self.r1) + len(self.r2) + len(self.r2_tilde) + len(self.r3)

    def is_zero(self) -> bool:
        return not any(v for _, _, v in self.labelled())

    def block(self, k: int, shift: int) -> tuple[Poly, ...]:
        """Relations multiplying the obstructions of block ``(k, shift)``."""
        if shift == 1:
            return (self.r1[k],)
        if shift == 2:
            return (self.r2[k], self.r2_tilde[k])
        if shift == 3:
            return (self.r3[k],)
        raise ValueError(f"no relations for shift {shift}")


def relations(t: ParamAssignment) -> RelationSet:
    n = t.env.n
    t0, t1, tt, t2 = t.families()
    return RelationSet(
        tuple(t0[k] * tt[k] + t0[k + 1] * t1[k] for k in range(n)),
        tuple(t0[k] * t2[k] + t1[k + 1] * t1[k] for k in range(n - 1)),
        tuple(t0[k + 2] * t2[k] + tt[k + 1] * tt[k] for k in range(n - 1)),
        tuple(t1[k + 2] * t2[k] + tt[k] * t2[k + 1] for k in range(n - 2)),
    )


# ---------------------------------------------------------------------------
# the deformed action


def _lift(x: VectorField, env: VarEnv) -> VectorField:
    return x.lift(env) if x.env != env else x


def first_order_term(x: VectorField, t: ParamAssignment) -> DiffOp:
    env = t.env
    x = _lift(x, env)
    n = env.n
    out = DiffOp.zero(env)
    for fn, shift, coeffs in ((c0, 0, t.t0), (c1, 1, t.t1), (c1_tilde, 1, t.t1_tilde),
                              (c2, 2, t.t2)):
        if not any(coeffs):
            continue
        full = fn(x)
        if not full:
            continue
        for k in range(n - shift + 1):
            if coeffs[k]:
                out = out + graded_block(full, k, k + shift) * coeffs[k]
    return out


def build_l1(t: ParamAssignment) -> OneCochain:
    """``sum t0^k C0^k + t1^k C1^k + t1~^k C1~^k + t2^k C2^k``."""
    return OneCochain("L1", lambda x: first_order_term(x, t))


def deformed_action(x: VectorField, t: ParamAssignment) -> DiffOp:
    x = _lift(x, t.env)
    return lie_derivative(x) + first_order_term(x, t)


class NotQuadratic(AssertionError):
    pass


def defect(x: VectorField, y: VectorField, t: ParamAssignment, check: bool = True) -> DiffOp:
    """``[calL_X, calL_Y] - calL_[X,Y]``.

    For an assignment linear in the parameters the result must be purely
    quadratic; with ``check`` this is verified and a violation raises.
    """
    x, y = _lift(x, t.env), _lift(y, t.env)
    out = (commutator(deformed_action(x, t), deformed_action(y, t))
           - deformed_action(bracket(x, y), t))
    if check and t.is_linear():
        for p in out.terms.values():
            if set(p.homogeneous_param_parts()) - {2}:
                raise NotQuadratic(f"defect has a non-quadratic coefficient {p}")
    return out


# ---------------------------------------------------------------------------
# blockwise decomposition against the obstruction cocycles


BLOCK_BASIS = {
    1: (("gamma1", gamma1),),
    2: (("gamma2", gamma2), ("gamma2~", gamma2_tilde)),
    3: (("gamma3", gamma3),),
}


def blocks(n: int) -> list[tuple[int, int]]:
    """``(k, shift)`` cells carrying relations: shift i for k = 0..n-i."""
    return [(k, i) for i in (1, 2, 3) for k in range(n - i + 1)]


def _rows_of(op: DiffOp):
    """``{(op key, x-monomial): parameter polynomial}``."""
    out = {}
    for key, p in op.terms.items():
        for xm, q in p.split_spatial().items():
            out[(key, xm)] = q
    return out


def decompose_op(target: DiffOp, basis: Sequence[DiffOp]):
    """Write ``target = sum c_j basis_j + residual`` with ``c_j`` parameter polynomials.

    The basis operators must be parameter-free.  Returns
    ``(coefficients, residual, independent)``; when the basis is linearly
    dependent the coefficients are not unique and ``independent`` is False.
    """
    env = target.env
    brows = [_rows_of(b) for b in basis]
    trows = _rows_of(target)
    keys = set(trows)
    for r in brows:
        keys |= set(r)
    keys = sorted(keys, key=repr)
    mat = {key: {j: r[key].constant_term() for j, r in enumerate(brows) if key in r}
           for key in keys}

    probe = SparseEliminator(len(basis), track=False)
    for key in keys:
        probe.add(integer_row(mat[key])[0])
    independent = probe.rank == len(basis)

    by_pm: dict[int, dict] = {}
    for key, q in trows.items():
        for pm, c in q.terms.items():
            by_pm.setdefault(pm, {})[key] = c
    coeff_terms = [dict() for _ in basis]
    for pm in sorted(by_pm):
        rhs = by_pm[pm]
        elim = SparseEliminator(len(basis), track=False)
        for key in keys:
            row, b = integer_row(mat[key], rhs.get(key, 0))
            if not elim.add(row, b):
                break
        if not elim.consistent:
            continue
        for j, v in elim.solution().items():
            coeff_terms[j][pm] = v
    coeffs = [Poly(env, t) for t in coeff_terms]
    residual = target
    for c, b in zip(coeffs, basis):
        if c:
            residual = residual - b * c
    return coeffs, residual, independent


def express_in(target: Poly, gens: Sequence[Poly]) -> list[mpq] | None:
    """Constants ``m`` with ``target == sum m_r gens_r``, or None."""
    keys = set(target.terms)
    for g in gens:
        keys |= set(g.terms)
    elim = SparseEliminator(len(gens), track=False)
    for key in sorted(keys):
        row, b = integer_row({r: g.terms[key] for r, g in enumerate(gens) if key in g.terms},
                             target.terms.get(key, 0))
        if not elim.add(row, b):
            return None
    sol = elim.solution()
    return [sol.get(r, mpq(0)) for r in range(len(gens))]


@dataclass
class MC2Decomposition:
    x: VectorField
    y: VectorField
    coefficients: dict[tuple[int, int], tuple[Poly, ...]]
    residual: DiffOp
    degenerate: list[tuple[int, int]]
    transfer: dict[tuple[int, int], list[list[mpq]] | None] = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return not self.degenerate

    def sign_table(self) -> dict[int, list[list[mpq]] | None]:
        """Per shift, the transfer matrix if it is the same on every k."""
        out: dict[int, list[list[mpq]] | None] = {}
        for (k, i), m in sorted(self.transfer.items()):
            if i not in out:
                out[i] = m
            elif out[i] != m:
                out[i] = None
        return out


def mc2_decompose(x: VectorField, y: VectorField, t: ParamAssignment,
                  defect_op: DiffOp | None = None) -> MC2Decomposition:
    """Split the defect into ``coefficient * gamma^k_i(X,Y)`` per block.

    ``transfer[(k, i)]`` is the constant matrix ``M`` with
    ``coefficients = M . relations(t).block(k, i)``; it is None when no such
    constant matrix exists.  The expected decomposition is ``M = I``.
    """
    env = t.env
    n = env.n
    xs = _spatial(x)
    ys = _spatial(y)
    D = defect_op if defect_op is not None else defect(x, y, t)
    rels = relations(t)
    coeffs, degenerate, transfer = {}, [], {}
    residual = D
    for k, i in blocks(n):
        block = graded_block(D, k, k + i)
        basis = [graded_block(g(xs, ys), k, k + i).lift(env) for _, g in BLOCK_BASIS[i]]
        cs, _, independent = decompose_op(block, basis)
        if not independent:
            degenerate.append((k, i))
        coeffs[(k, i)] = tuple(cs)
        for c, b in zip(cs, basis):
            if c:
                residual = residual - b * c
        gens = rels.block(k, i)
        m = []
        for c in cs:
            row = express_in(c, gens)
            if row is None:
                m = None
                break
            m.append(row)
        transfer[(k, i)] = m
    return MC2Decomposition(x, y, coeffs, residual, degenerate, transfer)


def _spatial(x: VectorField) -> VectorField:
    if not x.env.params:
        return x
    return VectorField([c.restrict_env(x.env.spatial) for c in x.components], x.label)


def is_identity(m) -> bool:
    return m is not None and all(
        v == (1 if r == c else 0) for r, row in enumerate(m) for c, v in enumerate(row))


def is_signed_diagonal(m) -> bool:
    return m is not None and all(
        (abs(v) == 1) if r == c else v == 0 for r, row in enumerate(m) for c, v in enumerate(row))


# ---------------------------------------------------------------------------
# test families and sweeps


def pair_family(env: VarEnv, max_degree: int = 3, random_count: int = 0, seed: int = 0,
               random_degree: int = 4) -> list[tuple[VectorField, VectorField]]:
    """Unordered distinct monomial pairs plus seeded random pairs."""
    fam = monomial_family(env, max_degree)
    pairs = list(combinations(fam, 2))
    if random_count:
        pairs += random_pairs(env, random_count, seed, random_degree)
    return pairs


def defect_vanishes(t: ParamAssignment, pairs: Iterable[tuple[VectorField, VectorField]]):
    """First pair with a nonzero defect, or None."""
    for x, y in pairs:
        if defect(x, y, t, check=False):
            return (x, y)
    return None


# ---------------------------------------------------------------------------
# uniform one-parameter system


@dataclass
class UniformComponent:
    name: str
    alphas: tuple[Poly, Poly, Poly, Poly]
    conditions: str
    known_example: str | None
    flagged: bool

    def as_dict(self):
        return {"name": self.name,
                "alpha": dict(zip(("alpha0", "alpha1", "alpha1tilde", "alpha2"),
                                  (str(a) for a in self.alphas))),
                "conditions": self.conditions,
                "known_example": self.known_example,
                "flag": "DISCREPANCY" if self.flagged else None}


@dataclass
class UniformSolution:
    n: int
    env: VarEnv
    reduced_system: list[Poly]
    components: list[UniformComponent]
    r3_present: bool

    @property
    def flagged(self) -> list[UniformComponent]:
        return [c for c in self.components if c.flagged]


def uniform_system(n: int):
    """Relations after ``t_*^k = alpha_* * s`` for every k, divided by ``s^2``."""
    env = VarEnv(n, ("alpha0", "alpha1", "alpha1tilde", "alpha2", "a"))
    a0, a1, a1t, a2 = (Poly.var(env, v) for v in env.params[:4])
    t = ParamAssignment.uniform(env, a0, a1, a1t, a2)
    rels = relations(t)
    distinct = []
    for _, _, r in rels.labelled():
        if r not in distinct:
            distinct.append(r)
    return env, t, distinct


def solve_uniform(n: int) -> UniformSolution:
    """Nonzero solutions of the uniform system up to overall scale.

    Case split: either ``alpha0 != 0`` (scale it to 1) or ``alpha0 = 0``.
      * alpha0 = 1: R1 forces alpha1~ = -alpha1, then R2 forces
        alpha2 = -alpha1^2, after which R2~ and R3 vanish identically.
        alpha1 = 0 gives (1,0,0,0); alpha1 = a != 0 gives (1,a,-a,-a^2).
      * alpha0 = 0: R2 and R2~ force alpha1 = alpha1~ = 0, R1 and R3 then
        vanish and alpha2 is free; scale it to 1.
    Every component is re-substituted into the full relation set.
    """
    env, t, system = uniform_system(n)
    one, zero = Poly.const(env, 1), Poly.zero(env)
    a = Poly.var(env, "a")
    comps = [
        UniformComponent("densities", (one, zero, zero, zero), "alpha0 != 0, alpha1 = 0",
                         "densities", False),
        UniformComponent("dCd", (zero, zero, zero, one), "alpha0 = 0", "dCd", False),
        UniformComponent("mixed", (one, a, -a, -(a * a)), "alpha0 != 0, alpha1 = a != 0",
                         None, True),
    ]
    names = ("alpha0", "alpha1", "alpha1tilde", "alpha2")
    for c in comps:
        bind = dict(zip(names, c.alphas))
        for r in system:
            if r.substitute(bind):
                raise AssertionError(f"component {c.name} does not solve {r}")
    return UniformSolution(n, env, system, comps, r3_present=n >= 3)


# ---------------------------------------------------------------------------
# closed-form integrable families


@dataclass
class Example:
    name: str
    t: ParamAssignment
    description: str


def example_densities(n: int) -> Example:
    env = VarEnv(n, ("t",))
    s = Poly.var(env, "t")
    return Example("densities", ParamAssignment.uniform(env, s, 0, 0, 0),
                   "L_X + t*C0(X): tensor densities")


def example_dcd(n: int) -> Example:
    env = VarEnv(n, ("t",))
    s = Poly.var(env, "t")
    return Example("dCd", ParamAssignment.uniform(env, 0, 0, 0, s), "L_X + t*C2(X)")


def example_planar() -> Example:
    env = VarEnv(2, ("s0", "s1", "s2"))
    t02, t10, tt11 = (Poly.var(env, v) for v in env.params)
    z = 0
    t = ParamAssignment.from_lists(env, [z, z, t02], [t10, z], [-t02, tt11], [tt11])
    return Example("planar", t, "t0^2(C0^2 - C1~^0) + t1^0 C1^0 + t1~^1(C1~^1 + C2^0), n = 2")


def example_mixed(n: int) -> Example:
    env = VarEnv(n, ("t", "a"))
    s, a = Poly.var(env, "t"), Poly.var(env, "a")
    return Example("mixed", ParamAssignment.uniform(env, s, s * a, -(s * a), -(s * a * a)),
                   "t*(C0 + a*C1 - a*C1~ - a^2*C2)")


EXAMPLE_NAMES = ("densities", "dCd", "planar", "mixed")


def examples_for(which: str, n: int) -> list[Example]:
    """Named examples for ``R^n``; ``planar`` exists only for n = 2."""
    table = {
        "densities": lambda: [example_densities(n)],
        "dCd": lambda: [example_dcd(n)],
        "planar": lambda: [example_planar()] if n == 2 else [],
        "mixed": lambda: [example_mixed(n)],
    }
    if which == "all":
        return [e for key in EXAMPLE_NAMES for e in table[key]()]
    if which not in table:
        raise ValueError(f"unknown example {which!r}; choose from {sorted(table)} or 'all'")
    return table[which]()


@dataclass
class ExampleVerdict:
    name: str
    n: int
    relations_zero: bool
    defect_zero: bool
    pairs_checked: int
    witness: tuple[str, str] | None

    @property
    def passed(self) -> bool:
        return self.relations_zero and self.defect_zero


def verify_example(ex: Example, max_degree: int = 3, random_count: int = 10, seed: int = 0,
                   random_degree: int = 4) -> ExampleVerdict:
    t = ex.t
    rel_zero = relations(t).is_zero()
    pairs = pair_family(t.env.spatial, max_degree, random_count, seed, random_degree)
    bad = defect_vanishes(t, pairs)
    witness = None if bad is None else (str(bad[0]), str(bad[1]))
    return ExampleVerdict(ex.name, t.env.n, rel_zero, bad is None, len(pairs), witness)


def example_gallery(ns: Sequence[int] = (2, 3), max_degree: int = 3, random_count: int = 10,
                    seed: int = 0) -> list[ExampleVerdict]:
    out = []
    for n in ns:
        for ex in examples_for("all", n):
            out.append(verify_example(ex, max_degree, random_count, seed))
    return out
