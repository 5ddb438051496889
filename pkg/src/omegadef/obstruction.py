"""Bounded-order coboundary probing for the obstruction 2-cocycles.

Unknown: a 1-cochain ``b`` with constant coefficients,

    b(X) = sum c_e * (d^alpha X^l) * xi^A dx^J dxi^B  o  pi_k,

over all jets ``|alpha| <= S_max``, derivative orders ``|J| <= U_max`` and
odd data with ``|A| - |B| = shift``.  The identity ``delta(b) = gamma`` is
evaluated on pairs of monomial fields and matched coefficient by
coefficient, giving an exact linear system in the ``c_e``.  Inconsistency
on any subset of pairs already rules out every ``b`` inside the bounds.

Constant coefficients are an explicit hypothesis of the probe, not
something it proves.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .algebra import Poly, VarEnv
from .cocycles import (GAMMA1, GAMMA2, GAMMA2_TILDE, GAMMA3, OneCochain, TwoCochain,
                       ce_delta1)
from .exterior import DiffOp, commutator, projector
from .liecalc import VectorField, bracket, lie_derivative, monomial_family, multi_indices
from .linsolve import LinearSystem, SparseEliminator, Verdict, check_certificate, integer_row, solve

NOT_A_COBOUNDARY = "NOT-A-COBOUNDARY"
COBOUNDARY_FOUND = "COBOUNDARY-FOUND"

TARGETS = {
    "gamma1": GAMMA1,
    "gamma2": GAMMA2,
    "gamma2~": GAMMA2_TILDE,
    "gamma3": GAMMA3,
}


@dataclass(frozen=True)
class AnsatzEntry:
    jet: tuple[int, ...]
    component: int
    xi: tuple[int, ...]
    dx: tuple[int, ...]
    dxi: tuple[int, ...]

    @property
    def op_key(self):
        return (self.xi, self.dx, self.dxi)

    def label(self) -> str:
        jet = "".join(str(i + 1) * a for i, a in enumerate(self.jet)) or "-"
        dx = "".join(str(i + 1) * a for i, a in enumerate(self.dx)) or "-"
        xi = ",".join(str(i + 1) for i in self.xi)
        dxi = ",".join(str(i + 1) for i in self.dxi)
        return f"D[{jet}]X^{self.component + 1}*xi[{xi}]*dx[{dx}]*dxi[{dxi}]"

    def jet_of(self, x: VectorField) -> Poly:
        return x.components[self.component].diff_multi(self.jet)


@dataclass
class AnsatzBasis:
    n: int
    k: int
    shift: int
    jet_bound: int
    order_bound: int
    entries: list[AnsatzEntry]
    ops: dict[tuple, DiffOp]

    def __len__(self):
        return len(self.entries)


def _odd_pairs(n: int, k: int, shift: int):
    out = []
    for nb in range(0, k + 1):
        na = nb + shift
        if na > n or na < 0:
            continue
        for a in combinations(range(n), na):
            for b in combinations(range(n), nb):
                out.append((a, b))
    return out


def enumerate_ansatz(n: int, k: int, shift: int, jet_bound: int, order_bound: int) -> AnsatzBasis:
    """Every constant-coefficient entry within the bounds (jets of order 0 and 1 included)."""
    if not 0 <= k <= n:
        raise ValueError(f"source degree {k} outside 0..{n}")
    if jet_bound < 0 or order_bound < 0:
        raise ValueError("bounds must be >= 0")
    env = VarEnv(n)
    entries: list[AnsatzEntry] = []
    ops: dict[tuple, DiffOp] = {}
    if shift > n or k + shift > n:
        return AnsatzBasis(n, k, shift, jet_bound, order_bound, entries, ops)
    pi = projector(env, k)
    op_keys = []
    for beta in multi_indices(n, order_bound):
        for a, b in _odd_pairs(n, k, shift):
            op = DiffOp.term(env, xi=a, dx=beta, dxi=b) @ pi
            if op:
                ops[(a, beta, b)] = op
                op_keys.append((a, beta, b))
    for alpha in multi_indices(n, jet_bound):
        for comp in range(n):
            for a, beta, b in op_keys:
                entries.append(AnsatzEntry(alpha, comp, a, beta, b))
    return AnsatzBasis(n, k, shift, jet_bound, order_bound, entries, ops)


def ansatz_cochain(basis: AnsatzBasis, coeffs: dict[int, object]) -> OneCochain:
    """The 1-cochain ``sum coeffs[e] * entry_e``."""
    def fn(x: VectorField) -> DiffOp:
        out = DiffOp.zero(x.env)
        for e, c in coeffs.items():
            entry = basis.entries[e]
            j = entry.jet_of(x)
            if j:
                out = out + basis.ops[entry.op_key] * (j * c)
        return out
    return OneCochain("b", fn, basis.shift)


# ---------------------------------------------------------------------------
# assembling the linear system


def field_pairs(n: int, jet_bound: int, center: Sequence[int] | None = None):
    """Unordered monomial pairs with degree ``<= jet_bound + 2``, lowest total degree first.

    Both sides of ``delta(b) = gamma`` are antisymmetric in (X, Y), so the
    ordered pairs would only repeat rows up to sign.
    """
    env = VarEnv(n)
    fam = monomial_family(env, jet_bound + 2, center)
    degs = [_deg(f) for f in fam]
    idx = sorted(combinations(range(len(fam)), 2), key=lambda p: (degs[p[0]] + degs[p[1]], p))
    return [(fam[i], fam[j]) for i, j in idx]


def _deg(x: VectorField) -> int:
    return max(c.total_degree() for c in x.components)


class _Cache:
    def __init__(self, basis: AnsatzBasis):
        self.basis = basis
        self.lie: dict[VectorField, DiffOp] = {}
        self.comm: dict[tuple, DiffOp] = {}

    def lie_of(self, x: VectorField) -> DiffOp:
        op = self.lie.get(x)
        if op is None:
            op = self.lie[x] = lie_derivative(x)
        return op

    def comm_of(self, x: VectorField, key) -> DiffOp:
        ck = (x, key)
        op = self.comm.get(ck)
        if op is None:
            op = self.comm[ck] = commutator(self.lie_of(x), self.basis.ops[key])
        return op


def _pair_rows(basis: AnsatzBasis, cache: _Cache, x: VectorField, y: VectorField,
               extra: Sequence[DiffOp] = ()):
    """``{(op key, x-monomial): {column: coefficient}}`` for one pair.

    Columns are ansatz entries, followed by one column per ``extra``
    operator entering with a minus sign.
    """
    rows: dict[tuple, dict[int, mpq]] = {}

    def put(col: int, op: DiffOp, scale: Poly | None):
        for key, p in op.terms.items():
            q = p * scale if scale is not None else p
            for m, c in q.terms.items():
                r = rows.setdefault((key, m), {})
                v = r.get(col, 0) + c
                if v:
                    r[col] = v
                else:
                    r.pop(col, None)

    xy = bracket(x, y)
    jets = {}
    for e, entry in enumerate(basis.entries):
        jk = (entry.jet, entry.component)
        if jk not in jets:
            jets[jk] = (entry.jet_of(x), entry.jet_of(y), entry.jet_of(xy))
        jx, jy, jxy = jets[jk]
        if not (jx or jy or jxy):
            continue
        key = entry.op_key
        o = basis.ops[key]
        coeff = x.derive(jy) - y.derive(jx) - jxy
        if coeff:
            put(e, o, coeff)
        if jy:
            put(e, cache.comm_of(x, key), jy)
        if jx:
            put(e, cache.comm_of(y, key), -jx)
    base = len(basis.entries)
    for j, op in enumerate(extra):
        put(base + j, op, Poly.const(op.env, -1))
    return rows


def _row_label(pair_idx: int, x: VectorField, y: VectorField, rowkey) -> str:
    (a, beta, b), m = rowkey
    env = x.env
    mono = Poly(env, {m: mpq(1)})
    dx = "".join(str(i + 1) * e for i, e in enumerate(beta)) or "-"
    return (f"pair#{pair_idx}({x.label or x},{y.label or y}) "
            f"xi[{','.join(str(i + 1) for i in a)}]dx[{dx}]dxi[{','.join(str(i + 1) for i in b)}]"
            f" @ {mono}")


def assemble(target: Callable[[VectorField, VectorField], DiffOp], basis: AnsatzBasis,
             pairs: Sequence[tuple[VectorField, VectorField]]) -> LinearSystem:
    """The full system ``delta(b)(X,Y) = target(X,Y)`` over ``pairs``."""
    system = LinearSystem(cols=[e.label() for e in basis.entries])
    cache = _Cache(basis)
    for p, (x, y) in enumerate(pairs):
        rows = _pair_rows(basis, cache, x, y)
        tgt = target(x, y)
        rhs = {}
        for key, poly in tgt.terms.items():
            for m, c in poly.terms.items():
                rhs[(key, m)] = c
        for rk in sorted(set(rows) | set(rhs), key=repr):
            system.add(rows.get(rk, {}), rhs.get(rk, 0), _row_label(p, x, y, rk))
    return system


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class CellVerdict:
    target: str
    n: int
    k: int
    shift: int
    jet_bound: int
    order_bound: int
    verdict: str
    unknowns: int
    pairs_used: int
    pairs_available: int
    rows: int
    rank: int
    certificate: list[tuple[str, int]] = field(default_factory=list)
    certificate_checked: bool = False
    solution: dict[str, str] | None = None
    # (pair index, operator key, packed x-monomial, multiplier) per certificate row
    certificate_keys: list[tuple] = field(default_factory=list)

    def as_dict(self):
        return {
            "target": f"{self.target}^{self.k}",
            "n": self.n, "k": self.k, "shift": self.shift,
            "bounds": {"jet": self.jet_bound, "order": self.order_bound},
            "hypothesis": "constant-coefficient cochain ansatz",
            "verdict": self.verdict,
            "unknowns": self.unknowns,
            "pairs_used": self.pairs_used,
            "pairs_available": self.pairs_available,
            "rows": self.rows,
            "rank": self.rank,
            "certificate_checked": self.certificate_checked,
            "certificate": [{"row": r, "multiplier": str(y)} for r, y in self.certificate],
            "solution": self.solution,
        }


def probe_cell(target_name: str, n: int, k: int, jet_bound: int = 3, order_bound: int = 2,
               center: Sequence[int] | None = None, max_pairs: int | None = None) -> CellVerdict:
    """Decide whether ``target^k`` is ``delta`` of a cochain within the bounds.

    Pairs are fed lowest degree first and elimination stops at the first
    inconsistency, whose certificate is then re-checked against the stored
    rows.
    """
    g = TARGETS[target_name]
    shift = g.shift
    basis = enumerate_ansatz(n, k, shift, jet_bound, order_bound)
    pairs = field_pairs(n, jet_bound, center)
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    target = g.restrict(k)
    system = LinearSystem(cols=[e.label() for e in basis.entries])
    elim = SparseEliminator(len(basis))
    cache = _Cache(basis)
    used = 0
    for p, (x, y) in enumerate(pairs):
        used += 1
        rows = _pair_rows(basis, cache, x, y)
        tgt = target(x, y)
        rhs = {}
        for key, poly in tgt.terms.items():
            for m, c in poly.terms.items():
                rhs[(key, m)] = c
        for rk in sorted(set(rows) | set(rhs), key=repr):
            before = len(system)
            system.add(rows.get(rk, {}), rhs.get(rk, 0), (p, x, y, rk))
            if len(system) == before:
                continue
            elim.add(system.rows[-1], system.rhs[-1], label=before)
            if not elim.consistent:
                break
        if not elim.consistent:
            break
    common = dict(target=target_name, n=n, k=k, shift=shift, jet_bound=jet_bound,
                  order_bound=order_bound, unknowns=len(basis), pairs_used=used,
                  pairs_available=len(pairs), rows=len(system), rank=elim.rank)
    if not elim.consistent:
        cert_rows = [(r, y) for r, y in elim.certificate_labels()]
        ok = check_certificate(system, cert_rows)
        cert = [(_row_label(*system.labels[r]), y) for r, y in cert_rows]
        keys = [(system.labels[r][0], *system.labels[r][3], y) for r, y in cert_rows]
        return CellVerdict(verdict=NOT_A_COBOUNDARY, certificate=cert, certificate_checked=ok,
                           certificate_keys=keys, **common)
    sol = elim.solution()
    return CellVerdict(verdict=COBOUNDARY_FOUND,
                       solution={basis.entries[c].label(): str(v) for c, v in sorted(sol.items())},
                       **common)


@dataclass
class IndependenceVerdict:
    n: int
    k: int
    jet_bound: int
    order_bound: int
    independent: bool
    pairs_used: int
    rank_ansatz: int
    rank_augmented: int

    def as_dict(self):
        return {"n": self.n, "k": self.k, "cells": ["gamma2", "gamma2~"],
                "bounds": {"jet": self.jet_bound, "order": self.order_bound},
                "hypothesis": "constant-coefficient cochain ansatz",
                "only_trivial_combination": self.independent,
                "pairs_used": self.pairs_used,
                "rank_ansatz": self.rank_ansatz, "rank_augmented": self.rank_augmented}


def probe_independence(n: int, k: int, jet_bound: int = 3, order_bound: int = 2,
                       targets: Sequence[str] = ("gamma2", "gamma2~"),
                       max_pairs: int | None = None) -> IndependenceVerdict:
    """Is ``sum c_j target_j^k = delta(b)`` solvable only with every ``c_j = 0``?

    The ``c_j`` are appended as the last columns of a homogeneous system;
    with that column order the classes are independent modulo coboundaries
    exactly when every appended column becomes a pivot.
    """
    shift = TARGETS[targets[0]].shift
    gs = [TARGETS[t].restrict(k) for t in targets]
    basis = enumerate_ansatz(n, k, shift, jet_bound, order_bound)
    pairs = field_pairs(n, jet_bound)
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    base = len(basis)
    want = set(range(base, base + len(gs)))
    elim = SparseEliminator(base + len(gs), track=False)
    cache = _Cache(basis)
    used = 0
    for x, y in pairs:
        used += 1
        rows = _pair_rows(basis, cache, x, y, extra=[g(x, y) for g in gs])
        for rk in sorted(rows, key=repr):
            row, _ = integer_row(rows[rk])
            if row:
                elim.add(row)
        if want <= elim.pivot_columns():
            break
    pivots = elim.pivot_columns()
    extra_pivots = len(want & pivots)
    return IndependenceVerdict(n, k, jet_bound, order_bound, want <= pivots, used,
                               elim.rank - extra_pivots, elim.rank)


def cells(n: int) -> list[tuple[str, int]]:
    """The obstruction cells ``(target, k)`` over their stated ranges."""
    out = [("gamma1", k) for k in range(n)]
    out += [(g, k) for k in range(n - 1) for g in ("gamma2", "gamma2~")]
    out += [("gamma3", k) for k in range(n - 2)]
    return out


@dataclass
class NontrivialityReport:
    n: int
    jet_bound: int
    order_bound: int
    cells: list[CellVerdict]
    independence: list[IndependenceVerdict]

    @property
    def all_nontrivial(self) -> bool:
        return all(c.verdict == NOT_A_COBOUNDARY and c.certificate_checked for c in self.cells)

    @property
    def all_independent(self) -> bool:
        return all(v.independent for v in self.independence)


def nontriviality_report(n: int, jet_bound: int = 3, order_bound: int = 2,
                         only: Iterable[tuple[str, int]] | None = None) -> NontrivialityReport:
    todo = list(only) if only is not None else cells(n)
    verdicts = [probe_cell(t, n, k, jet_bound, order_bound) for t, k in todo]
    ks = sorted({k for t, k in todo if TARGETS[t].shift == 2})
    indep = [probe_independence(n, k, jet_bound, order_bound) for k in ks]
    return NontrivialityReport(n, jet_bound, order_bound, verdicts, indep)


# ---------------------------------------------------------------------------
# round trip


def random_ansatz_coeffs(basis: AnsatzBasis, rng: random.Random, count: int = 3) -> dict[int, int]:
    picks = rng.sample(range(len(basis)), min(count, len(basis)))
    return {e: rng.choice([-3, -2, -1, 1, 2, 3]) for e in picks}


def round_trip(basis: AnsatzBasis, coeffs: dict[int, object],
               train: Sequence[tuple[VectorField, VectorField]],
               held_out: Sequence[tuple[VectorField, VectorField]]) -> tuple[Verdict, bool]:
    """Solve ``delta(b) = delta(b0)`` on ``train`` and compare on ``held_out``."""
    b0 = ansatz_cochain(basis, coeffs)
    target = TwoCochain("delta(b0)", lambda x, y: ce_delta1(b0, x, y), basis.shift)
    system = assemble(target, basis, train)
    verdict = solve(system)
    if not verdict.consistent:
        return verdict, False
    b = ansatz_cochain(basis, verdict.solution)
    agree = all(ce_delta1(b, x, y) == ce_delta1(b0, x, y) for x, y in held_out)
    return verdict, agree
