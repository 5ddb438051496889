"""Identity sweeps shared by the command line, the acceptance tests and scripts.

Every sweep returns :class:`IdentityResult` records whose failure entries
hold the fields in parseable form, so a failing check can be replayed alone.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .algebra import VarEnv
from .cocycles import (ONE_COCYCLES, TWO_COCYCLES, OneCochain, TwoCochain, ce_delta1,
                       ce_delta2, restrict, valid_degrees)
from .config import MC2Config, SweepConfig
from .deformation import ParamAssignment, is_identity, is_signed_diagonal, mc2_decompose
from .exterior import commutator, format_op
from .liecalc import (VectorField, bracket, lie_derivative, monomial_family, random_field,
                      random_pairs)
from .syntax import format_field

MAX_WITNESSES = 3


@dataclass
class IdentityResult:
    name: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    failure_count: int = 0

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def record(self, fields: Sequence[VectorField], value) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_WITNESSES:
            entry = {name: format_field(v) for name, v in zip("xyz", fields)}
            entry["value"] = format_op(value)
            self.failures.append(entry)

    def as_dict(self):
        return {"name": self.name, "checked": self.checked, "ok": self.ok,
                "failure_count": self.failure_count, "failures": self.failures}


def sample_pairs(env: VarEnv, cfg: SweepConfig) -> list[tuple[VectorField, VectorField]]:
    pairs = list(combinations(monomial_family(env, cfg.max_degree), 2))
    return pairs + random_pairs(env, cfg.trials, cfg.seed, cfg.random_degree)


def sample_triples(env: VarEnv, cfg: SweepConfig):
    """Unordered monomial triples (both sides are alternating) plus random triples."""
    triples = list(combinations(monomial_family(env, cfg.max_degree), 3))
    rng = random.Random(cfg.seed)
    triples += [tuple(random_field(env, rng, cfg.random_degree) for _ in range(3))
                for _ in range(cfg.trials)]
    return triples


def _sweep(name: str, fn: Callable, inputs) -> IdentityResult:
    res = IdentityResult(name)
    for args in inputs:
        res.checked += 1
        value = fn(*args)
        if value:
            res.record(args, value)
    return res


def representation_check(n: int, cfg: SweepConfig) -> IdentityResult:
    """``[L_X, L_Y] = L_[X,Y]``."""
    env = VarEnv(n)
    return _sweep("[L_X,L_Y] - L_[X,Y]",
                  lambda x, y: commutator(lie_derivative(x), lie_derivative(y))
                  - lie_derivative(bracket(x, y)),
                  sample_pairs(env, cfg))


def one_cochains(n: int) -> list[OneCochain]:
    out = list(ONE_COCYCLES)
    for c in ONE_COCYCLES:
        out.extend(restrict(c, k) for k in valid_degrees(n, c.shift))
    return out


def two_cochains(n: int) -> list[TwoCochain]:
    out = list(TWO_COCYCLES)
    for g in TWO_COCYCLES:
        out.extend(restrict(g, k) for k in valid_degrees(n, g.shift))
    return out


def one_cocycle_suite(n: int, cfg: SweepConfig) -> list[IdentityResult]:
    pairs = sample_pairs(VarEnv(n), cfg)
    return [_sweep(f"delta1({c.name})", lambda x, y, c=c: ce_delta1(c, x, y), pairs)
            for c in one_cochains(n)]


def two_cocycle_suite(n: int, cfg: SweepConfig) -> list[IdentityResult]:
    triples = sample_triples(VarEnv(n), cfg)
    return [_sweep(f"delta2({g.name})", lambda x, y, z, g=g: ce_delta2(g, x, y, z), triples)
            for g in two_cochains(n)]


def cocycle_suite(n: int, cfg: SweepConfig) -> list[IdentityResult]:
    return [representation_check(n, cfg)] + one_cocycle_suite(n, cfg) + two_cocycle_suite(n, cfg)


# ---------------------------------------------------------------------------
# second-order decomposition survey


def _matrix_str(m):
    return None if m is None else [[str(v) for v in row] for row in m]


@dataclass
class MC2Survey:
    n: int
    pairs: list[dict]
    degenerate_skipped: int
    tables: list[dict[int, list | None]]

    @property
    def enough_pairs(self) -> bool:
        return bool(self.pairs)

    @property
    def residual_zero(self) -> bool:
        return all(p["residual_zero"] for p in self.pairs)

    @property
    def table(self) -> dict[int, list | None] | None:
        """The common per-shift table, or None if it differs between pairs."""
        if not self.tables or any(t != self.tables[0] for t in self.tables):
            return None
        return self.tables[0]

    @property
    def pair_independent(self) -> bool:
        t = self.table
        return t is not None and all(m is not None for m in t.values())

    def verdicts(self) -> dict[int, str]:
        """Per shift: ``identity``, ``signed-diagonal`` or ``non-diagonal``."""
        out = {}
        for i, m in sorted((self.table or {}).items()):
            if is_identity(m):
                out[i] = "identity"
            elif is_signed_diagonal(m):
                out[i] = "signed-diagonal"
            else:
                out[i] = "non-diagonal"
        return out

    def as_dict(self):
        table = self.table
        return {
            "pairs_used": len(self.pairs),
            "degenerate_skipped": self.degenerate_skipped,
            "residual_zero": self.residual_zero,
            "pair_independent": self.pair_independent,
            "sign_table": None if table is None else
            {str(i): _matrix_str(m) for i, m in sorted(table.items())},
            "shift_verdicts": {str(i): v for i, v in self.verdicts().items()},
            "pairs": self.pairs,
        }


def mc2_survey(n: int, cfg: MC2Config) -> MC2Survey:
    """Decompose the symbolic-parameter defect on seeded random pairs.

    Pairs where some block basis is degenerate are skipped and resampled.
    """
    t = ParamAssignment.symbolic(n)
    env = VarEnv(n)
    rng = random.Random(cfg.seed)
    pairs, tables, skipped = [], [], 0
    attempts = 0
    while len(pairs) < cfg.pairs and attempts < cfg.max_attempts:
        attempts += 1
        x = random_field(env, rng, cfg.max_degree)
        y = random_field(env, rng, cfg.max_degree)
        dec = mc2_decompose(x, y, t)
        if not dec.conclusive:
            skipped += 1
            continue
        tables.append(dec.sign_table())
        coeffs = {f"{k},{i}": [str(c) for c in cs] for (k, i), cs in sorted(dec.coefficients.items())}
        pairs.append({"x": format_field(x), "y": format_field(y),
                      "residual_zero": not dec.residual,
                      "coefficients": coeffs})
    return MC2Survey(n, pairs, skipped, tables)
