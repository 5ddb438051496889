"""Sparse fraction-free Gaussian elimination over the integers.

Rows are added one at a time, so a caller can stop as soon as the system
turns inconsistent.  Every stored row carries the integer combination of
input rows that produced it; an inconsistency is reported with that
combination as a certificate ``y`` with ``y^T A = 0`` and ``y^T b != 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping

from gmpy2 import mpq


def integer_row(coeffs: Mapping[int, object], rhs=0) -> tuple[dict[int, int], int]:
    """Clear denominators of a rational row, returning integer entries."""
    vals = [mpq(v) for v in coeffs.values()] + [mpq(rhs)]
    den = 1
    for v in vals:
        den = lcm(den, int(v.denominator))
    row = {c: int(mpq(v) * den) for c, v in coeffs.items() if v}
    return row, int(mpq(rhs) * den)


@dataclass
class _Pivot:
    row: dict[int, int]
    rhs: int
    combo: dict[int, int]


def _content(row, rhs, combo) -> int:
    g = abs(rhs)
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    for v in combo.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class SparseEliminator:
    """Incremental row echelon form of ``A x = b``.

    Each pivot row has its leading column strictly smaller than every other
    column it touches, which keeps the reduction of a new row a single
    left-to-right sweep.
    """

    def __init__(self, ncols: int, track: bool = True):
        self.ncols = ncols
        self.track = track
        self.pivots: dict[int, _Pivot] = {}
        self.labels: list[Hashable] = []
        self.rows_seen = 0
        self.certificate: dict[int, int] | None = None

    @property
    def consistent(self) -> bool:
        return self.certificate is None

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Mapping[int, int], rhs: int = 0, label: Hashable = None) -> bool:
        """Add an integer row; returns ``False`` once the system is inconsistent."""
        rid = len(self.labels)
        self.labels.append(label)
        self.rows_seen += 1
        if self.certificate is not None:
            return False
        row = {c: v for c, v in row.items() if v}
        combo = {rid: 1} if self.track else {}
        pivots = self.pivots
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            c = min(hits)
            p = pivots[c]
            a, b = row[c], p.row[c]
            g = gcd(a, b)
            ma, mp = b // g, a // g
            new = {col: v * ma for col, v in row.items()}
            for col, v in p.row.items():
                w = new.get(col, 0) - v * mp
                if w:
                    new[col] = w
                else:
                    new.pop(col, None)
            rhs = rhs * ma - p.rhs * mp
            if self.track:
                nc = {r: v * ma for r, v in combo.items()}
                for r, v in p.combo.items():
                    w = nc.get(r, 0) - v * mp
                    if w:
                        nc[r] = w
                    else:
                        nc.pop(r, None)
                combo = nc
            row = new
            g = _content(row, rhs, combo)
            if g > 1:
                row = {col: v // g for col, v in row.items()}
                rhs //= g
                combo = {r: v // g for r, v in combo.items()}
        if not row:
            if rhs:
                self.certificate = combo if self.track else {}
                return False
            return True
        lead = min(row)
        if row[lead] < 0:
            row = {col: -v for col, v in row.items()}
            rhs = -rhs
            combo = {r: -v for r, v in combo.items()}
        pivots[lead] = _Pivot(row, rhs, combo)
        return True

    def pivot_columns(self) -> set[int]:
        return set(self.pivots)

    def solution(self) -> dict[int, mpq]:
        """One solution with every free variable set to zero."""
        if self.certificate is not None:
            raise ValueError("system is inconsistent")
        x: dict[int, mpq] = {}
        for c in sorted(self.pivots, reverse=True):
            p = self.pivots[c]
            acc = mpq(p.rhs)
            for col, v in p.row.items():
                if col != c and col in x:
                    acc -= v * x[col]
            val = acc / p.row[c]
            if val:
                x[c] = val
        return x

    def certificate_labels(self) -> list[tuple[Hashable, int]]:
        if self.certificate is None:
            return []
        return [(self.labels[r], v) for r, v in sorted(self.certificate.items())]


@dataclass
class LinearSystem:
    """Rows of ``A x = b`` with provenance labels; ``cols`` names the unknowns."""

    cols: list
    rows: list[dict[int, int]] = field(default_factory=list)
    rhs: list[int] = field(default_factory=list)
    labels: list = field(default_factory=list)

    def add(self, row: Mapping[int, object], rhs=0, label=None):
        r, b = integer_row(row, rhs)
        if not r and not b:
            return
        self.rows.append(r)
        self.rhs.append(b)
        self.labels.append(label)

    def __len__(self):
        return len(self.rows)


@dataclass
class Verdict:
    consistent: bool
    rank: int
    ncols: int
    solution: dict[int, mpq] | None = None
    certificate: list[tuple[Hashable, int]] | None = None
    certificate_rows: list[int] | None = None

    @property
    def kernel_dim(self) -> int:
        return self.ncols - self.rank


def solve(system: LinearSystem) -> Verdict:
    elim = SparseEliminator(len(system.cols))
    for i, (row, b) in enumerate(zip(system.rows, system.rhs)):
        if not elim.add(row, b, label=i):
            cert = elim.certificate_labels()
            return Verdict(False, elim.rank, elim.ncols,
                           certificate=[(system.labels[i], y) for i, y in cert],
                           certificate_rows=[(i, y) for i, y in cert])
    return Verdict(True, elim.rank, elim.ncols, solution=elim.solution())


def check_certificate(system: LinearSystem, cert_rows: Iterable[tuple[int, int]]) -> bool:
    """``sum y_r * row_r == 0`` and ``sum y_r * b_r != 0``."""
    acc: dict[int, int] = {}
    b = 0
    for r, y in cert_rows:
        for c, v in system.rows[r].items():
            acc[c] = acc.get(c, 0) + y * v
        b += y * system.rhs[r]
    return all(v == 0 for v in acc.values()) and b != 0
