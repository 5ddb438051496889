import random

import pytest

from omegadef.cocycles import ce_delta1, restrict
from omegadef.obstruction import (NOT_A_COBOUNDARY, TARGETS, ansatz_cochain,
                                  cells, enumerate_ansatz, field_pairs, nontriviality_report,
                                  probe_cell, probe_independence, random_ansatz_coeffs,
                                  round_trip)


def coefficient(op, key, mono):
    p = op.terms.get(key)
    return p.terms.get(mono, 0) if p is not None else 0


def recheck(verdict):
    """Replay the certificate with ce_delta1 on unit cochains, bypassing the assembler."""
    n, k = verdict.n, verdict.k
    basis = enumerate_ansatz(n, k, verdict.shift, verdict.jet_bound, verdict.order_bound)
    pairs = field_pairs(n, verdict.jet_bound)
    target = restrict(TARGETS[verdict.target], k)
    used = {p for p, *_ in verdict.certificate_keys}
    deltas = {}
    for e in range(len(basis)):
        b = ansatz_cochain(basis, {e: 1})
        for p in used:
            deltas[e, p] = ce_delta1(b, *pairs[p])
    for e in range(len(basis)):
        total = sum(y * coefficient(deltas[e, p], key, m)
                    for p, key, m, y in verdict.certificate_keys)
        assert total == 0, basis.entries[e].label()
    rhs = sum(y * coefficient(target(*pairs[p]), key, m)
              for p, key, m, y in verdict.certificate_keys)
    assert rhs != 0


def test_ansatz_sizes():
    assert len(enumerate_ansatz(2, 0, 1, 3, 2)) == 240
    assert len(enumerate_ansatz(2, 1, 1, 3, 2)) == 480
    assert len(enumerate_ansatz(2, 0, 2, 3, 2)) == 120
    assert len(enumerate_ansatz(3, 0, 3, 3, 2)) == 600
    assert len(enumerate_ansatz(2, 1, 2, 3, 2)) == 0
    with pytest.raises(ValueError):
        enumerate_ansatz(2, 3, 1, 3, 2)


def test_ansatz_operators_live_on_one_degree():
    basis = enumerate_ansatz(2, 1, 1, 1, 1)
    for op in basis.ops.values():
        assert op.shifts() == {1}


def test_cells():
    assert cells(2) == [("gamma1", 0), ("gamma1", 1), ("gamma2", 0), ("gamma2~", 0)]
    assert ("gamma3", 0) in cells(3)


def test_field_pairs_are_graded():
    pairs = field_pairs(2, 1)
    degs = [x.degree() + y.degree() for x, y in pairs]
    assert degs == sorted(degs)


@pytest.mark.parametrize("target,n,k", [("gamma1", 2, 0), ("gamma1", 2, 1), ("gamma2", 2, 0),
                                        ("gamma2~", 2, 0)])
def test_nontrivial_cells_n2(target, n, k):
    v = probe_cell(target, n, k, 3, 2)
    assert v.verdict == NOT_A_COBOUNDARY
    assert v.certificate_checked
    recheck(v)


def test_gamma1_certificate_row():
    v = probe_cell("gamma1", 2, 0, 3, 2)
    assert v.certificate == [("pair#43(x1*d1,x1^2*d1) xi[1,2]dx[-]dxi[2] @ 1", 1)]


@pytest.mark.slow
def test_nontrivial_gamma3_n3():
    v = probe_cell("gamma3", 3, 0, 3, 2)
    assert v.verdict == NOT_A_COBOUNDARY and v.certificate_checked
    recheck(v)


def test_independence_n2():
    v = probe_independence(2, 0, 3, 2)
    assert v.independent
    assert v.rank_augmented == v.rank_ansatz + 2


def test_independence_detects_a_repeated_class():
    v = probe_independence(2, 0, 2, 1, targets=("gamma2", "gamma2"))
    assert not v.independent


def test_report_small_bounds():
    rep = nontriviality_report(2, 1, 1)
    assert rep.all_nontrivial and rep.all_independent
    assert len(rep.cells) == 4


@pytest.mark.parametrize("n,k,shift", [(2, 0, 1), (2, 1, 1), (2, 0, 2)])
def test_coboundaries_are_recovered(n, k, shift):
    basis = enumerate_ansatz(n, k, shift, 2, 1)
    coeffs = random_ansatz_coeffs(basis, random.Random(n * 10 + k + shift), 3)
    pairs = field_pairs(n, 2)
    verdict, agree = round_trip(basis, coeffs, pairs[:60], pairs[60:80])
    assert verdict.consistent and agree

