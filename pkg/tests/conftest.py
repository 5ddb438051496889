from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from omegadef.algebra import Poly, VarEnv
from omegadef.exterior import DiffOp, Form
from omegadef.liecalc import VectorField

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ENV2 = VarEnv(2)
ENV3 = VarEnv(3)
ENV2P = VarEnv(2, ("s", "t"))

coeffs = st.one_of(st.integers(-6, 6),
                   st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)))


def _trim(e, max_deg):
    out, left = [], max_deg
    for v in e:
        v = min(v, left)
        out.append(v)
        left -= v
    return tuple(out)


def exponents(env: VarEnv, max_deg: int, width: int | None = None):
    width = width or env.n + len(env.params)
    return st.lists(st.integers(0, max_deg), min_size=width, max_size=width).map(
        lambda e: _trim(e, max_deg))


def polys(env: VarEnv, max_deg: int = 3, max_terms: int = 4):
    return st.dictionaries(exponents(env, max_deg), coeffs, max_size=max_terms).map(
        lambda d: Poly.from_dict(env, d))


def spatial_polys(env: VarEnv, max_deg: int = 3, max_terms: int = 3):
    pad = (0,) * len(env.params)
    spatial = exponents(env, max_deg, env.n).map(lambda e: e + pad)
    return st.dictionaries(spatial, coeffs, max_size=max_terms).map(
        lambda d: Poly.from_dict(env, d))


def fields(env: VarEnv, max_deg: int = 3):
    return st.lists(spatial_polys(env, max_deg), min_size=env.n, max_size=env.n).map(VectorField)


def xi_sets(n: int):
    return st.sets(st.integers(0, n - 1), max_size=n).map(lambda s: tuple(sorted(s)))


def forms(env: VarEnv, max_deg: int = 2):
    return st.dictionaries(xi_sets(env.n), polys(env, max_deg, 3), max_size=4).map(
        lambda d: sum((Form.monomial(env, a, p) for a, p in d.items()), Form.zero(env)))


def ops(env: VarEnv, max_deg: int = 2, max_order: int = 2):
    beta = exponents(env, max_order, env.n)
    key = st.tuples(xi_sets(env.n), beta, xi_sets(env.n))
    return st.dictionaries(key, spatial_polys(env, max_deg, 2), max_size=3).map(
        lambda d: sum((DiffOp.term(env, a, b, c, p) for (a, b, c), p in d.items()),
                      DiffOp.zero(env)))


# acceptance lines are collected here and echoed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
