from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import connected_graphs, flat_graph
from twoended import electric as E
from twoended.errors import KCLViolationError, NotConnectedError, PreconditionError
from twoended.graph import expand


def square():
    return flat_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def test_four_cycle_current():
    g = square()
    p, q = (0, 0), (0, 1)
    f = E.unit_current(g, p, q)
    assert f(p, q) == Fraction(3, 4)
    assert f(p, (0, 3)) == f((0, 3), (0, 2)) == f((0, 2), q) == Fraction(1, 4)
    assert f(q, p) == -Fraction(3, 4)
    u = E.ohm_dual_vertex(f, (0, 0), Fraction(7, 8))
    assert [u[v] for v in g.vertices] == [Fraction(7, 8), Fraction(1, 8), Fraction(3, 8), Fraction(5, 8)]


def test_float_matches_exact_on_square():
    g = square()
    fe = E.unit_current(g, (0, 0), (0, 2), E.NumericMode.EXACT)
    ff = E.unit_current(g, (0, 0), (0, 2), "float")
    assert ff.meta["solver_residual"] < E.SOLVER_TOL
    assert all(abs(fe.values[e] - ff.values[e]) < 1e-12 for e in fe.values)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.data())
def test_unit_current_laws(g, data):
    p, q = data.draw(st.lists(st.sampled_from(g.vertices), min_size=2, max_size=2, unique=True))
    f = E.unit_current(g, p, q)
    assert E.net_out(f, p) == 1 and E.net_out(f, q) == -1
    assert E.knl_residual(f, {p, q}) == 0
    assert E.kcl_residual(f) == 0
    assert f.max_abs() <= 1
    ff = E.unit_current(g, p, q, E.NumericMode.FLOAT)
    assert max(abs(float(f.values[e]) - ff.values[e]) for e in f.values) <= E.CROSS_MODE_TOL


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.data())
def test_ohm_duality_roundtrip(g, data):
    vals = data.draw(st.lists(st.fractions(-10, 10, max_denominator=20), min_size=len(g), max_size=len(g)))
    u = E.VertexField(g, dict(zip(g.vertices, vals)))
    o = g.vertices[0]
    back = E.ohm_dual_vertex(E.ohm_dual_edge(u), o, u[o])
    assert back.values == u.values


def test_kcl_violation_reports_cycle():
    g = square()
    f = E.EdgeField.from_function(g, lambda a, b: Fraction(1))
    with pytest.raises(KCLViolationError) as exc:
        E.ohm_dual_vertex(f, (0, 0))
    assert len(exc.value.cycle) >= 3
    assert E.kcl_residual(f) != 0


def test_preconditions():
    g = square()
    with pytest.raises(PreconditionError):
        E.unit_current(g, (0, 0), (0, 0))
    with pytest.raises(PreconditionError):
        E.unit_current(g, (0, 0), (5, 5))
    split = flat_graph(4, [(0, 1), (2, 3)])
    with pytest.raises(NotConnectedError):
        E.unit_current(split, (0, 0), (0, 3))


def test_harmonic_residual_requires_interior(ladder):
    g = expand(ladder, -2, 2)
    u = E.VertexField.from_function(g, lambda v: Fraction(v[0]))
    assert E.harmonic_residual(u, g.interior()) == 0
    with pytest.raises(PreconditionError):
        E.harmonic_residual(u, [(2, 0)])


def test_maximum_principle(ladder):
    g = expand(ladder, -3, 3)
    f = E.unit_current(g, (3, 0), (-3, 0))
    u = E.ohm_dual_vertex(f, (-3, 0))
    inner = [v for v in g.vertices if v not in {(3, 0), (-3, 0)}]
    rep = E.maximum_principle_check(u, inner)
    assert rep.passed and not rep.constant
    assert rep.argmax == ((3, 0),) and rep.argmin == ((-3, 0),)
    # a function with an interior maximum is flagged as non-harmonic
    bump = E.VertexField.from_function(g, lambda v: Fraction(int(v == (0, 0))))
    with pytest.raises(PreconditionError):
        E.maximum_principle_check(bump, [(0, 0)])


def test_value_formatting(monkeypatch):
    assert E.format_value(Fraction(-3, 4)) == "-3/4"
    assert E.parse_value("-3/4") == Fraction(-3, 4)
    assert E.parse_value(E.format_value(0.1)) == 0.1
    monkeypatch.setenv(E.MODE_ENV, "float")
    assert E.default_mode() is E.NumericMode.FLOAT
    monkeypatch.delenv(E.MODE_ENV)
    assert E.default_mode() is E.NumericMode.EXACT
    with pytest.raises(ValueError):
        E.NumericMode.parse("fuzzy")


def test_field_algebra():
    g = square()
    f = E.unit_current(g, (0, 0), (0, 2))
    assert (f + f.scale(-1)).max_abs() == 0
    assert E.kcl_residual(f + f) == 0
    assert E.net_out(f + f, (0, 0)) == 2
