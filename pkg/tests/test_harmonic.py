from fractions import Fraction

import pytest

from twoended import harmonic as H
from twoended.electric import NumericMode, VertexField
from twoended.errors import ConvergenceError, PreconditionError
from twoended.graph import cut_from, expand


def test_default_schedule():
    assert H.default_schedule(3, 3, 64) == [4, 5, 7, 11, 19, 35, 64]
    assert H.default_schedule(1, 3, 64) == [5, 9, 17, 33, 64]
    assert H.default_schedule(0, 3, 8) == [4, 8]


def test_separation_radius(path, ladder, gamma):
    assert H.separation_radius(path) == 0
    assert H.separation_radius(ladder) == 1
    assert H.separation_radius(gamma) == 3


def test_path_limit_is_linear(path):
    run = H.limit_harmonic(path, probe=3)
    assert run.converged and run.steps[1].sup_diff == 0
    assert all(run.h[v] == v[0] for v in run.h.carrier.vertices)


@pytest.fixture(scope="module")
def gamma_run(gamma):
    return H.limit_harmonic(gamma, probe=3, eps=1e-8)


def test_gamma_limit(gamma, gamma_run):
    run = gamma_run
    assert run.converged and run.n0 == 3
    assert run.harmonic_residual() == 0
    assert run.lipschitz <= 1
    assert run.cut_flow == 1
    oracle = H.periodic_harmonic(gamma, run.h.carrier)
    assert max(abs(run.h[v] - oracle[v]) for v in oracle.values) < 1e-12
    assert "converged: true" in run.report()


def test_periodic_closed_form(gamma, ladder):
    g = expand(gamma, -3, 3)
    h = H.periodic_harmonic(gamma, g)
    assert all(h[v] == Fraction(3 * v[0] + v[1] % 2, 10) for v in g.vertices)
    g = expand(ladder, -3, 3)
    h = H.periodic_harmonic(ladder, g)
    assert all(h[v] == Fraction(v[0], 2) for v in g.vertices)


def test_float_mode_agrees(ladder):
    ex = H.limit_harmonic(ladder, probe=2, eps=1e-6)
    fl = H.limit_harmonic(ladder, probe=2, eps=1e-6, mode=NumericMode.FLOAT)
    assert max(abs(float(ex.h[v]) - fl.h[v]) for v in ex.h.values) < 1e-6


def test_non_convergence_reports_trace(gamma):
    with pytest.raises(ConvergenceError) as exc:
        H.limit_harmonic(gamma, probe=3, eps=1e-12, max_radius=11)
    trace = exc.value.trace
    assert [r for r, _ in trace] == [4, 5, 7, 11] and trace[0][1] is None


@pytest.mark.parametrize(
    "kwargs",
    [dict(eps=0), dict(schedule=[6, 5]), dict(schedule=[2, 8]), dict(probe=5, schedule=[4, 8])],
)
def test_schedule_preconditions(gamma, kwargs):
    with pytest.raises(PreconditionError):
        H.limit_harmonic(gamma, **kwargs)


def test_cut_invariance_on_layers(gamma):
    g = expand(gamma, -4, 4)
    h = H.periodic_harmonic(gamma, g)
    cuts = [cut_from([v for v in g.vertices if v[0] > n], g) for n in (-2, 0, 2)]
    rep = H.verify_cut_invariance(h, cuts + [cuts[1].reversed()])
    assert rep.passed and rep.signs == (1, 1, 1, -1)
    assert rep.max_deviation == 0 and rep.reference == 1 and rep.flows[-1] == -1


def test_cut_invariance_rejects_bad_cut(gamma):
    g = expand(gamma, -4, 4)
    h = H.periodic_harmonic(gamma, g)
    with pytest.raises(PreconditionError):
        H.verify_cut_invariance(h, [cut_from([(0, 0)], g)])


def test_cut_invariance_rejects_sources(gamma_run):
    run = gamma_run
    g = run.full.carrier
    cut = cut_from([v for v in g.vertices if v[0] > 0], g)
    with pytest.raises(PreconditionError):
        H.verify_cut_invariance(run.full, [cut])  # terminals are not at the window boundary
    assert H.verify_cut_invariance(run.full, [cut, run.cut], ends=run.ends).passed


def test_affine_fit(gamma):
    g = expand(gamma, -2, 2)
    h = H.periodic_harmonic(gamma, g)
    h2 = h.scale(Fraction(-3)).shift(Fraction(5))
    alpha, beta, res = H.affine_fit(h, h2)
    assert (alpha, beta, res) == (-3, 5, 0)
    flat = VertexField.from_function(g, lambda v: Fraction(1))
    with pytest.raises(PreconditionError):
        H.affine_fit(flat, h)


def test_zero_flow_check(gamma):
    g = expand(gamma, -2, 2)
    cut = cut_from([v for v in g.vertices if v[0] > 0], g)
    h = H.periodic_harmonic(gamma, g)
    rep = H.zero_flow_implies_constant_check(h, cut)
    assert rep.consistent and rep.flow == 1
    const = VertexField.from_function(g, lambda v: Fraction(0))
    assert H.zero_flow_implies_constant_check(const, cut).consistent
