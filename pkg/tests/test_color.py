from fractions import Fraction

import pytest

from twoended import color as C
from twoended.electric import VertexField
from twoended.errors import ColouringError, PreconditionError
from twoended.graph import LayeredSpec, expand
from twoended.harmonic import periodic_harmonic

# cubic spec on which the harmonic function falls into the third pattern
CASE3_SPEC = LayeredSpec.from_rules(4, [(0, 1)], [(0, 2), (1, 3), (2, 0), (2, 3), (3, 1)], name="case3")


def colour(spec, R, as_float=False):
    w = expand(spec, -R, R)
    g = periodic_harmonic(spec, w)
    if as_float:
        g = VertexField(w, {v: float(x) for v, x in g.values.items()})
    case = C.classify_case(g, w.origin)
    return w, g, case, C.three_edge_colour(w, g, case)


@pytest.mark.parametrize("R", [4, 8, 12])
def test_ladder_case1(ladder, R):
    w, g, case, col = colour(ladder, R)
    assert case.kind == "CASE1" and (case.a, case.b, case.c) == (-1, 0, 1)
    assert C.interior_cases(g, w.interior()) == {"CASE1"}
    assert C.verify_colouring(col).passed
    # the rungs are red
    assert all(col.colours[((n, 0), (n, 1))] == C.RED for n in range(-R, R + 1))


@pytest.mark.parametrize("R", [4, 8, 12])
def test_gamma_case2(gamma, R):
    w, g, case, col = colour(gamma, R)
    assert case.kind == "CASE2"
    assert (case.a, case.b, case.c) == (Fraction(-1, 2), Fraction(-1, 2), 1)
    rep = C.verify_colouring(col)
    assert rep.passed and rep.proper and rep.perfect
    assert col.h_cycles and all(n == 10 for n in col.h_cycles)
    # cross edges are the red matching
    for (u, v), c in col.colours.items():
        assert (c == C.RED) == (u[0] != v[0])


@pytest.mark.parametrize("R", [4, 8])
def test_case3(R):
    w, g, case, col = colour(CASE3_SPEC, R)
    assert case.kind == "CASE3" and case.a < case.b < 0
    assert C.verify_colouring(col).passed


def test_float_input(gamma):
    _, _, case, col = colour(gamma, 4, as_float=True)
    assert case.kind == "CASE2"
    assert C.verify_colouring(col).passed


def test_non_harmonic_rejected(gamma):
    w = expand(gamma, -3, 3)
    g = VertexField.from_function(w, lambda v: Fraction(v[0] * v[0]))
    with pytest.raises(PreconditionError):
        C.classify_case(g, (0, 0))


def test_wrong_case_rejected(gamma):
    w = expand(gamma, -3, 3)
    g = periodic_harmonic(gamma, w)
    wrong = C.ColourCase("CASE1", -1, 0, 1, 10)
    with pytest.raises(ColouringError):
        C.three_edge_colour(w, g, wrong)


def test_verify_catches_bad_colouring(ladder):
    w, g, case, col = colour(ladder, 4)
    e = next(iter(col.colours))
    col.colours[e] = C.BLUE if col.colours[e] != C.BLUE else C.GREEN
    assert not C.verify_colouring(col).passed
