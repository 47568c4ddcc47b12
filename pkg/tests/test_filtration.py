import math
import random
from fractions import Fraction

import pytest

from harmonic_barcode.barcode import Bar
from harmonic_barcode.filtration import (FiltrationError, TimestampMap,
                                         closure, format_rational, lower_star_filtration,
                                         parse_complex, parse_filtration,
                                         parse_vertex_function, random_filtration,
                                         serialize_filtration, to_closed_open)

from conftest import fixture_path


def test_triangle_fixture_shape(triangle):
    assert triangle.m == 7
    assert triangle.dims == [0, 0, 0, 1, 1, 1, 2]


def test_comments_blank_lines_and_rationals():
    F = parse_filtration("# header\n\n0 0\n1/2 1   # trailing\n0.75 0 1\n")
    assert F.timestamps == [0, Fraction(1, 2), Fraction(3, 4)]


def test_empty_input():
    F = parse_filtration("")
    assert F.m == 0
    assert F.timestamp_map()(1) == math.inf


@pytest.mark.parametrize("text, line", [
    ("0 0\n1 0 1\n", 2),            # missing face
    ("0 0\n0 0\n", 2),              # duplicate
    ("1 0\n0 1\n", 2),              # decreasing timestamp
    ("0 0\nx 1\n", 2),              # bad timestamp
    ("0 0\n0 1\n0 1 0\n", 3),       # not ascending
    ("0 -1\n", 1),                  # negative vertex
    ("0\n", 1),                     # no vertices
    ("0 0\n# c\n1 a\n", 3),         # bad vertex
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(FiltrationError) as err:
        parse_filtration(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}:")


def test_serialize_round_trip(triangle):
    again = parse_filtration(serialize_filtration(triangle))
    assert again.simplices == triangle.simplices
    assert again.timestamps == triangle.timestamps


def test_format_rational():
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(2) == "2"
    assert format_rational(math.inf) == "inf"


def test_timestamp_map_ends():
    tau = TimestampMap([0, 1, 1])
    assert tau(0) == -math.inf and tau(1) == 0 and tau(3) == 1 and tau(4) == math.inf
    with pytest.raises(ValueError):
        TimestampMap([1, 0])


def test_closure_adds_faces():
    assert len(closure([[0, 1, 2]])) == 7
    assert len(parse_complex("0 1 2\n2 3\n")) == 9


def test_lower_star_order_matches_fixture():
    F, tau = lower_star_filtration([[0, 1, 2]], {0: 0, 1: 1, 2: 2})
    expected = parse_filtration(fixture_path("lower_star_triangle.txt").read_text())
    assert F.simplices == expected.simplices
    assert F.timestamps == expected.timestamps


def test_lower_star_ties_broken_by_dimension_then_vertices():
    F, _ = lower_star_filtration([[0, 1], [1, 2]], {0: 1, 1: 0, 2: 1})
    assert [tuple(s) for s in F.simplices] == [(1,), (0,), (2,), (0, 1), (1, 2)]


def test_lower_star_missing_value():
    with pytest.raises(FiltrationError):
        lower_star_filtration([[0, 1]], {0: 0})


def test_vertex_function_parsing():
    assert parse_vertex_function("0 1/2\n1 3\n") == {0: Fraction(1, 2), 1: 3}
    with pytest.raises(FiltrationError):
        parse_vertex_function("0 1\n0 2\n")


def test_closed_open_map_drops_zero_length_bars():
    tau = TimestampMap([0, 1, 1, 2, 2, 2, 2])
    bars = [Bar(0, 1, 2), Bar(0, 2, 3), Bar(0, 3, 7), Bar(1, 6, 6)]
    out = to_closed_open(bars, tau)
    # [2,3] maps to [tau(2), tau(4)) = [1, 2); [1,2] to [0, 1); [6,6] is dropped.
    assert [(iv.birth, iv.death) for iv in out[0]] == [(0, 1), (1, 2), (1, math.inf)]
    assert 1 not in out


def test_closed_open_hypothetical_tau():
    # A bar [1, 3] whose endpoints map to 0 and 1 becomes [0, 1).
    tau = TimestampMap([0, Fraction(1, 2), Fraction(1, 2), 1])
    (iv,) = to_closed_open([Bar(0, 1, 3)], tau)[0]
    assert (iv.birth, iv.death) == (0, 1)


def test_random_filtrations_are_valid():
    for seed in range(30):
        F = random_filtration(random.Random(seed), 40, 3)
        assert 1 <= F.m <= 40 and F.max_dim <= 3
        parse_filtration(serialize_filtration(F))


def test_random_filtration_is_reproducible():
    a = random_filtration(random.Random(7), 30, 2)
    b = random_filtration(random.Random(7), 30, 2)
    assert a.simplices == b.simplices
