"""ASCII and JSON table serialization round trips."""
from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polybetti.linalg import PrimeModulus
from polybetti.table import (PROVENANCE_TAGS, BettiTable, parse_ascii,
                             parse_json, render_ascii, render_json)

PRIME = PrimeModulus(40009)
TAGS = sorted(PROVENANCE_TAGS)


@st.composite
def tables(draw):
    n = draw(st.integers(3, 11))
    width = n - 3
    b = draw(st.lists(st.integers(0, 99999), min_size=width, max_size=width))
    c = draw(st.lists(st.integers(0, 99999), min_size=width, max_size=width))
    rig = st.lists(st.booleans(), min_size=width, max_size=width)
    # a computed zero is exact in every characteristic, so the engine
    # never emits a non-rigorous zero; mirror that here
    b_rig = [r or v == 0 for r, v in zip(draw(rig), b)]
    c_rig = [r or v == 0 for r, v in zip(draw(rig), c)]
    tags = st.lists(st.sampled_from(TAGS), min_size=width, max_size=width)
    bigraded = {}
    if draw(st.booleans()) and width:
        for _ in range(draw(st.integers(1, 4))):
            key = (draw(st.sampled_from("bc")), draw(st.integers(1, width)),
                   (draw(st.integers(-3, 9)), draw(st.integers(-3, 9))))
            bigraded[key] = draw(st.integers(0, 50))
    return BettiTable(n=n, b=b, c=c, prime=PRIME,
                      b_provenance=draw(tags), c_provenance=draw(tags),
                      b_rigorous=b_rig, c_rigorous=c_rig, bigraded=bigraded)


@given(tables())
def test_ascii_round_trip(table):
    n, b, c, b_rig, c_rig = parse_ascii(render_ascii(table))
    assert (n, b, c) == (table.n, table.b, table.c)
    assert b_rig == table.b_rigorous
    assert c_rig == table.c_rigorous


@given(tables())
def test_json_round_trip(table):
    assert parse_json(render_json(table)) == table


@given(tables())
def test_ascii_layout_shape(table):
    lines = render_ascii(table).splitlines()
    assert len(lines) == 4
    header = lines[0].split()
    assert header == [str(p) for p in range(table.n - 2)]
    assert lines[1].split() == ["0", "1"] + ["0"] * (table.n - 3)
    assert lines[2].split()[0] == "1" and lines[3].split()[0] == "2"


def test_star_marks_exactly_the_modular_entries():
    table = BettiTable(
        n=6, b=[4, 0, 7], c=[0, 2, 9], prime=PRIME,
        b_provenance=["computed"] * 3, c_provenance=["computed"] * 3,
        b_rigorous=[False, True, True], c_rigorous=[True, False, True])
    text = render_ascii(table)
    lines = text.splitlines()
    # row one prints b1 b2 b3 left to right; only b1 is modular
    assert lines[2].split() == ["1", "0", "4*", "0", "7"]
    # row two prints c3 c2 c1 left to right; only c2 is modular
    assert lines[3].split() == ["2", "0", "9", "2*", "0"]


def test_reversed_quadratic_row_layout():
    table = BettiTable(
        n=7, b=[1, 2, 3, 4], c=[10, 20, 30, 40], prime=PRIME,
        b_provenance=["computed"] * 4, c_provenance=["computed"] * 4,
        b_rigorous=[True] * 4, c_rigorous=[True] * 4)
    lines = render_ascii(table).splitlines()
    assert lines[2].split() == ["1", "0", "1", "2", "3", "4"]
    assert lines[3].split() == ["2", "0", "40", "30", "20", "10"]


def test_corner_only_table():
    table = BettiTable(n=3, b=[], c=[], prime=PRIME, b_provenance=[],
                       c_provenance=[], b_rigorous=[], c_rigorous=[])
    text = render_ascii(table)
    assert text.split() == ["0", "0", "1", "1", "0", "2", "0"]
    assert parse_ascii(text) == (3, [], [], [], [])


def test_out_of_range_entry_reads_as_zero():
    table = BettiTable(n=6, b=[6, 8, 3], c=[0, 0, 0], prime=PRIME,
                       b_provenance=["computed"] * 3,
                       c_provenance=["computed"] * 3,
                       b_rigorous=[True] * 3, c_rigorous=[True] * 3)
    assert table.b_entry(2) == 8
    assert table.b_entry(0) == 0
    assert table.b_entry(4) == 0
    assert table.c_entry(-1) == 0
    assert table.c_entry(17) == 0


def test_construction_validation():
    kw = dict(prime=PRIME, b_provenance=["computed"] * 3,
              c_provenance=["computed"] * 3,
              b_rigorous=[True] * 3, c_rigorous=[True] * 3)
    with pytest.raises(ValueError):
        BettiTable(n=6, b=[1, 2], c=[0, 0, 0], **kw)
    with pytest.raises(ValueError):
        BettiTable(n=6, b=[1, 2, -3], c=[0, 0, 0], **kw)
    with pytest.raises(ValueError):
        BettiTable(n=6, b=[1, 2, 3], c=[0, 0, 0], prime=PRIME,
                   b_provenance=["guesswork"] * 3,
                   c_provenance=["computed"] * 3,
                   b_rigorous=[True] * 3, c_rigorous=[True] * 3)


@pytest.mark.parametrize("bad", [
    "",
    "0 1\n0 1 0\n1 0 0",
    "0 1\n0 1 0\n1 0 0\n2 0 0\nextra 0 0",
    "1 0\n0 1 0\n1 0 0\n2 0 0",
    "0 1\n0 0 0\n1 0 0\n2 0 0",
    "0 1\n0 1 0\n9 0 0\n2 0 0",
    "0 1\n0 1 0\n1 7 0\n2 0 0",
    "0 1\n0 1 0\n1 0 x\n2 0 0",
])
def test_parse_ascii_rejects_malformed_text(bad):
    with pytest.raises(ValueError):
        parse_ascii(bad)


def test_provenance_vocabulary_is_frozen():
    assert PROVENANCE_TAGS == {"computed", "crossfilled", "zero_by_shape",
                               "zero_by_boundary_count", "zero_by_interior",
                               "eagon_northcott"}


def test_bigraded_json_entries_are_explicit():
    table = BettiTable(
        n=6, b=[6, 8, 3], c=[0, 0, 0], prime=PRIME,
        b_provenance=["computed"] * 3, c_provenance=["computed"] * 3,
        b_rigorous=[True] * 3, c_rigorous=[True] * 3,
        bigraded={("b", 1, (2, 1)): 4, ("b", 1, (1, 2)): 2})
    data = parse_json(render_json(table))
    assert data.bigraded == table.bigraded
    raw = render_json(table)
    assert '"bidegree"' in raw and '"strand"' in raw
