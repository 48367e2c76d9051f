import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jordanlab.cayley import cyclic_group
from jordanlab.errors import NotAPartition, NoTwoSidedIdentity, NotLatinSquare, ParseSyntaxError
from jordanlab.fileformats import (
    parse_loop_file,
    parse_matrix_file,
    parse_scheme_file,
    serialize_loop,
    serialize_scheme,
)
from jordanlab.named import random_loop
from jordanlab.rainbow import same_partition, standard_basis, trivial_rainbow

from corpus import o16, order_two_example


def test_scheme_examples():
    assert same_partition(parse_scheme_file("2 2\n0 1\n1 0"), trivial_rainbow(2))
    assert same_partition(parse_scheme_file("[[0,1],[2,0]]"), order_two_example())
    assert same_partition(parse_scheme_file("[[1,2],[2,1]]"), trivial_rainbow(2))


def test_scheme_variants():
    assert same_partition(parse_scheme_file("# comment\n[[0,1],\n [2,0]];\n"), order_two_example())
    assert same_partition(parse_scheme_file("0 1\n2 0\n"), order_two_example())
    assert same_partition(parse_scheme_file("1 2\n3 1\n"), order_two_example())
    assert same_partition(parse_scheme_file("# note\n2 3\n\n0 1\n# mid\n2 0\n"), order_two_example())


def test_scheme_errors():
    with pytest.raises(ParseSyntaxError) as info:
        parse_scheme_file("2 3\n0 1\n2 x\n")
    assert (info.value.line, info.value.column) == (3, 3)
    with pytest.raises(ParseSyntaxError) as info:
        parse_scheme_file("2 3\n0 1\n2 0 1\n")
    assert info.value.line == 3
    with pytest.raises(ParseSyntaxError) as info:
        parse_scheme_file("3 2\n0 1 1\n1 0 1\n")
    assert info.value.line == 4
    with pytest.raises(ParseSyntaxError) as info:
        parse_scheme_file("# header\n[[0,1],\n [2 0]]")
    assert info.value.line == 3
    with pytest.raises(ParseSyntaxError):
        parse_scheme_file("2 5\n0 1\n2 0\n")
    with pytest.raises(ParseSyntaxError):
        parse_scheme_file("# nothing\n")
    with pytest.raises(NotAPartition):
        parse_scheme_file("[[0,2],[2,0]]")
    assert "line 3, column 3" in str(ParseSyntaxError("bad", 3, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.integers(0, 3), min_size=n * n, max_size=n * n).map(
        lambda xs: standard_basis([np.array(xs).reshape(n, n)], n))))
def test_scheme_round_trip(cm):
    text = serialize_scheme(cm, comment="round trip")
    again = parse_scheme_file(text)
    assert same_partition(again, cm)
    assert serialize_scheme(again, comment="round trip") == text


def test_matrix_file():
    m = parse_matrix_file("0 1\n1 0\n")
    assert m.tolist() == [[0, 1], [1, 0]]
    assert parse_matrix_file("# adjacency\n[[0,1],[0,0]]").tolist() == [[0, 1], [0, 0]]
    with pytest.raises(ParseSyntaxError):
        parse_matrix_file("0 1\n1\n")


def test_loop_examples():
    L = parse_loop_file("2\n0 1\n1 0")
    assert L.n == 2 and L.table.tolist() == [[0, 1], [1, 0]]
    with pytest.raises(ParseSyntaxError) as info:
        parse_loop_file("3\n0 1 2\n1 2\n2 0 1\n")
    assert info.value.line == 3
    with pytest.raises(NoTwoSidedIdentity):
        # x * y = y + 2x (mod 3): row 0 is the identity row, no column is
        parse_loop_file("3\n0 1 2\n2 0 1\n1 2 0\n")
    with pytest.raises(NotLatinSquare):
        parse_loop_file("2\n0 1\n0 1\n")


def test_loop_identity_normalized(caplog):
    with caplog.at_level(logging.WARNING):
        L = parse_loop_file("3\n1 2 0\n2 0 1\n0 1 2\n")
    assert L.relabeling is not None
    assert L.table[0].tolist() == [0, 1, 2] and L.table[:, 0].tolist() == [0, 1, 2]
    assert any("relabel" in r.message for r in caplog.records)


@pytest.mark.parametrize("L", [cyclic_group(5), o16(), random_loop(6, 3)])
def test_loop_round_trip(L):
    text = serialize_loop(L)
    again = parse_loop_file(text)
    assert again == L
    assert serialize_loop(again) == text
