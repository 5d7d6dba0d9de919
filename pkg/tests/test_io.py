import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_k3.io import ParseError, PolytopeRecord, format_record, parse_vertex_list, read_vertex_file

from conftest import data_path

DELTA = {(2, -1, 0), (-1, 2, 0), (-1, -1, 3), (-1, -1, -3)}


def test_column_layout():
    (rec,) = parse_vertex_list("3 4\n2 -1 -1 -1\n-1 2 -1 -1\n0 0 3 -3\n")
    assert set(rec.vertices) == DELTA and rec.label == "#1" and rec.dimension == 3


def test_row_layout_is_the_transpose():
    (rec,) = parse_vertex_list("4 3 M:5 4\n2 -1 0\n-1 2 0\n-1 -1 3\n-1 -1 -3\n")
    assert set(rec.vertices) == DELTA and rec.label == "M:5 4"


def test_multiple_records_comments_and_labels():
    text = "# header comment\n3 4 first\n2 -1 -1 -1\n-1 2 -1 -1\n0 0 3 -3\n\n\n3 4\n1 0 -1 -1\n0 1 -1 -1\n0 0 1 -1\n"
    recs = parse_vertex_list(text)
    assert [r.label for r in recs] == ["first", "#2"]
    assert [r.line for r in recs] == [2, 8]


@pytest.mark.parametrize(
    "text,line",
    [
        ("3 four\n1 2 3\n", 1),
        ("3\n", 1),
        ("3 4\n1 2 3 4\n1 2 x 4\n1 2 3 4\n", 3),
        ("3 4\n1 2 3 4\n1 2 3\n1 2 3 4\n", 3),
        ("3 4\n1 2 3 4\n1 2 3 4\n", 3),
        ("3 4\n1 2 3 4\n\n1 2 3 4\n1 2 3 4\n", 3),
        ("0 4\n", 1),
    ],
)
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_vertex_list(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


vertex = st.tuples(*[st.integers(-9, 9)] * 3)


@given(st.lists(vertex, min_size=4, max_size=8), st.sampled_from(["", "abc", "KS 17"]))
def test_format_round_trip(vs, label):
    rec = PolytopeRecord(label, tuple(vs))
    (back,) = parse_vertex_list(format_record(rec))
    assert back.vertices == rec.vertices
    assert back.label == (label or "#1")


def test_data_files_parse():
    assert len(read_vertex_file(data_path("random_reflexive.txt"))) == 60
    assert [r.label for r in read_vertex_file(data_path("examples.txt"))] == [
        "prism", "long_edge", "bipyramid", "plane_bundle", "tetra", "skew_tetra"
    ]
