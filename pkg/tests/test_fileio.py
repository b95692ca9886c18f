import pytest

from cechgraph.complexes import cech_complex
from cechgraph.errors import DomainError
from cechgraph.fileio import (
    format_complex,
    format_graph,
    parse_complex,
    parse_graph,
    read_graph,
    rows_to_csv,
    vertex_map_from_json,
)
from cechgraph.graphs import cycle, hypercube
from cechgraph.persistence import coordinate_projection


def test_graph_round_trip(tmp_path):
    text = "# a square\np 4\ne 0 1\ne 1 2  # trailing comment\ne 2 3\ne 3 0\n"
    G = parse_graph(text)
    assert G == cycle(4)
    path = tmp_path / "g.txt"
    path.write_text(format_graph(G))
    assert read_graph(path) == G


@pytest.mark.parametrize("text", ["e 0 1\n", "p x\n", "p 3\nq 1 2\n", "p 3\ne 0\n"])
def test_graph_parse_errors(text):
    with pytest.raises(DomainError):
        parse_graph(text)


def test_complex_round_trip():
    K = cech_complex(hypercube(3), 2)
    text = format_complex(K)
    assert text.startswith("# dim 3\n# vertices 8\n0 1 2 4\n")
    assert parse_complex(text) == K
    assert format_complex(parse_complex(text)) == text
    with pytest.raises(DomainError):
        parse_complex("0 1 a\n")


def test_vertex_map_json():
    p = coordinate_projection(2, 1)
    assert vertex_map_from_json(p.to_json()).table == p.table
    with pytest.raises(DomainError):
        vertex_map_from_json('{"a": 1}')


def test_rows_to_csv():
    assert rows_to_csv([{"a": 1, "b": [1, 2]}]) == "a,b\n1,\"[1, 2]\"\n"
    assert rows_to_csv([]) == ""
