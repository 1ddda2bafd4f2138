import json
import random
from fractions import Fraction

import pytest

from conftest import rand_descriptor, rand_flat_transports, sphere3
from gauge_factory import random_gauge_maps
from translie import io
from translie.lie import abelian, heisenberg, sl2
from translie.local_system import LocalSystem
from translie.nerve import builtin


def roundtrip(obj):
    return json.loads(io.dumps(obj))


def test_rationals():
    assert io.encode_rational(Fraction(3)) == 3
    assert io.encode_rational(Fraction(-3, 4)) == "-3/4"
    assert io.parse_rational("-3/4") == Fraction(-3, 4)
    assert io.parse_rational(7) == 7
    for bad in ("1/0", "x", 0.5, None, True, [1]):
        with pytest.raises(io.InputError):
            io.parse_rational(bad, "here")


def test_error_messages_carry_the_path():
    doc = {"lie_algebra": "abelian1", "complex": "circle3", "edge_phi": [{"edge": [0, 1], "matrix": [["1/0"]]}]}
    with pytest.raises(io.InputError, match=r"edge_phi\[0\]\.matrix"):
        io.parse_descriptor(doc)
    doc = {"lie_algebra": "abelian1", "complex": "circle3", "edge_phi": [{"edge": [1, 0], "matrix": [[1]]}]}
    with pytest.raises(io.InputError, match=r"edge_phi\[0\]\.edge"):
        io.parse_descriptor(doc)
    with pytest.raises(io.InputError, match="complex"):
        io.parse_descriptor({"lie_algebra": "abelian1", "complex": "klein_bottle"})
    with pytest.raises(io.InputError, match="lie_algebra"):
        io.parse_descriptor({"lie_algebra": {"dim": 3, "brackets": [{"i": 0, "j": 1, "value": [0, 1, 0]}, {"i": 1, "j": 2, "value": [1, 0, 0]}]}, "complex": "circle3"})


def test_duplicate_entries_rejected():
    doc = {
        "lie_algebra": "abelian1",
        "complex": "sphere_tetra",
        "omega2": [{"triangle": [0, 1, 2], "value": [1]}, {"triangle": [0, 1, 2], "value": [2]}],
    }
    with pytest.raises(io.InputError, match="twice"):
        io.parse_descriptor(doc)


def test_builtin_names_with_and_without_prefix():
    assert io.parse_complex("builtin:torus7") == builtin("torus7")
    assert io.parse_complex("torus7") == builtin("torus7")
    assert io.parse_lie_algebra("builtin:sl2") == sl2()


def test_lie_algebra_roundtrip():
    for g in (abelian(2), heisenberg(), sl2()):
        assert io.parse_lie_algebra(roundtrip(io.dump_lie_algebra(g))) == g


@pytest.mark.parametrize("K", [builtin("circle3"), builtin("sphere_tetra"), builtin("torus7"), sphere3()])
def test_complex_roundtrip(K):
    assert io.parse_complex(roundtrip(io.dump_complex(K))) == K


def test_descriptor_roundtrip_is_exact_and_canonical():
    rng = random.Random(3)
    for g in (abelian(1), abelian(2), heisenberg()):
        for K in (builtin("sphere_tetra"), builtin("torus7"), sphere3()):
            d = rand_descriptor(rng, g, K)
            text = io.dumps(io.dump_descriptor(d))
            back = io.parse_descriptor(json.loads(text))
            assert back == d
            assert io.dumps(io.dump_descriptor(back)) == text


def test_local_system_roundtrip():
    rng = random.Random(4)
    K = builtin("torus7")
    rho = LocalSystem(K, 3, rand_flat_transports(rng, K, heisenberg()))
    assert io.parse_local_system(roundtrip(io.dump_local_system(rho))) == rho


def test_gauge_map_roundtrip():
    for g, A, _ in random_gauge_maps(15, seed=1):
        back = io.parse_gauge_map(roundtrip(io.dump_gauge_map(A)), g.dim, "gauge")
        assert back == A


def test_gauge_map_shape_errors():
    with pytest.raises(io.InputError, match=r"phi"):
        io.parse_gauge_map({"variables": 1, "phi": [[[]]]}, 2, "g")
    with pytest.raises(io.InputError, match=r"exponents"):
        io.parse_gauge_map({"variables": 1, "phi": [[[{"exponents": [1, 1], "coeff": 1}]]]}, 1, "g")


def test_map_parsing():
    T = builtin("torus7")
    f = io.parse_map({"source": "circle3", "vertex_map": [0, 1, 3]}, T)
    assert f.vertex_map == (0, 1, 3)
    with pytest.raises(io.InputError):
        io.parse_map({"source": "circle3", "vertex_map": [0, 1]}, T)
    with pytest.raises(io.InputError, match="target"):
        io.parse_map({"source": "circle3", "target": "sphere_tetra", "vertex_map": [0, 1, 2]}, T)


def test_load_json_reports_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{\n  "a": 1,\n  oops\n}')
    with pytest.raises(io.InputError, match="line 3"):
        io.load_json(p)
    with pytest.raises(io.InputError):
        io.load_json(tmp_path / "missing.json")


def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
