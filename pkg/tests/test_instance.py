import pytest

from powerdom import PdsInstance, generate_random, parse_instance, write_instance
from powerdom.errors import ParseError

from conftest import random_instance


def test_parse_minimal_path():
    inst = parse_instance("p pds 3 2\ne 0 1\ne 1 2\n")
    assert inst.n == 3 and inst.edges == ((0, 1), (1, 2))
    assert all(inst.propagating)
    assert not inst.pre_selected and not inst.excluded


def test_parse_nonpropagating_flag():
    inst = parse_instance("p pds 2 1\nv 1 N\ne 0 1\n")
    assert inst.propagating == (True, False)


def test_parse_conflicting_flags_rejected():
    with pytest.raises(ParseError):
        parse_instance("p pds 2 1\nv 0 S\nv 0 X\ne 0 1\n")


def test_parse_reports_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_instance("p pds 2 1\ne 0 0\n")
    assert "line 2" in str(err.value)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_instance("e 0 1\n")  # header must come first
    with pytest.raises(ParseError):
        parse_instance("p pds 2 2\ne 0 1\n")  # edge count mismatch
    with pytest.raises(ParseError):
        parse_instance("p pds 2 1\ne 0 5\n")  # id out of range
    with pytest.raises(ParseError):
        parse_instance("p pds 2 1\nv 0 Q\ne 0 1\n")  # unknown flag
    with pytest.raises(ParseError):
        parse_instance("p pds 2 2\ne 0 1\ne 1 0\n")  # duplicate edge


def test_parse_flags_idempotent_and_comments():
    text = "# comment\np pds 2 1\nv 0 N\nv 0 N\nv 1 S\ne 0 1  # trailing\n"
    inst = parse_instance(text)
    assert inst.propagating == (False, True)
    assert inst.pre_selected == frozenset({1})


def test_parse_edgelist():
    inst = parse_instance("0 1\n1 3\n", fmt="edgelist")
    assert inst.n == 4
    assert inst.edges == ((0, 1), (1, 3))
    assert all(inst.propagating)


def test_write_roundtrip_examples():
    p3 = PdsInstance(3, [(1, 2), (0, 1)])
    assert parse_instance(write_instance(p3)) == p3
    labelled = PdsInstance(2, [(0, 1)], labels={0: "bus7", 1: "bus9"})
    assert parse_instance(write_instance(labelled)) == labelled
    empty = PdsInstance(0)
    assert write_instance(empty).splitlines() == ["p pds 0 0"]
    assert parse_instance(write_instance(empty)) == empty


def test_write_edges_sorted():
    inst = PdsInstance(4, [(3, 2), (1, 0), (0, 2)])
    lines = [l for l in write_instance(inst).splitlines() if l.startswith("e")]
    assert lines == ["e 0 1", "e 0 2", "e 2 3"]


def test_roundtrip_random():
    for seed in range(80):
        inst = random_instance(seed)
        assert parse_instance(write_instance(inst)) == inst


def test_invariants_rejected():
    with pytest.raises(ValueError):
        PdsInstance(2, [(0, 0)])
    with pytest.raises(ValueError):
        PdsInstance(2, [(0, 5)])
    with pytest.raises(ValueError):
        PdsInstance(2, pre_selected=[0], excluded=[0])


def test_generate_random_basic():
    inst = generate_random(5, 0, 0.0, seed=1)
    assert inst.n == 5 and inst.m == 0 and all(inst.propagating)
    k4 = generate_random(4, 6, 0.0, seed=7)
    assert k4.m == 6  # complete graph forced
    assert all(k4.degree(v) == 3 for v in range(4))


def test_generate_random_deterministic():
    a = generate_random(8, 10, 0.5, seed=42)
    b = generate_random(8, 10, 0.5, seed=42)
    assert a == b
    assert sum(1 for p in a.propagating if not p) == 4


def test_generate_random_guard():
    with pytest.raises(ValueError):
        generate_random(3, 4, 0.0, seed=0)
