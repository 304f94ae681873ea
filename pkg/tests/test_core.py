import itertools
import random

import pytest
from hypothesis import given, strategies as st

from lclpaths.codec import (CodecError, decode, encode, instance_from_json, problem_from_json,
                            problem_to_json)
from lclpaths.core import (CYCLE, PATH, Instance, Labeling, LclError, LclProblem, NormalizedLcl,
                           check_solvable_up_to, check_window, random_instance, solve_instance,
                           verify_labeling, verify_normalized)
from lclpaths.fixtures import coloring, copy_input, from_predicate


def brute_labelings(problem, instance):
    """Every labeling, checked window by window with independent indexing."""
    n, r = instance.n, problem.radius
    good = []
    for outs in itertools.product(problem.sigma_out, repeat=n):
        ok = True
        for v in range(n):
            if instance.cyclic:
                cells = tuple((instance.inputs[(v + d) % n], outs[(v + d) % n]) for d in range(-r, r + 1))
                c = r
            else:
                lo, hi = max(0, v - r), min(n - 1, v + r)
                cells = tuple((instance.inputs[i], outs[i]) for i in range(lo, hi + 1))
                c = v - lo
            w = (cells, c)
            rev = (cells[::-1], len(cells) - 1 - c)
            if w not in problem.windows and (problem.oriented or rev not in problem.windows):
                ok = False
                break
        if ok:
            good.append(outs)
    return good


small_problems = st.sampled_from(["2col", "3col", "copy", "allowed", "mis"])


@given(name=small_problems, n=st.integers(1, 7), topo=st.sampled_from([PATH, CYCLE]),
       seed=st.integers(0, 10 ** 6))
def test_solver_matches_enumeration(problems, name, n, topo, seed):
    p = problems[name]
    if topo == CYCLE and n < 3:
        return
    inst = random_instance(p, n, random.Random(seed), topo)
    sols = brute_labelings(p, inst)
    got = solve_instance(p, inst)
    if not sols:
        assert got is None
    else:
        order = {o: i for i, o in enumerate(p.sigma_out)}
        assert got.outputs == min(sols, key=lambda s: [order[o] for o in s])
        assert verify_labeling(p, inst, got) == []


@given(name=small_problems, n=st.integers(3, 7), seed=st.integers(0, 10 ** 6))
def test_verifier_flags_exactly_bad_nodes(problems, name, n, seed):
    p = problems[name]
    rng = random.Random(seed)
    inst = random_instance(p, n, rng, CYCLE)
    outs = [rng.choice(p.sigma_out) for _ in range(n)]
    bad = verify_labeling(p, inst, outs)
    for v in range(n):
        cells = [(inst.inputs[(v + d) % n], outs[(v + d) % n]) for d in (-1, 0, 1)]
        assert (v in bad) != check_window(p, cells, 1)


def test_two_coloring_odd_cycle_unsolvable():
    p = coloring(2)
    rep = check_solvable_up_to(p, 7, topologies=(CYCLE,))
    assert [n for _, n, _ in rep.unsolvable] == [3, 5, 7]
    assert solve_instance(p, Instance(PATH, ["a"] * 7)) is not None


def test_problem_rejects_bad_definitions():
    with pytest.raises(LclError):
        LclProblem("x", ("a",), ("0",), -1, frozenset())
    with pytest.raises(LclError):
        LclProblem("x", ("a", "a"), ("0",), 1, frozenset())
    asym = frozenset({((("a", "0"), ("a", "1")), 0)})
    with pytest.raises(LclError):
        LclProblem("x", ("a",), ("0", "1"), 1, asym)
    assert LclProblem("x", ("a",), ("0", "1"), 1, asym, oriented=True).oriented
    with pytest.raises(LclError):
        LclProblem("x", ("a",), ("0",), 1, frozenset({((("b", "0"),), 0)}))


def test_instance_ids_and_cycle_length():
    with pytest.raises(LclError):
        Instance(CYCLE, ["a", "a"], [1, 1])
    with pytest.raises(LclError):
        Instance("tree", ["a"])
    with pytest.raises(LclError):
        verify_labeling(coloring(3), Instance(CYCLE, ["a", "a"], [1, 2]), ["0", "1"])
    inst = Instance(PATH, ["a", "b", "c"], [5, 6, 7])
    assert inst.reversed().inputs == ("c", "b", "a") and inst.reversed().ids == (7, 6, 5)


def test_normalized_problem_checks_predecessor():
    nl = NormalizedLcl(["A", "B"], [("0", "A"), ("1", "B"), ("1", "A")], [("A", "B"), ("B", "A"), ("B", "B")])
    inst = Instance(PATH, ["0", "1", "1"])
    assert verify_normalized(nl, inst, ["A", "B", "B"]) == []
    assert verify_normalized(nl, inst, ["A", "A", "B"]) == [1]
    p = nl.to_problem()
    for outs in itertools.product("AB", repeat=3):
        assert (verify_labeling(p, inst, outs) == []) == (verify_normalized(nl, inst, outs) == [])


@given(name=small_problems)
def test_problem_json_round_trip(problems, name):
    p = problems[name]
    q = decode(encode(p), "problem")
    assert q == p
    assert problem_to_json(q) == problem_to_json(p)


@given(inputs=st.lists(st.sampled_from("ab"), min_size=1, max_size=20), cyc=st.booleans())
def test_instance_json_round_trip(inputs, cyc):
    inst = Instance(CYCLE if cyc else PATH, inputs)
    assert decode(encode(inst), "instance") == inst


def test_codec_errors_carry_paths():
    doc = problem_to_json(copy_input())
    doc["windows"][3]["cells"][0][1] = "7"
    with pytest.raises(CodecError) as e:
        problem_from_json(doc)
    assert e.value.path == ("windows", 3, "cells", 0, 1)
    with pytest.raises(CodecError):
        decode(b"{not json", "problem")
    with pytest.raises(CodecError) as e:
        instance_from_json({"topology": "path", "inputs": ["a", "z"]}, coloring(3))
    assert e.value.path == ("inputs", 1)


def test_from_predicate_builds_truncated_windows():
    p = from_predicate("t", ("a",), ("0", "1"), 1, lambda cells, c: True)
    lengths = sorted({len(cells) for cells, _ in p.windows})
    assert lengths == [1, 2, 3]
    # 2 outputs: 2 single + 2*4 pairs + 8 triples
    assert len(p.windows) == 2 + 8 + 8


def test_labeling_length_mismatch():
    with pytest.raises(LclError):
        verify_labeling(coloring(3), Instance(CYCLE, "aaa"), Labeling(("0", "1")))
